#include <doctest.h>

#include "bq/algo.hpp"
#include "bq/oracle.hpp"
#include "bq/surface.hpp"
#include "gen.hpp"

using namespace bq;

namespace {

const Context kCtxX = Context().push_type("X", top_type());

TypePtr ty(const std::string& s, SystemId sys = SystemId::Kt) {
  return parse_type(s, sys);
}

}  // namespace

TEST_CASE("search finds the mixed-rule display") {
  SearchResult r = search_subtype(SystemId::Kt, kCtxX,
                                  ty("forall_k Z <: X . Z -> Z"),
                                  ty("forall_t Z <: X . Z -> X"), 8);
  REQUIRE(r.found());
  CHECK(r.derivation->rule == RuleId::SubForallLoc);
  CHECK(check_subtype_derivation(SystemId::Kt, *r.derivation).ok);
}

TEST_CASE("reflexivity is found at depth one") {
  SearchResult r =
      search_subtype(SystemId::Kt, Context(), top_type(), top_type(), 1);
  CHECK(r.found());
  CHECK(r.depth_used == 1);
}

TEST_CASE("top-style below kernel is not derivable") {
  TypePtr lhs = ty("forall_t Z <: Top . Z");
  TypePtr rhs = ty("forall_k Z <: Top . Z");
  SearchResult r = search_subtype(SystemId::Kt, Context(), lhs, rhs, 12);
  CHECK_FALSE(r.found());
  // corroborated by the algorithmic system
  AlgoResult a = algo_subtype(Context(), lhs, rhs);
  CHECK_FALSE(a.accepted);
  CHECK_FALSE(a.fuel_exhausted());
}

TEST_CASE("ill-formed queries are refused") {
  CHECK_THROWS_AS(
      search_subtype(SystemId::Kt, Context(), tvar("X"), top_type(), 4),
      InvalidInput);
  CHECK_THROWS_AS(search_subtype(SystemId::Kernel, Context(),
                                 ty("forall_t Z <: Top . Z", SystemId::Ftop),
                                 top_type(), 4),
                  InvalidInput);
}

TEST_CASE("depth monotonicity and determinism") {
  TypePtr lhs = ty("forall_k Z <: X . Z -> Z");
  TypePtr rhs = ty("forall_t Z <: X . Z -> X");
  SearchResult first = search_subtype(SystemId::Kt, kCtxX, lhs, rhs, 6);
  REQUIRE(first.found());
  for (int d = first.depth_used; d <= 12; ++d) {
    SearchResult r = search_subtype(SystemId::Kt, kCtxX, lhs, rhs, d);
    CHECK(r.found());
    CHECK(r.depth_used == first.depth_used);
    CHECK(deriv_height(*r.derivation) <= static_cast<uint32_t>(d));
  }
  SearchResult again = search_subtype(SystemId::Kt, kCtxX, lhs, rhs, 6);
  CHECK(again.nodes_expanded == first.nodes_expanded);
  CHECK(again.depth_used == first.depth_used);
}

TEST_CASE("transitivity through a variable chain") {
  Context ctx = Context()
                    .push_type("A", arrow(top_type(), top_type()))
                    .push_type("B", tvar("A"));
  // B <: Top -> Top needs Var and Trans through A
  SearchResult r = search_subtype(SystemId::Kt, ctx, tvar("B"),
                                  arrow(top_type(), top_type()), 8);
  REQUIRE(r.found());
  CHECK(check_subtype_derivation(SystemId::Kt, *r.derivation).ok);
}

TEST_CASE("meet reasoning in the target calculus") {
  TypePtr s = arrow(top_type(), top_type());
  // X /\ S <: S and S' <: S imply X /\ S' <: S via Trans
  Context ctx = Context().push_type("X", top_type());
  TypePtr goal_l = meet(tvar("X"), s);
  SearchResult r1 = search_subtype(SystemId::Fwedge, ctx, goal_l, s, 6);
  CHECK(r1.found());
  // S <: Top /\ Top by meet introduction
  SearchResult r2 = search_subtype(SystemId::Fwedge, Context(), s,
                                   meet(top_type(), top_type()), 6);
  REQUIRE(r2.found());
  CHECK(check_subtype_derivation(SystemId::Fwedge, *r2.derivation).ok);
}

TEST_CASE("original-rule searches: the existential encoding pair") {
  // ctx A <: Top, B <: A; exists (X<:B).Top is below exists (X<:A).Top under
  // the original rule but the kernel variant rejects different bounds.
  Context ctx = Context().push_type("A", top_type()).push_type("B", tvar("A"));
  TypePtr lhs_orig = parse_type(
      "forall Y . (forall X <: B . Top -> Y) -> Y", SystemId::FsubOrig);
  TypePtr rhs_orig = parse_type(
      "forall Y . (forall X <: A . Top -> Y) -> Y", SystemId::FsubOrig);
  SearchResult orig = search_subtype(SystemId::FsubOrig, ctx, lhs_orig, rhs_orig, 10);
  REQUIRE(orig.found());
  CHECK(check_subtype_derivation(SystemId::FsubOrig, *orig.derivation).ok);

  TypePtr lhs_k = parse_type(
      "forall_k Y . (forall_k X <: B . Top -> Y) -> Y", SystemId::Kernel);
  TypePtr rhs_k = parse_type(
      "forall_k Y . (forall_k X <: A . Top -> Y) -> Y", SystemId::Kernel);
  SearchResult kern = search_subtype(SystemId::Kernel, ctx, lhs_k, rhs_k, 10);
  CHECK_FALSE(kern.found());
}

TEST_CASE("found derivations check over random related pairs") {
  gen::Rng rng(99);
  for (SystemId sys :
       {SystemId::Kt, SystemId::Kernel, SystemId::Ftop, SystemId::Fwedge}) {
    Context ctx = gen::context(rng, sys, 2, 3);
    int found = 0;
    for (int i = 0; i < 40; ++i) {
      TypePtr t = gen::type(rng, ctx, sys, 4);
      gen::Related up = gen::supertype(rng, ctx, sys, t, 2);
      REQUIRE(check_subtype_derivation(sys, *up.deriv).ok);
      SearchResult r = search_subtype(sys, ctx, t, up.type, 12);
      CHECK(r.found());
      if (r.found()) {
        ++found;
        CHECK(check_subtype_derivation(sys, *r.derivation).ok);
      }
    }
    CHECK(found == 40);
  }
}

TEST_CASE("kernel derivations re-check under the decorated system") {
  gen::Rng rng(3);
  Context ctx = gen::context(rng, SystemId::Kernel, 2, 3);
  for (int i = 0; i < 30; ++i) {
    TypePtr t = gen::type(rng, ctx, SystemId::Kernel, 4);
    gen::Related up = gen::supertype(rng, ctx, SystemId::Kernel, t, 2);
    SearchResult r = search_subtype(SystemId::Kernel, ctx, t, up.type, 12);
    REQUIRE(r.found());
    CHECK(check_subtype_derivation(SystemId::Kernel, *r.derivation).ok);
    CHECK(check_subtype_derivation(SystemId::Kt, *r.derivation).ok);
  }
}

TEST_CASE("session queries agree with standalone searches") {
  SearchSession session(SystemId::Kt);
  TypePtr lhs = ty("forall_k Z <: X . Z -> Z");
  TypePtr rhs = ty("forall_t Z <: X . Z -> X");
  SearchResult a = session.query(kCtxX, lhs, rhs, 16);
  SearchResult b = search_subtype(SystemId::Kt, kCtxX, lhs, rhs, 16);
  CHECK(a.found() == b.found());
  SearchResult c = session.query(Context(), ty("forall_t Z <: Top . Z"),
                                 ty("forall_k Z <: Top . Z"), 12);
  CHECK_FALSE(c.found());
}
