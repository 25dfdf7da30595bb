// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <vector>

#include "bq/algo.hpp"
#include "bq/cli.hpp"
#include "bq/encode.hpp"
#include "bq/fragments.hpp"
#include "bq/oracle.hpp"
#include "bq/surface.hpp"
#include "gen.hpp"

using namespace bq;

namespace {

int g_failures = 0;

struct Criterion {
  int number;
  std::string note;
  bool ok = true;
  std::vector<std::string> problems;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (problems.size() < 8) problems.push_back(what);
    }
  }
};

void run_criterion(int number, const std::string& title, double seconds_limit,
                   const std::function<void(Criterion&)>& body) {
  Criterion c{number, ""};
  auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.problems.push_back(std::string("exception: ") + e.what());
  }
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  c.require(secs < seconds_limit,
            "runtime " + std::to_string(secs) + "s exceeds " +
                std::to_string(seconds_limit) + "s");
  std::printf("CRITERION %2d: %s  [%6.2fs]  %s%s\n", number,
              c.ok ? "PASS" : "FAIL", secs, title.c_str(),
              c.note.empty() ? "" : ("  (" + c.note + ")").c_str());
  for (const auto& p : c.problems) std::printf("    - %s\n", p.c_str());
  if (!c.ok) ++g_failures;
}

TypePtr ty(const std::string& s, SystemId sys = SystemId::Kt) {
  return parse_type(s, sys);
}
TermPtr term_of(const std::string& s, SystemId sys = SystemId::Kt) {
  return parse_term(s, sys);
}

const Context kCtxX = Context().push_type("X", top_type());

TermPtr ghelli_term() { return term_of("tfun (Z <: X) => fun (y : Z) => y"); }
TermPtr term_u() {
  return term_of("(tfun (Y <: Top) => tfun (Z <: X) => fun (y : Y) => y) [X]");
}
TermPtr footnote_term() {
  return term_of("tfun (Y <: Top) => tfun (Z <: X) => fun (y : Y) => y");
}

// ---------------------------------------------------------------------------

void criterion1(Criterion& c) {
  MinTypeResult m = minimal_type(kCtxX, ghelli_term());
  c.require(m.typed, "ghelli term has no minimal type");
  if (m.typed)
    c.require(alpha_eq(m.type, ty("forall_k Z <: X . Z -> Z")),
              "minimal type is " + render(m.type));
  for (const char* target :
       {"forall_t Z <: X . Z -> Z", "forall_t Z <: X . Z -> X"}) {
    TypecheckResult r = typecheck(kCtxX, ghelli_term(), ty(target));
    c.require(r.accepted, std::string("check failed at ") + target);
    if (r.accepted)
      c.require(check_typing_derivation(SystemId::Kt, *r.certificate).ok,
                "certificate failed to validate");
  }
}

void criterion2(Criterion& c) {
  TypePtr target = ty("forall_t Z <: X . Z -> X");
  TypecheckResult r = typecheck(kCtxX, term_u(), target);
  c.require(r.accepted, "u does not check at the top-style type");
  MinTypeResult m = minimal_type(kCtxX, term_u());
  c.require(m.typed && alpha_eq(m.type, ty("forall_k Z <: X . X -> X")),
            "u's minimal type is wrong");
  bool rejected = false;
  try {
    elaborate_ftop_typing(kCtxX, term_u(), target);
  } catch (const PreconditionViolated&) {
    rejected = true;
  }
  c.require(rejected, "elaborator did not reject the non-normal witness");
  TermPtr nf = beta_normalize(term_u(), 1000);
  c.require(term_alpha_eq(nf, term_of("tfun (Z <: X) => fun (y : X) => y")),
            "wrong beta-normal form");
  DerivPtr d = elaborate_ftop_typing(kCtxX, nf, target);
  c.require(check_typing_derivation(SystemId::Ftop, *d).ok,
            "ftop derivation for the normal form failed to validate");
}

void criterion3(Criterion& c) {
  std::vector<TypePtr> candidates =
      enumerate_types(kCtxX, 8, SystemId::Kt, FragmentFilter::Ftop);
  std::vector<TypePtr> typed;
  for (TypePtr t : candidates)
    if (typecheck(kCtxX, footnote_term(), t).accepted) typed.push_back(t);
  c.note = std::to_string(candidates.size()) + " candidates, " +
           std::to_string(typed.size()) + " typed";
  std::vector<TypePtr> expected = {
      ty("forall_t Y <: Top . forall_t Z <: X . Y -> Y"),
      ty("forall_t Y <: Top . forall_t Z <: X . Y -> Top"),
      ty("forall_t Y <: Top . Top"),
      top_type(),
  };
  for (TypePtr e : expected) {
    bool present = false;
    for (TypePtr t : typed) present = present || alpha_eq(t, e);
    c.require(present, "missing " + render(e));
  }
  // The criterion as stated: nothing beyond the four listed types. The
  // footnote overlooks bound narrowing (the bound premise of the top-style
  // rule is contravariant), so this fails; the extra typings below are real.
  std::string extra_example;
  for (TypePtr t : typed) {
    bool listed = false;
    for (TypePtr e : expected) listed = listed || alpha_eq(t, e);
    if (!listed) {
      extra_example = render(t);
      break;
    }
  }
  c.require(typed.size() == expected.size(),
            "expected exactly 4 types, found " + std::to_string(typed.size()) +
                "; e.g. " + extra_example);
  // Every extra type is a genuine typing of the term in the top-style system
  // itself: the beta-normal elaborator produces a derivation that checks
  // under the ftop rules alone.
  for (TypePtr t : typed) {
    bool listed = false;
    for (TypePtr e : expected) listed = listed || alpha_eq(t, e);
    if (listed) continue;
    DerivPtr d = elaborate_ftop_typing(kCtxX, footnote_term(), t);
    c.require(check_typing_derivation(SystemId::Ftop, *d).ok,
              "an extra type failed to elaborate in ftop: " + render(t));
  }
  // What the footnote is used for in the non-conservativity proof survives:
  // no type of the term instantiates at X to a subtype of the target typing
  // of u, so u stays untypable in the top-style system.
  TypePtr u_target = ty("forall_t Z <: X . Z -> X");
  for (TypePtr t : typed) {
    if (t->tag != TypeTag::Forall) continue;
    if (!algo_subtype(kCtxX, tvar("X"), t->a).accepted) continue;
    TypePtr inst = open_forall(t->b, tvar("X"));
    c.require(!algo_subtype(kCtxX, inst, u_target).accepted,
              "a typing of the footnote term would type u: " + render(t));
  }
}

// shared between criteria 4 and 5
struct EquivalenceData {
  long pairs = 0;
  long discrepancies = 0;
  long fuel_exhaustions = 0;
  long triples = 0;
  long trans_failures = 0;
  long sampled_proofs = 0;
  long invalid_proofs = 0;
};

void equivalence_over(SystemId sys, const std::vector<Context>& contexts,
                      EquivalenceData& data) {
  for (const Context& ctx : contexts) {
    std::vector<TypePtr> types = enumerate_types(ctx, 5, sys);
    size_t n = types.size();
    std::vector<std::vector<bool>> accept(n, std::vector<bool>(n, false));
    SearchSession session(sys);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        AlgoResult a = algo_subtype(ctx, types[i], types[j]);
        if (a.fuel_exhausted()) {
          ++data.fuel_exhaustions;
          continue;
        }
        accept[i][j] = a.accepted;
        bool want_proof = a.accepted && data.pairs % 997 == 0;
        SearchResult found = session.query(ctx, types[i], types[j], 16, want_proof);
        if (found.found() != a.accepted) ++data.discrepancies;
        if (want_proof && found.derivation) {
          ++data.sampled_proofs;
          if (!check_subtype_derivation(sys, *found.derivation).ok)
            ++data.invalid_proofs;
        }
        ++data.pairs;
      }
    }
    // transitivity admissibility over the accepted pairs
    std::vector<std::vector<uint32_t>> into(n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (accept[i][j]) into[j].push_back(static_cast<uint32_t>(i));
    for (size_t s = 0; s < n; ++s) {
      for (uint32_t r : into[s]) {
        for (size_t t = 0; t < n; ++t) {
          if (!accept[s][t]) continue;
          ++data.triples;
          if (!accept[r][t]) ++data.trans_failures;
        }
      }
    }
  }
}

EquivalenceData g_equiv;

void criterion4(Criterion& c) {
  TypePtr tt = arrow(top_type(), top_type());
  std::vector<Context> kt_ctxs = {
      Context(),
      Context().push_type("X", top_type()),
      Context().push_type("X", tt),
      Context().push_type("X", top_type()).push_type("Y", tvar("X")),
      Context().push_type("X", top_type()).push_type("Y", arrow(tvar("X"), tvar("X"))),
      Context()
          .push_type("X", ty("forall_k Z <: Top . Z"))
          .push_type("Y", ty("forall_t Z <: Top . Z")),
  };
  equivalence_over(SystemId::Kt, kt_ctxs, g_equiv);

  std::vector<Context> base = {
      Context(),
      Context().push_type("X", top_type()),
      Context().push_type("X", tt),
      Context().push_type("X", top_type()).push_type("Y", tvar("X")),
      Context().push_type("X", top_type()).push_type("Y", arrow(tvar("X"), tvar("X"))),
  };
  std::vector<Context> kernel_ctxs = base;
  kernel_ctxs.push_back(Context()
                            .push_type("X", ty("forall_k Z <: Top . Z"))
                            .push_type("Y", tvar("X")));
  equivalence_over(SystemId::Kernel, kernel_ctxs, g_equiv);

  std::vector<Context> ftop_ctxs = base;
  ftop_ctxs.push_back(Context()
                          .push_type("X", ty("forall_t Z <: Top . Z", SystemId::Ftop))
                          .push_type("Y", tvar("X")));
  equivalence_over(SystemId::Ftop, ftop_ctxs, g_equiv);

  c.note = std::to_string(g_equiv.pairs) + " pairs, " +
           std::to_string(g_equiv.sampled_proofs) + " proofs sampled";
  c.require(g_equiv.discrepancies == 0,
            std::to_string(g_equiv.discrepancies) + " discrepancies");
  c.require(g_equiv.fuel_exhaustions == 0,
            std::to_string(g_equiv.fuel_exhaustions) + " fuel exhaustions");
  c.require(g_equiv.sampled_proofs > 0, "no derivations sampled");
  c.require(g_equiv.invalid_proofs == 0,
            std::to_string(g_equiv.invalid_proofs) + " invalid sampled proofs");
}

void criterion5(Criterion& c) {
  c.note = std::to_string(g_equiv.triples) + " triples";
  c.require(g_equiv.triples > 0, "no transitivity triples collected");
  c.require(g_equiv.trans_failures == 0,
            std::to_string(g_equiv.trans_failures) + " transitivity failures");
}

void criterion6(Criterion& c) {
  gen::Rng rng(4601);
  Context base = Context().push_type("X", top_type()).push_term("v", tvar("X"));
  for (int i = 0; i < 1000; ++i) {
    gen::Typed t = gen::typed_term(rng, base, SystemId::Kt, 1 + rng.below(4));
    c.require(check_typing_derivation(SystemId::Kt, *t.deriv).ok,
              "construction-time derivation failed to validate");
    MinTypeResult m = minimal_type(base, t.term);
    c.require(m.typed, "generated term lost its type");
    if (!m.typed) continue;
    c.require(algo_subtype(base, m.type, t.type).accepted,
              "minimal type not below the declarative type");
    TypecheckResult r = typecheck(base, t.term, t.type);
    c.require(r.accepted, "typecheck rejected a generated term");
    if (r.accepted)
      c.require(check_typing_derivation(SystemId::Kt, *r.certificate).ok,
                "emitted certificate failed to validate");
  }
}

void criterion7(Criterion& c) {
  int verified = 0, premise_failures = 0, conclusion_failures = 0;

  auto run = [&](const LemmaInstance& inst) {
    LemmaReport r = verify_lemma_instance(inst, 16);
    switch (r.status) {
      case LemmaReport::Status::Verified: ++verified; break;
      case LemmaReport::Status::PremiseNotEstablished: ++premise_failures; break;
      case LemmaReport::Status::ConclusionNotFound:
        ++conclusion_failures;
        if (c.problems.size() < 4 && r.conclusion)
          c.problems.push_back("not found: " + describe(r.conclusion->judgment));
        break;
    }
  };

  // bundled instances: the worked examples
  {
    LemmaInstance loc;
    loc.lemma = LemmaId::Loc;
    loc.ctx = Context().push_type("A", top_type());
    loc.bindings = {{"S0", tvar("A")},
                    {"T0", tvar("A")},
                    {"S1", arrow(tvar("X"), tvar("X"))},
                    {"T1", arrow(tvar("X"), tvar("A"))}};
    run(loc);
    LemmaInstance topr;
    topr.lemma = LemmaId::TopRule;
    topr.bindings = {{"S", top_type()},
                     {"SPrime", arrow(top_type(), top_type())},
                     {"T", arrow(tvar("X"), tvar("X"))}};
    run(topr);
    LemmaInstance beta;
    beta.lemma = LemmaId::BetaSide;
    beta.ctx = Context().push_type("A", top_type());
    beta.bindings = {{"S", top_type()},
                     {"SPrime", tvar("A")},
                     {"T", arrow(tvar("X"), tvar("X"))}};
    run(beta);
    LemmaInstance eta;
    eta.lemma = LemmaId::EtaSide;
    eta.bindings = {{"S", arrow(top_type(), top_type())},
                    {"T", arrow(tvar("X"), tvar("X"))}};
    run(eta);
  }

  gen::Rng rng(777);
  const SystemId fw = SystemId::Fwedge;
  for (int i = 0; i < 500; ++i) {
    Context ctx = gen::context(rng, fw, 1 + rng.below(2), 2);
    std::string x = "X";
    Context inner_top = ctx.push_type(x, top_type());
    LemmaInstance inst;
    inst.ctx = ctx;
    switch (i % 7) {
      case 0: {
        inst.lemma = LemmaId::KFun;
        TypePtr s = gen::type(rng, ctx, fw, 3);
        Context inner = ctx.push_type(x, s);
        TypePtr tp = gen::type(rng, inner, fw, 4);
        inst.bindings = {{"S", s},
                         {"T", gen::subtype(rng, inner, fw, tp, 2).type},
                         {"TPrime", tp}};
        break;
      }
      case 1: {
        inst.lemma = LemmaId::MixedMono;
        TypePtr sn = gen::type(rng, ctx, fw, 3);
        TypePtr sp = gen::type(rng, ctx, fw, 3);
        inst.bindings = {{"T", gen::type(rng, inner_top, fw, 4)},
                         {"Sneg", sn},
                         {"SnegPrime", gen::subtype(rng, ctx, fw, sn, 2).type},
                         {"Spos", sp},
                         {"SposPrime", gen::supertype(rng, ctx, fw, sp, 2).type}};
        break;
      }
      case 2: {
        inst.lemma = LemmaId::MixedCong;
        TypePtr tp = gen::type(rng, inner_top, fw, 4);
        inst.bindings = {{"T", gen::subtype(rng, inner_top, fw, tp, 2).type},
                         {"TPrime", tp},
                         {"Sneg", gen::type(rng, ctx, fw, 3)},
                         {"Spos", gen::type(rng, ctx, fw, 3)}};
        break;
      }
      case 3: {
        inst.lemma = LemmaId::TopRule;
        TypePtr s = gen::type(rng, ctx, fw, 3);
        inst.bindings = {{"S", s},
                         {"SPrime", gen::subtype(rng, ctx, fw, s, 2).type},
                         {"T", gen::type(rng, inner_top, fw, 4)}};
        break;
      }
      case 4: {
        inst.lemma = LemmaId::Loc;
        TypePtr s0 = gen::type(rng, ctx, fw, 3);
        Context inner = ctx.push_type(x, s0);
        TypePtr t1 = gen::type(rng, inner, fw, 4);
        inst.bindings = {{"S0", s0},
                         {"T0", gen::subtype(rng, ctx, fw, s0, 2).type},
                         {"S1", gen::subtype(rng, inner, fw, t1, 2).type},
                         {"T1", t1}};
        break;
      }
      case 5: {
        inst.lemma = LemmaId::BetaSide;
        TypePtr s = gen::type(rng, ctx, fw, 3);
        inst.bindings = {{"S", s},
                         {"SPrime", gen::subtype(rng, ctx, fw, s, 2).type},
                         {"T", gen::type(rng, inner_top, fw, 4)}};
        break;
      }
      default: {
        inst.lemma = LemmaId::EtaSide;
        inst.bindings = {{"S", gen::type(rng, ctx, fw, 3)},
                         {"T", gen::type(rng, inner_top, fw, 4)}};
        break;
      }
    }
    run(inst);
  }
  c.note = std::to_string(verified) + " verified";
  c.require(premise_failures == 0,
            std::to_string(premise_failures) + " premises not established");
  c.require(conclusion_failures == 0,
            std::to_string(conclusion_failures) + " conclusions not found");
}

namespace min_ftop_gen {

TypePtr gen(gen::Rng& rng, const Context& ctx, int budget) {
  // T ::= S | forall_k (X <: S) . T | S -> T, with S ranging over ftop types
  int roll = rng.below(4);
  if (budget <= 2 || roll == 0) return gen::type(rng, ctx, SystemId::Ftop, budget);
  if (roll <= 1) {
    TypePtr s = gen::type(rng, ctx, SystemId::Ftop, 2);
    std::string x = "M" + std::to_string(rng.below(1000));
    while (ctx.binds(x)) x += "'";
    TypePtr body = gen(rng, ctx.push_type(x, s), budget - 1 - s->size);
    return forall(Flavor::Kernel, x, s, close_type(body, x));
  }
  TypePtr s = gen::type(rng, ctx, SystemId::Ftop, 2);
  return arrow(s, gen(rng, ctx, budget - 1 - s->size));
}

}  // namespace min_ftop_gen

void criterion8(Criterion& c) {
  gen::Rng rng(88001);
  long max_steps = 0;
  long exhausted = 0;
  for (int i = 0; i < 10000; ++i) {
    Context ctx = gen::context(rng, SystemId::Ftop, 1 + rng.below(3), 3);
    TypePtr lhs = min_ftop_gen::gen(rng, ctx, 5 + rng.below(16));
    TypePtr rhs = gen::type(rng, ctx, SystemId::Ftop, 5 + rng.below(16));
    AlgoOptions opts;
    opts.record_steps = false;
    AlgoResult r = algo_subtype(ctx, lhs, rhs, opts);
    if (r.fuel_exhausted()) ++exhausted;
    max_steps = std::max(max_steps, r.trace.step_count);
  }
  c.note = "max steps " + std::to_string(max_steps);
  c.require(exhausted == 0, std::to_string(exhausted) + " fuel exhaustions");
}

void criterion9(Criterion& c) {
  gen::Rng rng(90210);
  Context base = Context().push_type("X", top_type()).push_term("v", tvar("X"));
  int round_tripped = 0;
  for (int i = 0; i < 500; ++i) {
    TermPtr term;
    TypePtr type;
    if (i % 5 == 4) {
      // stress the negative direction with arbitrary applications
      gen::Typed a = gen::typed_term(rng, base, SystemId::Kernel, 2);
      gen::Typed b = gen::typed_term(rng, base, SystemId::Kernel, 2);
      term = app(a.term, b.term);
      type = top_type();
    } else {
      gen::Typed t = gen::typed_term(rng, base, SystemId::Kernel, 1 + rng.below(3));
      term = t.term;
      type = t.type;
    }
    if (!classify_term(term).is_kernel || !classify_type(type).is_kernel) {
      c.require(false, "generator produced a non-kernel input");
      continue;
    }
    bool checked = typecheck(base, term, type).accepted;
    bool elaborated = true;
    DerivPtr d;
    try {
      d = elaborate_kernel(base, term, type);
    } catch (const PreconditionViolated&) {
      elaborated = false;
    }
    c.require(checked == elaborated,
              "typecheck and kernel elaboration disagree");
    if (d) {
      ++round_tripped;
      c.require(check_typing_derivation(SystemId::Kernel, *d).ok,
                "kernel derivation failed to validate");
    }
  }
  c.note = std::to_string(round_tripped) + " kernel derivations";
  c.require(round_tripped > 300, "too few successful elaborations");
}

void criterion10(Criterion& c) {
  gen::Rng rng(1010);
  Context base = Context().push_type("X", top_type()).push_term("v", tvar("X"));
  std::vector<std::pair<SystemId, DerivPtr>> samples;
  while (samples.size() < 140) {
    gen::Typed t = gen::typed_term(rng, base, SystemId::Kt, 1 + rng.below(3));
    samples.emplace_back(SystemId::Kt, t.deriv);
  }
  while (samples.size() < 170) {
    Context ctx = gen::context(rng, SystemId::Kt, 2, 3);
    TypePtr t = gen::type(rng, ctx, SystemId::Kt, 4);
    gen::Related up = gen::supertype(rng, ctx, SystemId::Kt, t, 2);
    SearchResult r = search_subtype(SystemId::Kt, ctx, t, up.type, 12);
    if (r.found()) samples.emplace_back(SystemId::Kt, r.derivation);
  }
  while (samples.size() < 200) {
    Context ctx = gen::context(rng, SystemId::Fwedge, 2, 2);
    TypePtr t = gen::type(rng, ctx, SystemId::Fwedge, 4);
    gen::Related up = gen::supertype(rng, ctx, SystemId::Fwedge, t, 2);
    SearchResult r = search_subtype(SystemId::Fwedge, ctx, t, up.type, 12);
    if (r.found()) samples.emplace_back(SystemId::Fwedge, r.derivation);
  }
  long mutants = 0, survivors = 0;
  for (const auto& [sys, d] : samples) {
    if (!check_derivation(sys, *d).ok) {
      c.require(false, "sample failed to validate before mutation");
      continue;
    }
    for (const DerivPtr& m : gen::label_mutants(d)) {
      ++mutants;
      if (check_derivation(sys, *m).ok) {
        ++survivors;
        if (c.problems.size() < 4)
          c.problems.push_back("surviving mutant at " + describe(m->conclusion));
      }
    }
  }
  c.note = std::to_string(mutants) + " mutants";
  c.require(survivors == 0, std::to_string(survivors) + " surviving mutants");
}

}  // namespace

int main(int argc, char** argv) {
  // Criterion 5 reads the data collected by criterion 4, so selecting either
  // runs both.
  int only = 0, except = 0;
  for (int i = 1; i + 1 < argc; ++i) {
    std::string a = argv[i];
    if (a == "--criterion") only = std::atoi(argv[i + 1]);
    if (a == "--except") except = std::atoi(argv[i + 1]);
  }
  auto enabled = [&](int n) {
    if (only) return n == only || (only == 5 && n == 4);
    return n != except;
  };
  struct Entry {
    int n;
    const char* title;
    double limit;
    void (*body)(Criterion&);
  };
  const Entry entries[] = {
      {1, "minimal type and both ascriptions of the Ghelli term", 1.0, criterion1},
      {2, "non-conservativity witness and its normal form", 1.0, criterion2},
      {3, "exact type set of the footnote term", 60.0, criterion3},
      {4, "algorithmic/declarative equivalence, exhaustive", 300.0, criterion4},
      {5, "transitivity admissibility over accepted pairs", 300.0, criterion5},
      {6, "minimal-typing soundness on 1000 generated terms", 120.0, criterion6},
      {7, "encoding lemma suite, bundled plus 500 random", 300.0, criterion7},
      {8, "termination instrumentation on 10000 queries", 120.0, criterion8},
      {9, "kernel conservativity round-trip", 60.0, criterion9},
      {10, "mutation robustness of the checkers", 60.0, criterion10},
  };
  std::printf("acceptance suite\n");
  for (const Entry& e : entries)
    if (enabled(e.n)) run_criterion(e.n, e.title, e.limit, e.body);
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
