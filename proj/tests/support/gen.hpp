#ifndef BQ_TESTS_GEN_HPP
#define BQ_TESTS_GEN_HPP

#include <random>
#include <vector>

#include "bq/judgments.hpp"
#include "bq/syntax.hpp"
#include "bq/system.hpp"

namespace bq::gen {

struct Rng {
  std::mt19937_64 eng;

  explicit Rng(uint64_t seed) : eng(seed) {}

  int below(int n) {
    return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(eng));
  }
  bool chance(int num, int den) { return below(den) < num; }
};

// A random well-formed type of the system over ctx, roughly `budget` nodes.
TypePtr type(Rng& rng, const Context& ctx, SystemId sys, int budget);

// A random context of `nvars` type bounds (bound sizes <= bound_budget).
Context context(Rng& rng, SystemId sys, int nvars, int bound_budget);

// A type related to `t` by declarative subtyping, together with a derivation
// the checker accepts. `steps` bounds the nesting of sampler rules.
struct Related {
  TypePtr type;
  DerivPtr deriv;  // t <: type   (supertype) or  type <: t  (subtype)
};
Related supertype(Rng& rng, const Context& ctx, SystemId sys, TypePtr t, int steps);
Related subtype(Rng& rng, const Context& ctx, SystemId sys, TypePtr t, int steps);

// A well-typed term with a construction-time declarative typing derivation.
// `cert` selects the rule vocabulary (kt bridges kernel quantifiers at
// eliminations; kernel consumes them directly and keeps every annotation
// kernel).
struct Typed {
  TermPtr term;
  TypePtr type;
  DerivPtr deriv;
};
Typed typed_term(Rng& rng, const Context& ctx, SystemId cert, int depth);

// All single-node rule-label mutants of a derivation, excluding flips that
// independently form a valid axiom instance (see trivially_valid_flip).
std::vector<DerivPtr> label_mutants(const DerivPtr& d);
bool trivially_valid_flip(const Derivation& node, RuleId new_rule);

}  // namespace bq::gen

#endif
