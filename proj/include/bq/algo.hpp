#ifndef BQ_ALGO_HPP
#define BQ_ALGO_HPP

#include <optional>
#include <string>
#include <vector>

#include "bq/judgments.hpp"
#include "bq/syntax.hpp"

namespace bq {

// ---------------------------------------------------------------------------
// The syntax-directed machinery of the decorated system: algorithmic
// subtyping, variable exposure, minimal-type synthesis, and the composed
// typechecker. Uniformly kernel- or top-decorated inputs are the kernel and
// ftop special cases.
// ---------------------------------------------------------------------------

enum class AlgoRule : uint8_t {
  Top,         // T <: Top
  ReflVar,     // X <: X
  VarExpose,   // X <: T via the bound of X
  Arrow,
  ForallFun,   // kernel / kernel, equal bounds
  ForallLoc,   // kernel / top-style
  ForallTop,   // top-style / top-style
};

struct AlgoStep {
  AlgoRule rule;
  Judgment goal;
  uint8_t premise_count;
};

struct AlgoTrace {
  std::vector<AlgoStep> steps;  // preorder; empty when recording is off
  long step_count = 0;
  long fuel_cap = 0;
  bool fuel_exhausted = false;
};

struct AlgoResult {
  bool accepted = false;
  AlgoTrace trace;
  std::optional<Judgment> failed_goal;  // first goal no rule applies to

  bool fuel_exhausted() const { return trace.fuel_exhausted; }
};

struct AlgoOptions {
  long fuel = 1000000;
  bool record_steps = true;
};

constexpr long kDefaultAlgoFuel = 1000000;

// Follows variable bounds through the context until the result is not a
// variable; non-atomic types are returned unchanged.
TypePtr expose(const Context& ctx, TypePtr t);

AlgoResult algo_subtype(const Context& ctx, TypePtr s, TypePtr t,
                        const AlgoOptions& opts = {});

// Replays a successful trace into a declarative derivation (variable steps
// become Var composed with Trans, everything else maps rule-for-rule).
// `sys` selects the rule vocabulary to emit; only kt, kernel, and ftop make
// sense here and the trace must not use rules outside that system.
DerivPtr algo_to_declarative(SystemId sys, const AlgoTrace& trace);

// Declarative certificate that T <: expose(ctx, T): a Var/Trans chain, or
// null when expose is the identity.
DerivPtr exposure_derivation(const Context& ctx, TypePtr t);

// ---------------------------------------------------------------------------
// Minimal typing
// ---------------------------------------------------------------------------

enum class MinRule : uint8_t { Var, Top, Lam, TLam, App, TApp };

struct MinDeriv;
using MinDerivPtr = std::shared_ptr<const MinDeriv>;

struct MinDeriv {
  MinRule rule;
  Judgment conclusion;  // Typing at the synthesized minimal type
  std::vector<MinDerivPtr> kids;
  TypePtr exposed = nullptr;   // App / TApp: the exposed function type
  AlgoResult sub_check;        // App / TApp: argument subtyping via the algorithm
};

enum class UntypableReason : uint8_t {
  NotAFunction,
  NotAQuantifier,
  ArgumentMismatch,
  UnboundVariable,
};

std::string to_string(UntypableReason r);

struct MinTypeResult {
  bool typed = false;
  TypePtr type = nullptr;
  MinDerivPtr trace;
  UntypableReason reason = UntypableReason::UnboundVariable;
  std::string detail;
  bool fuel_exhausted = false;
};

MinTypeResult minimal_type(const Context& ctx, const TermPtr& t,
                           const AlgoOptions& opts = {});

// Maps a minimal-typing trace onto the declarative rules of `sys` (kt or
// kernel). For kt, a kernel quantifier at an elimination is bridged to its
// top-style supertype; for kernel the elimination consumes it directly.
DerivPtr min_to_declarative(SystemId sys, const MinDeriv& m);

// ---------------------------------------------------------------------------
// Composed typechecker
// ---------------------------------------------------------------------------

struct TypecheckResult {
  bool accepted = false;
  TypePtr minimal = nullptr;       // synthesized minimal type, when any
  MinDerivPtr min_trace;
  AlgoResult final_sub;            // minimal <: requested
  DerivPtr certificate;            // declarative typing derivation, on accept
  std::string reason;              // on reject
  bool fuel_exhausted = false;
};

TypecheckResult typecheck(const Context& ctx, const TermPtr& t, TypePtr type,
                          const AlgoOptions& opts = {});

}  // namespace bq

#endif
