#ifndef BQ_FRAGMENTS_HPP
#define BQ_FRAGMENTS_HPP

#include <optional>
#include <vector>

#include "bq/algo.hpp"
#include "bq/judgments.hpp"
#include "bq/syntax.hpp"

namespace bq {

struct FragmentFlags {
  bool is_kernel = false;
  bool is_ftop = false;
  bool is_minimal_for_ftop = false;
};

// Structural membership in the kernel fragment (all quantifiers kernel), the
// ftop fragment (all top-style), and the minimal-types-for-ftop grammar
//   T ::= S | forall_k (X <: S). T | S -> T   with S ranging over ftop types.
FragmentFlags classify_type(TypePtr t);
// Conjunction of the flags over every annotation of the term.
FragmentFlags classify_term(const TermPtr& t);
// All bounds and bindings classify into the fragment.
FragmentFlags classify_context(const Context& ctx);

struct PreconditionViolated : std::runtime_error {
  std::string which;
  explicit PreconditionViolated(std::string w)
      : std::runtime_error("precondition violated: " + w), which(std::move(w)) {}
};

// Produces an ftop typing derivation for a beta-normal ftop term accepted by
// the kt typechecker, following the inductive conservativity argument.
DerivPtr elaborate_ftop_typing(const Context& ctx, const TermPtr& t, TypePtr type);

// Produces a kernel typing derivation by replaying the synthesis trace, which
// on kernel inputs only ever uses kernel rules.
DerivPtr elaborate_kernel(const Context& ctx, const TermPtr& t, TypePtr type);

enum class FragmentFilter : uint8_t { Kernel, Ftop, MinimalForFtop };

std::optional<FragmentFilter> fragment_from_string(std::string_view s);
std::string to_string(FragmentFilter f);

// All well-formed types over `ctx` with node count <= max_size, one
// representative per alpha-class, in a deterministic order: by size, then
// Top, context variables outermost-first, binder variables innermost-first,
// arrows (domain-size major), quantifiers (kernel before top-style before
// plain, bound-size major), meets. Size counts tree nodes.
std::vector<TypePtr> enumerate_types(const Context& ctx, int max_size,
                                     SystemId sys = SystemId::Kt,
                                     std::optional<FragmentFilter> filter = {});

}  // namespace bq

#endif
