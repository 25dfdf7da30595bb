#ifndef BQ_SYSTEM_HPP
#define BQ_SYSTEM_HPP

#include <optional>
#include <string>
#include <string_view>

#include "bq/syntax.hpp"

namespace bq {

// The five calculi handled by the artifact.
enum class SystemId : uint8_t {
  Kt,       // decorated system, both quantifier forms
  Kernel,   // kernel quantifiers only
  Ftop,     // top-style quantifiers only
  FsubOrig, // undecorated quantifiers, original quantifier subtyping
  Fwedge,   // unbounded quantifiers plus binary meets
};

std::string to_string(SystemId s);
std::optional<SystemId> system_from_string(std::string_view s);

bool flavor_allowed(SystemId s, Flavor f);
bool meets_allowed(SystemId s);
// fwedge restricts quantification to top-bounded (unbounded) form.
bool bounded_forall_allowed(SystemId s);

// Quantifier flavor introduced by forall-i / consumed by forall-e.
Flavor intro_flavor(SystemId s);
Flavor elim_flavor(SystemId s);

// Structural scan: every quantifier flavor, meet node and quantifier bound in
// `t` is expressible in system `s`. Independent of any context.
bool constructs_ok(SystemId s, TypePtr t);
bool constructs_ok(SystemId s, const TermPtr& t);

}  // namespace bq

#endif
