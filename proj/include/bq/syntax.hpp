#ifndef BQ_SYNTAX_HPP
#define BQ_SYNTAX_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bq {

// ---------------------------------------------------------------------------
// Types.
//
// Bound type variables are de Bruijn indices (BVar); free type variables are
// names (FVar). Every node is interned, so structural equality is pointer
// equality. Quantifiers keep a printing hint that is excluded from
// alpha-equivalence: each node carries a `canon` pointer to its hint-erased
// twin, and alpha_eq compares canons.
// ---------------------------------------------------------------------------

enum class Flavor : uint8_t { Kernel, TopStyle, Plain };

enum class TypeTag : uint8_t { Top, FVar, BVar, Arrow, Forall, Meet };

class TypeNode;
using TypePtr = const TypeNode*;

class TypeNode {
public:
  TypeTag tag;
  Flavor flavor = Flavor::Plain;  // Forall only
  uint32_t index = 0;             // BVar only
  std::string name;               // FVar name / Forall hint
  TypePtr a = nullptr;            // Arrow dom / Forall bound / Meet left
  TypePtr b = nullptr;            // Arrow cod / Forall body / Meet right
  uint32_t size = 1;              // node count
  uint32_t open_level = 0;        // 0 = locally closed
  TypePtr canon = nullptr;        // hint-erased representative
  size_t hash = 0;
};

TypePtr top_type();
TypePtr tvar(std::string_view name);
TypePtr bvar(uint32_t index);
TypePtr arrow(TypePtr dom, TypePtr cod);
TypePtr forall(Flavor f, std::string_view hint, TypePtr bound, TypePtr body);
TypePtr meet(TypePtr left, TypePtr right);

inline bool alpha_eq(TypePtr x, TypePtr y) { return x->canon == y->canon; }
inline bool is_top(TypePtr t) { return t->tag == TypeTag::Top; }
inline bool locally_closed(TypePtr t) { return t->open_level == 0; }

// Instantiates binder 0 of a quantifier body. `repl` must be locally closed.
TypePtr open_forall(TypePtr body, TypePtr repl);
// Abstracts the free variable `name` into binder 0 (for building quantifiers).
TypePtr close_type(TypePtr t, std::string_view name);

TypePtr subst_type(TypePtr t, std::string_view x, TypePtr s);
// Substitution acting separately on negative and positive occurrences of x;
// the pair swaps on arrow domains, quantifiers and meets are homomorphic.
TypePtr mixed_subst(TypePtr t, std::string_view x, TypePtr s_neg, TypePtr s_pos);
// t[s/x^-] = t[(s, x)/x]
TypePtr neg_subst(TypePtr t, std::string_view x, TypePtr s);

std::set<std::string> free_type_vars(TypePtr t);
bool type_mentions(TypePtr t, std::string_view x);

// ---------------------------------------------------------------------------
// Terms. Binders are named; annotation types may mention enclosing tfun
// binders as free type variables. Alpha-equivalence is computed recursively
// with renaming maps on both namespaces.
// ---------------------------------------------------------------------------

enum class TermTag : uint8_t { TopC, Var, Lam, TLam, App, TApp };

struct TermNode;
using TermPtr = std::shared_ptr<const TermNode>;

struct TermNode {
  TermTag tag;
  std::string name;        // Var name / Lam / TLam binder
  TypePtr type = nullptr;  // Lam annotation / TLam bound / TApp argument
  TermPtr t1;              // Lam / TLam body, App / TApp function
  TermPtr t2;              // App argument
};

TermPtr top_term();
TermPtr term_var(std::string_view name);
TermPtr lam(std::string_view binder, TypePtr annotation, TermPtr body);
TermPtr tlam(std::string_view binder, TypePtr bound, TermPtr body);
TermPtr app(TermPtr fn, TermPtr arg);
TermPtr tapp(TermPtr fn, TypePtr arg);

bool term_alpha_eq(TermPtr x, TermPtr y);
std::set<std::string> free_term_vars(TermPtr t);
std::set<std::string> free_type_vars_in_term(TermPtr t);

TermPtr subst_term(TermPtr t, std::string_view x, TermPtr s);
TermPtr subst_type_in_term(TermPtr t, std::string_view x, TypePtr s);

bool is_beta_normal(TermPtr t);

struct FuelExhausted : std::runtime_error {
  explicit FuelExhausted(const std::string& what) : std::runtime_error(what) {}
};

// Leftmost-outermost reduction of term and type redexes; throws FuelExhausted
// if more than `fuel` contractions are needed.
TermPtr beta_normalize(TermPtr t, long fuel);

std::string fresh_name(std::string_view base, const std::set<std::string>& avoid);

// ---------------------------------------------------------------------------
// Contexts: interned chains of type bounds (X <: T) and term bindings (x : T).
// Equal content gives equal pointers; `canon()` erases type hints so that
// alpha-comparison of contexts is a pointer comparison.
// ---------------------------------------------------------------------------

enum class BindKind : uint8_t { TypeBound, TermBinding };

struct CtxNode {
  const CtxNode* parent = nullptr;
  BindKind kind = BindKind::TypeBound;
  std::string name;
  TypePtr type = nullptr;
  uint32_t depth = 0;   // total entries
  uint32_t tdepth = 0;  // type-bound entries
  const CtxNode* canon = nullptr;
  size_t hash = 0;
};

class Context {
public:
  Context() = default;
  explicit Context(const CtxNode* n) : n_(n) {}

  Context push_type(std::string_view name, TypePtr bound) const;
  Context push_term(std::string_view name, TypePtr type) const;
  Context pop() const;

  bool is_empty() const { return n_ == nullptr; }
  uint32_t size() const { return n_ ? n_->depth : 0; }
  uint32_t type_depth() const { return n_ ? n_->tdepth : 0; }
  const CtxNode* raw() const { return n_; }
  const CtxNode* canon() const { return n_ ? n_->canon : nullptr; }
  const CtxNode* last() const { return n_; }

  // Entries outermost-first.
  std::vector<const CtxNode*> entries() const;
  std::optional<TypePtr> bound_of(std::string_view name) const;
  std::optional<TypePtr> term_type_of(std::string_view name) const;
  bool binds(std::string_view name) const;
  std::set<std::string> dom() const;

  // Deterministic fresh type-variable name not bound in this context.
  std::string fresh_type_var() const;

  bool operator==(const Context& o) const { return n_ == o.n_; }
  bool operator!=(const Context& o) const { return n_ != o.n_; }

private:
  const CtxNode* n_ = nullptr;
};

inline bool ctx_alpha_eq(const Context& a, const Context& b) {
  return a.canon() == b.canon();
}

}  // namespace bq

#endif
