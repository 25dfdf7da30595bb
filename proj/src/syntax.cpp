#include "bq/syntax.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <mutex>
#include <unordered_map>

namespace bq {

namespace {

inline size_t hash_combine(size_t seed, size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

struct TypeKey {
  TypeTag tag;
  Flavor flavor;
  uint32_t index;
  std::string name;
  TypePtr a;
  TypePtr b;

  bool operator==(const TypeKey& o) const {
    return tag == o.tag && flavor == o.flavor && index == o.index &&
           name == o.name && a == o.a && b == o.b;
  }
};

struct TypeKeyHash {
  size_t operator()(const TypeKey& k) const {
    size_t h = static_cast<size_t>(k.tag);
    h = hash_combine(h, static_cast<size_t>(k.flavor));
    h = hash_combine(h, k.index);
    h = hash_combine(h, std::hash<std::string>{}(k.name));
    h = hash_combine(h, std::hash<const void*>{}(k.a));
    h = hash_combine(h, std::hash<const void*>{}(k.b));
    return h;
  }
};

class TypeArena {
public:
  static TypeArena& instance() {
    static TypeArena arena;
    return arena;
  }

  TypePtr intern(TypeTag tag, Flavor flavor, uint32_t index,
                 std::string_view name, TypePtr a, TypePtr b) {
    // The hint-erased twin is interned first (outside the lock for this key).
    std::string_view cname = tag == TypeTag::Forall ? std::string_view{} : name;
    TypePtr ca = a ? a->canon : nullptr;
    TypePtr cb = b ? b->canon : nullptr;
    bool self_canon = cname == name && ca == a && cb == b;
    TypePtr canon = self_canon ? nullptr : intern(tag, flavor, index, cname, ca, cb);

    TypeKey key{tag, flavor, index, std::string(name), a, b};
    std::lock_guard<std::mutex> lock(mu_);
    auto it = table_.find(key);
    if (it != table_.end()) return it->second.get();

    auto node = std::make_unique<TypeNode>();
    node->tag = tag;
    node->flavor = flavor;
    node->index = index;
    node->name = key.name;
    node->a = a;
    node->b = b;
    node->size = 1 + (a ? a->size : 0) + (b ? b->size : 0);
    switch (tag) {
      case TypeTag::Top:
      case TypeTag::FVar:
        node->open_level = 0;
        break;
      case TypeTag::BVar:
        node->open_level = index + 1;
        break;
      case TypeTag::Arrow:
      case TypeTag::Meet:
        node->open_level = std::max(a->open_level, b->open_level);
        break;
      case TypeTag::Forall: {
        uint32_t body = b->open_level > 0 ? b->open_level - 1 : 0;
        node->open_level = std::max(a->open_level, body);
        break;
      }
    }
    node->hash = TypeKeyHash{}(key);
    node->canon = canon ? canon : node.get();
    auto [pos, inserted] = table_.emplace(std::move(key), std::move(node));
    (void)inserted;
    return pos->second.get();
  }

private:
  std::mutex mu_;
  std::unordered_map<TypeKey, std::unique_ptr<TypeNode>, TypeKeyHash> table_;
};

TypePtr intern(TypeTag tag, Flavor flavor, uint32_t index, std::string_view name,
               TypePtr a, TypePtr b) {
  return TypeArena::instance().intern(tag, flavor, index, name, a, b);
}

}  // namespace

TypePtr top_type() {
  static TypePtr t = intern(TypeTag::Top, Flavor::Plain, 0, {}, nullptr, nullptr);
  return t;
}

TypePtr tvar(std::string_view name) {
  return intern(TypeTag::FVar, Flavor::Plain, 0, name, nullptr, nullptr);
}

TypePtr bvar(uint32_t index) {
  return intern(TypeTag::BVar, Flavor::Plain, index, {}, nullptr, nullptr);
}

TypePtr arrow(TypePtr dom, TypePtr cod) {
  return intern(TypeTag::Arrow, Flavor::Plain, 0, {}, dom, cod);
}

TypePtr forall(Flavor f, std::string_view hint, TypePtr bound, TypePtr body) {
  return intern(TypeTag::Forall, f, 0, hint, bound, body);
}

TypePtr meet(TypePtr left, TypePtr right) {
  return intern(TypeTag::Meet, Flavor::Plain, 0, {}, left, right);
}

namespace {

TypePtr open_at(TypePtr t, uint32_t depth, TypePtr repl) {
  if (t->open_level <= depth) return t;  // binder not reachable
  switch (t->tag) {
    case TypeTag::BVar:
      if (t->index == depth) return repl;
      return t;
    case TypeTag::Arrow:
      return arrow(open_at(t->a, depth, repl), open_at(t->b, depth, repl));
    case TypeTag::Meet:
      return meet(open_at(t->a, depth, repl), open_at(t->b, depth, repl));
    case TypeTag::Forall:
      return forall(t->flavor, t->name, open_at(t->a, depth, repl),
                    open_at(t->b, depth + 1, repl));
    default:
      return t;
  }
}

TypePtr close_at(TypePtr t, uint32_t depth, std::string_view name) {
  switch (t->tag) {
    case TypeTag::FVar:
      if (t->name == name) return bvar(depth);
      return t;
    case TypeTag::Arrow:
      return arrow(close_at(t->a, depth, name), close_at(t->b, depth, name));
    case TypeTag::Meet:
      return meet(close_at(t->a, depth, name), close_at(t->b, depth, name));
    case TypeTag::Forall:
      return forall(t->flavor, t->name, close_at(t->a, depth, name),
                    close_at(t->b, depth + 1, name));
    default:
      return t;
  }
}

}  // namespace

TypePtr open_forall(TypePtr body, TypePtr repl) {
  assert(locally_closed(repl));
  return open_at(body, 0, repl);
}

TypePtr close_type(TypePtr t, std::string_view name) {
  return close_at(t, 0, name);
}

TypePtr subst_type(TypePtr t, std::string_view x, TypePtr s) {
  switch (t->tag) {
    case TypeTag::FVar:
      return t->name == x ? s : t;
    case TypeTag::Arrow:
      return arrow(subst_type(t->a, x, s), subst_type(t->b, x, s));
    case TypeTag::Meet:
      return meet(subst_type(t->a, x, s), subst_type(t->b, x, s));
    case TypeTag::Forall:
      return forall(t->flavor, t->name, subst_type(t->a, x, s),
                    subst_type(t->b, x, s));
    default:
      return t;
  }
}

namespace {

TypePtr mixed_at(TypePtr t, std::string_view x, TypePtr s_neg, TypePtr s_pos,
                 bool positive) {
  switch (t->tag) {
    case TypeTag::FVar:
      if (t->name == x) return positive ? s_pos : s_neg;
      return t;
    case TypeTag::Arrow:
      return arrow(mixed_at(t->a, x, s_neg, s_pos, !positive),
                   mixed_at(t->b, x, s_neg, s_pos, positive));
    case TypeTag::Meet:
      return meet(mixed_at(t->a, x, s_neg, s_pos, positive),
                  mixed_at(t->b, x, s_neg, s_pos, positive));
    case TypeTag::Forall:
      return forall(t->flavor, t->name,
                    mixed_at(t->a, x, s_neg, s_pos, positive),
                    mixed_at(t->b, x, s_neg, s_pos, positive));
    default:
      return t;
  }
}

}  // namespace

TypePtr mixed_subst(TypePtr t, std::string_view x, TypePtr s_neg, TypePtr s_pos) {
  return mixed_at(t, x, s_neg, s_pos, true);
}

TypePtr neg_subst(TypePtr t, std::string_view x, TypePtr s) {
  return mixed_subst(t, x, s, tvar(x));
}

namespace {

void collect_fvs(TypePtr t, std::set<std::string>& out) {
  switch (t->tag) {
    case TypeTag::FVar:
      out.insert(t->name);
      break;
    case TypeTag::Arrow:
    case TypeTag::Meet:
    case TypeTag::Forall:
      collect_fvs(t->a, out);
      collect_fvs(t->b, out);
      break;
    default:
      break;
  }
}

}  // namespace

std::set<std::string> free_type_vars(TypePtr t) {
  std::set<std::string> out;
  collect_fvs(t, out);
  return out;
}

bool type_mentions(TypePtr t, std::string_view x) {
  switch (t->tag) {
    case TypeTag::FVar:
      return t->name == x;
    case TypeTag::Arrow:
    case TypeTag::Meet:
    case TypeTag::Forall:
      return type_mentions(t->a, x) || type_mentions(t->b, x);
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

namespace {

TermPtr mk_term(TermTag tag, std::string_view name, TypePtr type, TermPtr t1,
                TermPtr t2) {
  auto n = std::make_shared<TermNode>();
  n->tag = tag;
  n->name = std::string(name);
  n->type = type;
  n->t1 = std::move(t1);
  n->t2 = std::move(t2);
  return n;
}

}  // namespace

TermPtr top_term() { return mk_term(TermTag::TopC, {}, nullptr, nullptr, nullptr); }
TermPtr term_var(std::string_view name) {
  return mk_term(TermTag::Var, name, nullptr, nullptr, nullptr);
}
TermPtr lam(std::string_view binder, TypePtr annotation, TermPtr body) {
  return mk_term(TermTag::Lam, binder, annotation, std::move(body), nullptr);
}
TermPtr tlam(std::string_view binder, TypePtr bound, TermPtr body) {
  return mk_term(TermTag::TLam, binder, bound, std::move(body), nullptr);
}
TermPtr app(TermPtr fn, TermPtr arg) {
  return mk_term(TermTag::App, {}, nullptr, std::move(fn), std::move(arg));
}
TermPtr tapp(TermPtr fn, TypePtr arg) {
  return mk_term(TermTag::TApp, {}, arg, std::move(fn), nullptr);
}

namespace {

// Bijective renaming environment for one binder namespace.
struct RenameEnv {
  std::map<std::string, std::string> fwd;
  std::map<std::string, std::string> bwd;

  bool matches(const std::string& a, const std::string& b) const {
    auto f = fwd.find(a);
    if (f != fwd.end()) return f->second == b;
    if (bwd.count(b)) return false;
    return a == b;
  }

  RenameEnv extended(const std::string& a, const std::string& b) const {
    RenameEnv e = *this;
    e.fwd[a] = b;
    e.bwd[b] = a;
    return e;
  }
};

bool type_alpha_eq_env(TypePtr x, TypePtr y, const RenameEnv& tenv) {
  if (tenv.fwd.empty() && tenv.bwd.empty()) return alpha_eq(x, y);
  if (x->tag != y->tag) return false;
  switch (x->tag) {
    case TypeTag::Top:
      return true;
    case TypeTag::BVar:
      return x->index == y->index;
    case TypeTag::FVar:
      return tenv.matches(x->name, y->name);
    case TypeTag::Arrow:
    case TypeTag::Meet:
      return type_alpha_eq_env(x->a, y->a, tenv) &&
             type_alpha_eq_env(x->b, y->b, tenv);
    case TypeTag::Forall:
      return x->flavor == y->flavor && type_alpha_eq_env(x->a, y->a, tenv) &&
             type_alpha_eq_env(x->b, y->b, tenv);
  }
  return false;
}

bool term_alpha_eq_env(const TermPtr& x, const TermPtr& y, const RenameEnv& venv,
                       const RenameEnv& tenv) {
  if (x->tag != y->tag) return false;
  switch (x->tag) {
    case TermTag::TopC:
      return true;
    case TermTag::Var:
      return venv.matches(x->name, y->name);
    case TermTag::Lam:
      return type_alpha_eq_env(x->type, y->type, tenv) &&
             term_alpha_eq_env(x->t1, y->t1, venv.extended(x->name, y->name),
                               tenv);
    case TermTag::TLam:
      return type_alpha_eq_env(x->type, y->type, tenv) &&
             term_alpha_eq_env(x->t1, y->t1, venv,
                               tenv.extended(x->name, y->name));
    case TermTag::App:
      return term_alpha_eq_env(x->t1, y->t1, venv, tenv) &&
             term_alpha_eq_env(x->t2, y->t2, venv, tenv);
    case TermTag::TApp:
      return type_alpha_eq_env(x->type, y->type, tenv) &&
             term_alpha_eq_env(x->t1, y->t1, venv, tenv);
  }
  return false;
}

void collect_term_vars(const TermPtr& t, std::set<std::string>& bound,
                       std::set<std::string>& out) {
  switch (t->tag) {
    case TermTag::Var:
      if (!bound.count(t->name)) out.insert(t->name);
      break;
    case TermTag::Lam: {
      bool fresh = bound.insert(t->name).second;
      collect_term_vars(t->t1, bound, out);
      if (fresh) bound.erase(t->name);
      break;
    }
    case TermTag::TLam:
      collect_term_vars(t->t1, bound, out);
      break;
    case TermTag::App:
      collect_term_vars(t->t1, bound, out);
      collect_term_vars(t->t2, bound, out);
      break;
    default:
      break;
  }
}

void collect_term_tvs(const TermPtr& t, std::set<std::string>& bound,
                      std::set<std::string>& out) {
  auto add_type = [&](TypePtr ty) {
    for (const auto& v : free_type_vars(ty))
      if (!bound.count(v)) out.insert(v);
  };
  switch (t->tag) {
    case TermTag::Lam:
      add_type(t->type);
      collect_term_tvs(t->t1, bound, out);
      break;
    case TermTag::TLam: {
      add_type(t->type);
      bool fresh = bound.insert(t->name).second;
      collect_term_tvs(t->t1, bound, out);
      if (fresh) bound.erase(t->name);
      break;
    }
    case TermTag::App:
      collect_term_tvs(t->t1, bound, out);
      collect_term_tvs(t->t2, bound, out);
      break;
    case TermTag::TApp:
      add_type(t->type);
      collect_term_tvs(t->t1, bound, out);
      break;
    default:
      break;
  }
}

// Renames a free term variable (capture unchecked; callers pick fresh names).
TermPtr rename_term_var(const TermPtr& t, std::string_view from,
                        std::string_view to) {
  switch (t->tag) {
    case TermTag::Var:
      return t->name == from ? term_var(to) : t;
    case TermTag::Lam:
      if (t->name == from) return t;
      return lam(t->name, t->type, rename_term_var(t->t1, from, to));
    case TermTag::TLam:
      return tlam(t->name, t->type, rename_term_var(t->t1, from, to));
    case TermTag::App:
      return app(rename_term_var(t->t1, from, to),
                 rename_term_var(t->t2, from, to));
    case TermTag::TApp:
      return tapp(rename_term_var(t->t1, from, to), t->type);
    default:
      return t;
  }
}

TermPtr rename_type_var_in_term(const TermPtr& t, std::string_view from,
                                std::string_view to) {
  TypePtr repl = tvar(to);
  switch (t->tag) {
    case TermTag::Lam:
      return lam(t->name, subst_type(t->type, from, repl),
                 rename_type_var_in_term(t->t1, from, to));
    case TermTag::TLam: {
      TypePtr nb = subst_type(t->type, from, repl);
      if (t->name == from) return tlam(t->name, nb, t->t1);
      return tlam(t->name, nb, rename_type_var_in_term(t->t1, from, to));
    }
    case TermTag::App:
      return app(rename_type_var_in_term(t->t1, from, to),
                 rename_type_var_in_term(t->t2, from, to));
    case TermTag::TApp:
      return tapp(rename_type_var_in_term(t->t1, from, to),
                  subst_type(t->type, from, repl));
    default:
      return t;
  }
}

}  // namespace

bool term_alpha_eq(TermPtr x, TermPtr y) {
  return term_alpha_eq_env(x, y, RenameEnv{}, RenameEnv{});
}

std::set<std::string> free_term_vars(TermPtr t) {
  std::set<std::string> bound, out;
  collect_term_vars(t, bound, out);
  return out;
}

std::set<std::string> free_type_vars_in_term(TermPtr t) {
  std::set<std::string> bound, out;
  collect_term_tvs(t, bound, out);
  return out;
}

std::string fresh_name(std::string_view base, const std::set<std::string>& avoid) {
  std::string candidate(base);
  if (candidate.empty()) candidate = "X";
  if (!avoid.count(candidate)) return candidate;
  for (int i = 1;; ++i) {
    std::string next = std::string(base) + std::to_string(i);
    if (!avoid.count(next)) return next;
  }
}

TermPtr subst_term(TermPtr t, std::string_view x, TermPtr s) {
  switch (t->tag) {
    case TermTag::Var:
      return t->name == x ? s : t;
    case TermTag::Lam: {
      if (t->name == x) return t;
      std::set<std::string> fv = free_term_vars(s);
      if (fv.count(t->name)) {
        fv.merge(free_term_vars(t->t1));
        fv.insert(std::string(x));
        std::string nn = fresh_name(t->name, fv);
        TermPtr body = rename_term_var(t->t1, t->name, nn);
        return lam(nn, t->type, subst_term(body, x, s));
      }
      return lam(t->name, t->type, subst_term(t->t1, x, s));
    }
    case TermTag::TLam:
      return tlam(t->name, t->type, subst_term(t->t1, x, s));
    case TermTag::App:
      return app(subst_term(t->t1, x, s), subst_term(t->t2, x, s));
    case TermTag::TApp:
      return tapp(subst_term(t->t1, x, s), t->type);
    default:
      return t;
  }
}

TermPtr subst_type_in_term(TermPtr t, std::string_view x, TypePtr s) {
  switch (t->tag) {
    case TermTag::Lam:
      return lam(t->name, subst_type(t->type, x, s),
                 subst_type_in_term(t->t1, x, s));
    case TermTag::TLam: {
      TypePtr nb = subst_type(t->type, x, s);
      if (t->name == x) return tlam(t->name, nb, t->t1);
      std::set<std::string> fv = free_type_vars(s);
      if (fv.count(t->name)) {
        fv.merge(free_type_vars_in_term(t->t1));
        fv.insert(std::string(x));
        std::string nn = fresh_name(t->name, fv);
        TermPtr body = rename_type_var_in_term(t->t1, t->name, nn);
        return tlam(nn, nb, subst_type_in_term(body, x, s));
      }
      return tlam(t->name, nb, subst_type_in_term(t->t1, x, s));
    }
    case TermTag::App:
      return app(subst_type_in_term(t->t1, x, s),
                 subst_type_in_term(t->t2, x, s));
    case TermTag::TApp:
      return tapp(subst_type_in_term(t->t1, x, s), subst_type(t->type, x, s));
    default:
      return t;
  }
}

bool is_beta_normal(TermPtr t) {
  switch (t->tag) {
    case TermTag::App:
      if (t->t1->tag == TermTag::Lam) return false;
      return is_beta_normal(t->t1) && is_beta_normal(t->t2);
    case TermTag::TApp:
      if (t->t1->tag == TermTag::TLam) return false;
      return is_beta_normal(t->t1);
    case TermTag::Lam:
    case TermTag::TLam:
      return is_beta_normal(t->t1);
    default:
      return true;
  }
}

namespace {

// One leftmost-outermost step; nullopt when the term is normal.
std::optional<TermPtr> beta_step(const TermPtr& t) {
  switch (t->tag) {
    case TermTag::App:
      if (t->t1->tag == TermTag::Lam)
        return subst_term(t->t1->t1, t->t1->name, t->t2);
      if (auto f = beta_step(t->t1)) return app(*f, t->t2);
      if (auto a = beta_step(t->t2)) return app(t->t1, *a);
      return std::nullopt;
    case TermTag::TApp:
      if (t->t1->tag == TermTag::TLam)
        return subst_type_in_term(t->t1->t1, t->t1->name, t->type);
      if (auto f = beta_step(t->t1)) return tapp(*f, t->type);
      return std::nullopt;
    case TermTag::Lam:
      if (auto b = beta_step(t->t1)) return lam(t->name, t->type, *b);
      return std::nullopt;
    case TermTag::TLam:
      if (auto b = beta_step(t->t1)) return tlam(t->name, t->type, *b);
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

}  // namespace

TermPtr beta_normalize(TermPtr t, long fuel) {
  if (fuel < 1) throw FuelExhausted("beta_normalize requires fuel >= 1");
  TermPtr cur = std::move(t);
  for (long used = 0;; ++used) {
    auto next = beta_step(cur);
    if (!next) return cur;
    if (used >= fuel) throw FuelExhausted("beta_normalize: fuel exhausted");
    cur = *next;
  }
}

// ---------------------------------------------------------------------------
// Contexts
// ---------------------------------------------------------------------------

namespace {

struct CtxKey {
  const CtxNode* parent;
  BindKind kind;
  std::string name;
  TypePtr type;

  bool operator==(const CtxKey& o) const {
    return parent == o.parent && kind == o.kind && name == o.name &&
           type == o.type;
  }
};

struct CtxKeyHash {
  size_t operator()(const CtxKey& k) const {
    size_t h = std::hash<const void*>{}(k.parent);
    h = hash_combine(h, static_cast<size_t>(k.kind));
    h = hash_combine(h, std::hash<std::string>{}(k.name));
    h = hash_combine(h, std::hash<const void*>{}(k.type));
    return h;
  }
};

class CtxArena {
public:
  static CtxArena& instance() {
    static CtxArena arena;
    return arena;
  }

  const CtxNode* intern(const CtxNode* parent, BindKind kind,
                        std::string_view name, TypePtr type) {
    const CtxNode* pc = parent ? parent->canon : nullptr;
    bool self_canon = pc == parent && type->canon == type;
    const CtxNode* canon =
        self_canon ? nullptr : intern(pc, kind, name, type->canon);

    CtxKey key{parent, kind, std::string(name), type};
    std::lock_guard<std::mutex> lock(mu_);
    auto it = table_.find(key);
    if (it != table_.end()) return it->second.get();

    auto node = std::make_unique<CtxNode>();
    node->parent = parent;
    node->kind = kind;
    node->name = key.name;
    node->type = type;
    node->depth = (parent ? parent->depth : 0) + 1;
    node->tdepth = (parent ? parent->tdepth : 0) +
                   (kind == BindKind::TypeBound ? 1 : 0);
    node->hash = CtxKeyHash{}(key);
    node->canon = canon ? canon : node.get();
    auto [pos, inserted] = table_.emplace(std::move(key), std::move(node));
    (void)inserted;
    return pos->second.get();
  }

private:
  std::mutex mu_;
  std::unordered_map<CtxKey, std::unique_ptr<CtxNode>, CtxKeyHash> table_;
};

}  // namespace

Context Context::push_type(std::string_view name, TypePtr bound) const {
  return Context(CtxArena::instance().intern(n_, BindKind::TypeBound, name, bound));
}

Context Context::push_term(std::string_view name, TypePtr type) const {
  return Context(CtxArena::instance().intern(n_, BindKind::TermBinding, name, type));
}

Context Context::pop() const { return Context(n_ ? n_->parent : nullptr); }

std::vector<const CtxNode*> Context::entries() const {
  std::vector<const CtxNode*> out;
  for (const CtxNode* p = n_; p; p = p->parent) out.push_back(p);
  std::reverse(out.begin(), out.end());
  return out;
}

std::optional<TypePtr> Context::bound_of(std::string_view name) const {
  for (const CtxNode* p = n_; p; p = p->parent)
    if (p->kind == BindKind::TypeBound && p->name == name) return p->type;
  return std::nullopt;
}

std::optional<TypePtr> Context::term_type_of(std::string_view name) const {
  for (const CtxNode* p = n_; p; p = p->parent)
    if (p->kind == BindKind::TermBinding && p->name == name) return p->type;
  return std::nullopt;
}

bool Context::binds(std::string_view name) const {
  for (const CtxNode* p = n_; p; p = p->parent)
    if (p->name == name) return true;
  return false;
}

std::set<std::string> Context::dom() const {
  std::set<std::string> out;
  for (const CtxNode* p = n_; p; p = p->parent) out.insert(p->name);
  return out;
}

std::string Context::fresh_type_var() const {
  uint32_t k = type_depth();
  std::string candidate = "$" + std::to_string(k);
  while (binds(candidate)) candidate = "$" + std::to_string(++k);
  return candidate;
}

}  // namespace bq
