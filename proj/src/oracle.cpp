#include "bq/oracle.hpp"

#include <unordered_map>

namespace bq {

namespace {

struct GoalKey {
  const CtxNode* ctx;
  TypePtr s;
  TypePtr t;

  bool operator==(const GoalKey& o) const {
    return ctx == o.ctx && s == o.s && t == o.t;
  }
};

struct GoalKeyHash {
  size_t operator()(const GoalKey& k) const {
    size_t h = std::hash<const void*>{}(k.ctx);
    h ^= std::hash<const void*>{}(k.s) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<const void*>{}(k.t) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

struct MemoEntry {
  int16_t found_height = INT16_MAX;  // height of `proof` when set
  int16_t max_failed = -1;           // largest budget known to fail
  DerivPtr proof;
};

struct Proof {
  DerivPtr d;
  int h = 0;
  explicit operator bool() const { return d != nullptr; }
};

TypePtr expose_var(const Context& ctx, TypePtr t) {
  while (t->tag == TypeTag::FVar) {
    auto b = ctx.bound_of(t->name);
    if (!b) break;
    t = *b;
  }
  return t;
}

void closed_subterms(TypePtr t, std::vector<TypePtr>& out) {
  if (t->open_level == 0) out.push_back(t);
  switch (t->tag) {
    case TypeTag::Arrow:
    case TypeTag::Meet:
    case TypeTag::Forall:
      closed_subterms(t->a, out);
      closed_subterms(t->b, out);
      break;
    default:
      break;
  }
}

struct Searcher {
  SystemId sys;
  std::unordered_map<GoalKey, MemoEntry, GoalKeyHash> memo;
  long expanded = 0;

  explicit Searcher(SystemId s) : sys(s) {}

  // Trans cut candidates: closed subterms of the goal sides, bounds in scope,
  // their exposures, and (fwedge) meets of a variable candidate with another
  // candidate. Meet cuts are anchored on a variable and size-capped at the
  // goal; the unrestricted pairwise closure mints fresh meets at every level
  // of a refutation search and does not terminate in practice.
  std::vector<TypePtr> cuts(const Context& ctx, TypePtr s, TypePtr t) const {
    std::vector<TypePtr> base;
    closed_subterms(s, base);
    closed_subterms(t, base);
    for (const CtxNode* e : ctx.entries())
      if (e->kind == BindKind::TypeBound) base.push_back(e->type);
    size_t n = base.size();
    for (size_t i = 0; i < n; ++i) base.push_back(expose_var(ctx, base[i]));
    if (sys == SystemId::Fwedge) {
      uint32_t cap = std::max(s->size, t->size);
      size_t m = base.size();
      for (size_t i = 0; i < m; ++i) {
        if (base[i]->tag != TypeTag::FVar) continue;
        for (size_t j = 0; j < m; ++j) {
          if (base[i]->canon == base[j]->canon) continue;
          if (base[i]->size + base[j]->size + 1 > cap) continue;
          base.push_back(meet(base[i], base[j]));
        }
      }
    }
    std::vector<TypePtr> out;
    std::set<TypePtr> seen;
    for (TypePtr u : base) {
      if (is_top(u) || alpha_eq(u, s) || alpha_eq(u, t)) continue;
      if (seen.insert(u->canon).second) out.push_back(u);
    }
    return out;
  }

  Proof prove(const Context& ctx, TypePtr s, TypePtr t, int budget) {
    if (budget <= 0) return {};
    GoalKey key{ctx.canon(), s->canon, t->canon};
    {
      auto& e = memo[key];
      if (e.found_height <= budget) return {e.proof, e.found_height};
      if (e.max_failed >= budget) return {};
    }
    Proof p = expand(ctx, s, t, budget);
    // recursive calls may rehash the table; refetch the slot
    auto& e = memo[key];
    if (p) {
      if (p.h < e.found_height) {
        e.found_height = static_cast<int16_t>(p.h);
        e.proof = p.d;
      }
    } else if (budget > e.max_failed) {
      e.max_failed = static_cast<int16_t>(budget);
    }
    return p;
  }

  Proof expand(const Context& ctx, TypePtr s, TypePtr t, int budget) {
    ++expanded;
    Judgment goal = Judgment::subtype(ctx, s, t);

    if (is_top(t)) return {mk_deriv(RuleId::SubTop, goal), 1};
    if (alpha_eq(s, t)) return {mk_deriv(RuleId::SubRefl, goal), 1};
    if (s->tag == TypeTag::FVar) {
      auto b = ctx.bound_of(s->name);
      if (b && alpha_eq(*b, t)) return {mk_deriv(RuleId::SubVar, goal), 1};
    }
    if (sys == SystemId::Fwedge && s->tag == TypeTag::Meet) {
      if (alpha_eq(t, s->a)) return {mk_deriv(RuleId::SubMeetL, goal), 1};
      if (alpha_eq(t, s->b)) return {mk_deriv(RuleId::SubMeetR, goal), 1};
    }

    if (budget < 2) return {};

    if (s->tag == TypeTag::Arrow && t->tag == TypeTag::Arrow) {
      if (Proof pd = prove(ctx, t->a, s->a, budget - 1)) {
        if (Proof pc = prove(ctx, s->b, t->b, budget - 1)) {
          return {mk_deriv(RuleId::SubArrow, goal, {pd.d, pc.d}),
                  1 + std::max(pd.h, pc.h)};
        }
      }
    }

    if (s->tag == TypeTag::Forall && t->tag == TypeTag::Forall) {
      if (Proof p = forall_rule(ctx, s, t, goal, budget)) return p;
    }

    if (sys == SystemId::Fwedge && t->tag == TypeTag::Meet) {
      if (Proof pl = prove(ctx, s, t->a, budget - 1)) {
        if (Proof pr = prove(ctx, s, t->b, budget - 1)) {
          return {mk_deriv(RuleId::SubMeetIntro, goal, {pl.d, pr.d}),
                  1 + std::max(pl.h, pr.h)};
        }
      }
    }

    for (TypePtr u : cuts(ctx, s, t)) {
      if (Proof p1 = prove(ctx, s, u, budget - 1)) {
        if (Proof p2 = prove(ctx, u, t, budget - 1)) {
          return {mk_deriv(RuleId::SubTrans, goal, {p1.d, p2.d}),
                  1 + std::max(p1.h, p2.h)};
        }
      }
    }
    return {};
  }

  Proof forall_rule(const Context& ctx, TypePtr s, TypePtr t, const Judgment& goal,
                    int budget) {
    Flavor lf = s->flavor;
    Flavor rf = t->flavor;
    if (lf == Flavor::Kernel && rf == Flavor::Kernel &&
        (sys == SystemId::Kt || sys == SystemId::Kernel)) {
      if (!alpha_eq(s->a, t->a)) return {};
      std::string x = ctx.fresh_type_var();
      Context inner = ctx.push_type(x, s->a);
      TypePtr xv = tvar(x);
      if (Proof pb = prove(inner, open_forall(s->b, xv), open_forall(t->b, xv),
                           budget - 1)) {
        return {mk_deriv(RuleId::SubForallFun, goal, {pb.d}), 1 + pb.h};
      }
      return {};
    }
    RuleId rule;
    TypePtr body_bound;
    if (lf == Flavor::Kernel && rf == Flavor::TopStyle && sys == SystemId::Kt) {
      rule = RuleId::SubForallLoc;
      body_bound = s->a;
    } else if (lf == Flavor::TopStyle && rf == Flavor::TopStyle &&
               (sys == SystemId::Kt || sys == SystemId::Ftop)) {
      rule = RuleId::SubForallTop;
      body_bound = top_type();
    } else if (lf == Flavor::Plain && rf == Flavor::Plain &&
               (sys == SystemId::FsubOrig || sys == SystemId::Fwedge)) {
      rule = RuleId::SubForallOrig;
      body_bound = t->a;
    } else {
      return {};
    }
    Proof pb = prove(ctx, t->a, s->a, budget - 1);
    if (!pb) return {};
    std::string x = ctx.fresh_type_var();
    Context inner = ctx.push_type(x, body_bound);
    TypePtr xv = tvar(x);
    Proof pk = prove(inner, open_forall(s->b, xv), open_forall(t->b, xv), budget - 1);
    if (!pk) return {};
    return {mk_deriv(rule, goal, {pb.d, pk.d}), 1 + std::max(pb.h, pk.h)};
  }
};

void validate_query(SystemId sys, const Context& ctx, TypePtr s, TypePtr t) {
  WfCheck ws = wf_type(ctx, s, sys);
  if (!ws.ok) throw InvalidInput("ill-formed query lhs: " + ws.detail);
  WfCheck wt = wf_type(ctx, t, sys);
  if (!wt.ok) throw InvalidInput("ill-formed query rhs: " + wt.detail);
}

}  // namespace

SearchResult search_subtype(SystemId sys, const Context& ctx, TypePtr s,
                            TypePtr t, int depth) {
  if (depth < 1) throw InvalidInput("depth must be positive");
  validate_query(sys, ctx, s, t);
  Searcher searcher(sys);
  SearchResult r;
  for (int d = 1; d <= depth; ++d) {
    Proof p = searcher.prove(ctx, s, t, d);
    if (p) {
      r.outcome = SearchResult::Outcome::Found;
      r.derivation = p.d;
      r.depth_used = d;
      r.nodes_expanded = searcher.expanded;
      return r;
    }
  }
  r.outcome = SearchResult::Outcome::NotFoundWithinDepth;
  r.depth_used = depth;
  r.nodes_expanded = searcher.expanded;
  return r;
}

struct SearchSession::Impl {
  Searcher searcher;
  explicit Impl(SystemId s) : searcher(s) {}
};

SearchSession::SearchSession(SystemId sys) : impl_(std::make_unique<Impl>(sys)) {}
SearchSession::~SearchSession() = default;

SearchResult SearchSession::query(const Context& ctx, TypePtr s, TypePtr t,
                                  int depth, bool want_derivation) {
  if (depth < 1) throw InvalidInput("depth must be positive");
  long before = impl_->searcher.expanded;
  Proof p = impl_->searcher.prove(ctx, s, t, depth);
  SearchResult r;
  r.nodes_expanded = impl_->searcher.expanded - before;
  if (p) {
    r.outcome = SearchResult::Outcome::Found;
    if (want_derivation) r.derivation = p.d;
    r.depth_used = p.h;
  } else {
    r.outcome = SearchResult::Outcome::NotFoundWithinDepth;
    r.depth_used = depth;
  }
  return r;
}

long SearchSession::nodes_expanded() const { return impl_->searcher.expanded; }

}  // namespace bq
