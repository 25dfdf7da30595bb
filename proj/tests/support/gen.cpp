#include "gen.hpp"

#include <cassert>

namespace bq::gen {

namespace {

std::vector<std::string> type_vars(const Context& ctx) {
  std::vector<std::string> out;
  for (const CtxNode* e : ctx.entries())
    if (e->kind == BindKind::TypeBound) out.push_back(e->name);
  return out;
}

std::string fresh_tvar(const Context& ctx, Rng& rng) {
  for (;;) {
    std::string name = "G" + std::to_string(rng.below(1000));
    if (!ctx.binds(name)) return name;
  }
}

std::string fresh_var(const Context& ctx, Rng& rng) {
  for (;;) {
    std::string name = "g" + std::to_string(rng.below(1000));
    if (!ctx.binds(name)) return name;
  }
}

}  // namespace

TypePtr type(Rng& rng, const Context& ctx, SystemId sys, int budget) {
  std::vector<std::string> vars = type_vars(ctx);
  if (budget <= 1) {
    int n = 1 + static_cast<int>(vars.size());
    int k = rng.below(n);
    if (k == 0) return top_type();
    return tvar(vars[k - 1]);
  }
  int meet_weight = meets_allowed(sys) ? 2 : 0;
  int roll = rng.below(6 + meet_weight);
  if (roll == 0) {
    return type(rng, ctx, sys, 1);
  }
  if (roll <= 2) {  // arrow
    int left = 1 + rng.below(std::max(1, budget - 2));
    return arrow(type(rng, ctx, sys, left),
                 type(rng, ctx, sys, budget - 1 - left));
  }
  if (roll <= 5) {  // quantifier
    Flavor f;
    switch (sys) {
      case SystemId::Kt: f = rng.chance(1, 2) ? Flavor::Kernel : Flavor::TopStyle; break;
      case SystemId::Kernel: f = Flavor::Kernel; break;
      case SystemId::Ftop: f = Flavor::TopStyle; break;
      default: f = Flavor::Plain; break;
    }
    TypePtr bound = top_type();
    int body_budget = budget - 2;
    if (bounded_forall_allowed(sys) && rng.chance(1, 2) && budget >= 4) {
      int bb = 1 + rng.below(2);
      bound = type(rng, ctx, sys, bb);
      body_budget = budget - 1 - bound->size;
    }
    std::string x = fresh_tvar(ctx, rng);
    TypePtr body = type(rng, ctx.push_type(x, bound), sys,
                        std::max(1, body_budget));
    return forall(f, x, bound, close_type(body, x));
  }
  // meet
  int left = 1 + rng.below(std::max(1, budget - 2));
  return meet(type(rng, ctx, sys, left), type(rng, ctx, sys, budget - 1 - left));
}

Context context(Rng& rng, SystemId sys, int nvars, int bound_budget) {
  Context ctx;
  for (int i = 0; i < nvars; ++i) {
    std::string name(1, static_cast<char>('A' + i));
    TypePtr bound =
        rng.chance(1, 2) ? top_type() : type(rng, ctx, sys, 1 + rng.below(bound_budget));
    ctx = ctx.push_type(name, bound);
  }
  return ctx;
}

namespace {

DerivPtr refl(const Context& ctx, TypePtr t) {
  return mk_deriv(RuleId::SubRefl, Judgment::subtype(ctx, t, t));
}

Related related_refl(const Context& ctx, TypePtr t) { return {t, refl(ctx, t)}; }

}  // namespace

Related supertype(Rng& rng, const Context& ctx, SystemId sys, TypePtr t, int steps) {
  if (steps <= 0 || rng.chance(1, 4)) return related_refl(ctx, t);

  // widening to Top
  if (rng.chance(1, 6) && !is_top(t))
    return {top_type(), mk_deriv(RuleId::SubTop, Judgment::subtype(ctx, t, top_type()))};

  switch (t->tag) {
    case TypeTag::FVar: {
      auto bound = ctx.bound_of(t->name);
      if (bound && rng.chance(1, 2)) {
        DerivPtr var = mk_deriv(RuleId::SubVar, Judgment::subtype(ctx, t, *bound));
        if (rng.chance(1, 2)) return {*bound, var};
        Related up = supertype(rng, ctx, sys, *bound, steps - 1);
        return {up.type,
                mk_deriv(RuleId::SubTrans, Judgment::subtype(ctx, t, up.type),
                         {var, up.deriv})};
      }
      return related_refl(ctx, t);
    }
    case TypeTag::Arrow: {
      Related dom = subtype(rng, ctx, sys, t->a, steps - 1);
      Related cod = supertype(rng, ctx, sys, t->b, steps - 1);
      TypePtr out = arrow(dom.type, cod.type);
      return {out, mk_deriv(RuleId::SubArrow, Judgment::subtype(ctx, t, out),
                            {dom.deriv, cod.deriv})};
    }
    case TypeTag::Forall: {
      std::string x = fresh_tvar(ctx, rng);
      TypePtr xv = tvar(x);
      TypePtr body = open_forall(t->b, xv);
      if (t->flavor == Flavor::Kernel) {
        bool via_loc = sys == SystemId::Kt && rng.chance(1, 2);
        if (via_loc) {
          Related nb = subtype(rng, ctx, sys, t->a, steps - 1);
          Context inner = ctx.push_type(x, t->a);
          Related nbody = supertype(rng, inner, sys, body, steps - 1);
          TypePtr out = forall(Flavor::TopStyle, x, nb.type,
                               close_type(nbody.type, x));
          return {out, mk_deriv(RuleId::SubForallLoc,
                                Judgment::subtype(ctx, t, out),
                                {nb.deriv, nbody.deriv})};
        }
        Context inner = ctx.push_type(x, t->a);
        Related nbody = supertype(rng, inner, sys, body, steps - 1);
        TypePtr out = forall(Flavor::Kernel, x, t->a, close_type(nbody.type, x));
        return {out, mk_deriv(RuleId::SubForallFun,
                              Judgment::subtype(ctx, t, out), {nbody.deriv})};
      }
      if (t->flavor == Flavor::TopStyle) {
        Related nb = subtype(rng, ctx, sys, t->a, steps - 1);
        Context inner = ctx.push_type(x, top_type());
        Related nbody = supertype(rng, inner, sys, body, steps - 1);
        TypePtr out = forall(Flavor::TopStyle, x, nb.type,
                             close_type(nbody.type, x));
        return {out, mk_deriv(RuleId::SubForallTop,
                              Judgment::subtype(ctx, t, out),
                              {nb.deriv, nbody.deriv})};
      }
      // plain: orig rule; fwedge keeps the bound at Top
      Related nb = sys == SystemId::Fwedge
                       ? related_refl(ctx, t->a)
                       : subtype(rng, ctx, sys, t->a, steps - 1);
      Context inner = ctx.push_type(x, nb.type);
      Related nbody = supertype(rng, inner, sys, body, steps - 1);
      TypePtr out = forall(Flavor::Plain, x, nb.type, close_type(nbody.type, x));
      return {out, mk_deriv(RuleId::SubForallOrig, Judgment::subtype(ctx, t, out),
                            {nb.deriv, nbody.deriv})};
    }
    case TypeTag::Meet: {
      int pick = rng.below(3);
      if (pick == 0)
        return {t->a, mk_deriv(RuleId::SubMeetL, Judgment::subtype(ctx, t, t->a))};
      if (pick == 1)
        return {t->b, mk_deriv(RuleId::SubMeetR, Judgment::subtype(ctx, t, t->b))};
      Related la = supertype(rng, ctx, sys, t->a, steps - 1);
      Related rb = supertype(rng, ctx, sys, t->b, steps - 1);
      TypePtr out = meet(la.type, rb.type);
      DerivPtr pl = mk_deriv(
          RuleId::SubTrans, Judgment::subtype(ctx, t, la.type),
          {mk_deriv(RuleId::SubMeetL, Judgment::subtype(ctx, t, t->a)), la.deriv});
      DerivPtr pr = mk_deriv(
          RuleId::SubTrans, Judgment::subtype(ctx, t, rb.type),
          {mk_deriv(RuleId::SubMeetR, Judgment::subtype(ctx, t, t->b)), rb.deriv});
      return {out, mk_deriv(RuleId::SubMeetIntro, Judgment::subtype(ctx, t, out),
                            {pl, pr})};
    }
    default:
      return related_refl(ctx, t);
  }
}

Related subtype(Rng& rng, const Context& ctx, SystemId sys, TypePtr t, int steps) {
  if (steps <= 0 || rng.chance(1, 4)) return related_refl(ctx, t);

  if (sys == SystemId::Fwedge && rng.chance(1, 6)) {
    // any meet with t on the left projects back to t
    TypePtr extra = type(rng, ctx, sys, 2);
    TypePtr m = meet(t, extra);
    return {m, mk_deriv(RuleId::SubMeetL, Judgment::subtype(ctx, m, t))};
  }

  switch (t->tag) {
    case TypeTag::Top: {
      TypePtr u = type(rng, ctx, sys, 1 + rng.below(4));
      return {u, mk_deriv(RuleId::SubTop, Judgment::subtype(ctx, u, t))};
    }
    case TypeTag::FVar: {
      // variables bound directly at t are below it
      for (const CtxNode* e : ctx.entries()) {
        if (e->kind == BindKind::TypeBound && alpha_eq(e->type, t) &&
            rng.chance(1, 2)) {
          TypePtr v = tvar(e->name);
          return {v, mk_deriv(RuleId::SubVar, Judgment::subtype(ctx, v, t))};
        }
      }
      return related_refl(ctx, t);
    }
    case TypeTag::Arrow: {
      Related dom = supertype(rng, ctx, sys, t->a, steps - 1);
      Related cod = subtype(rng, ctx, sys, t->b, steps - 1);
      TypePtr out = arrow(dom.type, cod.type);
      return {out, mk_deriv(RuleId::SubArrow, Judgment::subtype(ctx, out, t),
                            {dom.deriv, cod.deriv})};
    }
    case TypeTag::Forall: {
      std::string x = fresh_tvar(ctx, rng);
      TypePtr xv = tvar(x);
      TypePtr body = open_forall(t->b, xv);
      if (t->flavor == Flavor::Kernel) {
        Context inner = ctx.push_type(x, t->a);
        Related nbody = subtype(rng, inner, sys, body, steps - 1);
        TypePtr out = forall(Flavor::Kernel, x, t->a, close_type(nbody.type, x));
        return {out, mk_deriv(RuleId::SubForallFun,
                              Judgment::subtype(ctx, out, t), {nbody.deriv})};
      }
      if (t->flavor == Flavor::TopStyle) {
        bool via_loc = sys == SystemId::Kt && rng.chance(1, 2);
        Related nb = supertype(rng, ctx, sys, t->a, steps - 1);
        if (via_loc) {
          Context inner = ctx.push_type(x, nb.type);
          Related nbody = subtype(rng, inner, sys, body, steps - 1);
          TypePtr out = forall(Flavor::Kernel, x, nb.type,
                               close_type(nbody.type, x));
          return {out, mk_deriv(RuleId::SubForallLoc,
                                Judgment::subtype(ctx, out, t),
                                {nb.deriv, nbody.deriv})};
        }
        Context inner = ctx.push_type(x, top_type());
        Related nbody = subtype(rng, inner, sys, body, steps - 1);
        TypePtr out = forall(Flavor::TopStyle, x, nb.type,
                             close_type(nbody.type, x));
        return {out, mk_deriv(RuleId::SubForallTop,
                              Judgment::subtype(ctx, out, t),
                              {nb.deriv, nbody.deriv})};
      }
      Related nb = sys == SystemId::Fwedge
                       ? related_refl(ctx, t->a)
                       : supertype(rng, ctx, sys, t->a, steps - 1);
      Context inner = ctx.push_type(x, t->a);
      Related nbody = subtype(rng, inner, sys, body, steps - 1);
      TypePtr out = forall(Flavor::Plain, x, nb.type, close_type(nbody.type, x));
      return {out, mk_deriv(RuleId::SubForallOrig,
                            Judgment::subtype(ctx, out, t),
                            {nb.deriv, nbody.deriv})};
    }
    case TypeTag::Meet: {
      Related la = subtype(rng, ctx, sys, t->a, steps - 1);
      Related rb = subtype(rng, ctx, sys, t->b, steps - 1);
      TypePtr out = meet(la.type, rb.type);
      DerivPtr pl = mk_deriv(
          RuleId::SubTrans, Judgment::subtype(ctx, out, t->a),
          {mk_deriv(RuleId::SubMeetL, Judgment::subtype(ctx, out, la.type)),
           la.deriv});
      DerivPtr pr = mk_deriv(
          RuleId::SubTrans, Judgment::subtype(ctx, out, t->b),
          {mk_deriv(RuleId::SubMeetR, Judgment::subtype(ctx, out, rb.type)),
           rb.deriv});
      return {out, mk_deriv(RuleId::SubMeetIntro, Judgment::subtype(ctx, out, t),
                            {pl, pr})};
    }
    default:
      return related_refl(ctx, t);
  }
}

// ---------------------------------------------------------------------------
// Well-typed terms
// ---------------------------------------------------------------------------

namespace {

DerivPtr loc_bridge_deriv(const Context& ctx, TypePtr kernel_type,
                          const std::string& x) {
  TypePtr bound = kernel_type->a;
  TypePtr target =
      forall(Flavor::TopStyle, kernel_type->name, bound, kernel_type->b);
  DerivPtr pb = refl(ctx, bound);
  Context inner = ctx.push_type(x, bound);
  TypePtr body = open_forall(kernel_type->b, tvar(x));
  DerivPtr pk = refl(inner, body);
  return mk_deriv(RuleId::SubForallLoc,
                  Judgment::subtype(ctx, kernel_type, target), {pb, pk});
}

Typed var_or_top(Rng& rng, const Context& ctx) {
  std::vector<const CtxNode*> terms;
  for (const CtxNode* e : ctx.entries())
    if (e->kind == BindKind::TermBinding) terms.push_back(e);
  if (!terms.empty() && rng.chance(2, 3)) {
    const CtxNode* e = terms[rng.below(static_cast<int>(terms.size()))];
    TermPtr v = term_var(e->name);
    return {v, e->type,
            mk_deriv(RuleId::TypVar, Judgment::typing(ctx, v, e->type))};
  }
  TermPtr t = top_term();
  return {t, top_type(), mk_deriv(RuleId::TypTop, Judgment::typing(ctx, t, top_type()))};
}

}  // namespace

Typed typed_term(Rng& rng, const Context& ctx, SystemId cert, int depth) {
  SystemId type_sys = cert == SystemId::Kernel ? SystemId::Kernel : SystemId::Kt;
  if (depth <= 0) return var_or_top(rng, ctx);

  switch (rng.below(6)) {
    case 0:
      return var_or_top(rng, ctx);
    case 1: {  // lam
      TypePtr ann = type(rng, ctx, type_sys, 3);
      std::string x = fresh_var(ctx, rng);
      Typed body = typed_term(rng, ctx.push_term(x, ann), cert, depth - 1);
      TermPtr t = lam(x, ann, body.term);
      TypePtr ty = arrow(ann, body.type);
      return {t, ty,
              mk_deriv(RuleId::TypArrowI, Judgment::typing(ctx, t, ty),
                       {body.deriv})};
    }
    case 2: {  // tlam
      TypePtr bound = type(rng, ctx, type_sys, 2);
      std::string x = fresh_tvar(ctx, rng);
      Typed body = typed_term(rng, ctx.push_type(x, bound), cert, depth - 1);
      TermPtr t = tlam(x, bound, body.term);
      TypePtr ty = forall(Flavor::Kernel, x, bound, close_type(body.type, x));
      return {t, ty,
              mk_deriv(RuleId::TypForallI, Judgment::typing(ctx, t, ty),
                       {body.deriv})};
    }
    case 3: {  // app through a fresh abstraction
      Typed arg = typed_term(rng, ctx, cert, depth - 1);
      Related wide = supertype(rng, ctx, type_sys, arg.type, 1);
      DerivPtr argd = arg.deriv;
      if (!alpha_eq(wide.type, arg.type)) {
        argd = mk_deriv(RuleId::TypSub,
                        Judgment::typing(ctx, arg.term, wide.type),
                        {argd, wide.deriv});
      }
      std::string x = fresh_var(ctx, rng);
      Typed body = typed_term(rng, ctx.push_term(x, wide.type), cert, depth - 1);
      TermPtr fn = lam(x, wide.type, body.term);
      TypePtr fnty = arrow(wide.type, body.type);
      DerivPtr fnd = mk_deriv(RuleId::TypArrowI, Judgment::typing(ctx, fn, fnty),
                              {body.deriv});
      TermPtr t = app(fn, arg.term);
      return {t, body.type,
              mk_deriv(RuleId::TypArrowE, Judgment::typing(ctx, t, body.type),
                       {fnd, argd})};
    }
    case 4: {  // tapp through a fresh type abstraction
      TypePtr bound = type(rng, ctx, type_sys, 2);
      std::string x = fresh_tvar(ctx, rng);
      Typed body = typed_term(rng, ctx.push_type(x, bound), cert, depth - 1);
      TermPtr fn = tlam(x, bound, body.term);
      TypePtr fnty = forall(Flavor::Kernel, x, bound, close_type(body.type, x));
      DerivPtr fnd = mk_deriv(RuleId::TypForallI, Judgment::typing(ctx, fn, fnty),
                              {body.deriv});
      Related narrow = subtype(rng, ctx, type_sys, bound, 1);
      if (cert == SystemId::Kt) {
        DerivPtr bridge = loc_bridge_deriv(ctx, fnty, x);
        TypePtr wide = bridge->conclusion.t2;
        fnd = mk_deriv(RuleId::TypSub, Judgment::typing(ctx, fn, wide),
                       {fnd, bridge});
      }
      TermPtr t = tapp(fn, narrow.type);
      TypePtr ty = open_forall(close_type(body.type, x), narrow.type);
      return {t, ty,
              mk_deriv(RuleId::TypForallE, Judgment::typing(ctx, t, ty),
                       {fnd, narrow.deriv})};
    }
    default: {  // subsumption wrapper
      Typed inner = typed_term(rng, ctx, cert, depth - 1);
      Related wide = supertype(rng, ctx, type_sys, inner.type, 2);
      if (alpha_eq(wide.type, inner.type)) return inner;
      return {inner.term, wide.type,
              mk_deriv(RuleId::TypSub,
                       Judgment::typing(ctx, inner.term, wide.type),
                       {inner.deriv, wide.deriv})};
    }
  }
}

// ---------------------------------------------------------------------------
// Mutation
// ---------------------------------------------------------------------------

bool trivially_valid_flip(const Derivation& node, RuleId new_rule) {
  if (!node.premises.empty()) return false;
  const Judgment& c = node.conclusion;
  if (c.kind != JudgKind::Subtype) return false;
  switch (new_rule) {
    case RuleId::SubTop:
      return is_top(c.t2);
    case RuleId::SubRefl:
      return alpha_eq(c.t1, c.t2);
    case RuleId::SubVar: {
      if (c.t1->tag != TypeTag::FVar) return false;
      auto b = c.ctx.bound_of(c.t1->name);
      return b && alpha_eq(*b, c.t2);
    }
    case RuleId::SubMeetL:
      return c.t1->tag == TypeTag::Meet && alpha_eq(c.t2, c.t1->a);
    case RuleId::SubMeetR:
      return c.t1->tag == TypeTag::Meet && alpha_eq(c.t2, c.t1->b);
    default:
      return false;
  }
}

namespace {

std::vector<RuleId> same_kind_rules(RuleId r) {
  std::vector<RuleId> out;
  for (int i = 0; i <= static_cast<int>(RuleId::EqApp2); ++i) {
    RuleId cand = static_cast<RuleId>(i);
    if (cand != r && rule_kind(cand) == rule_kind(r)) out.push_back(cand);
  }
  return out;
}

DerivPtr replace_at(const DerivPtr& d, const std::vector<int>& path, size_t i,
                    RuleId new_rule) {
  if (i == path.size())
    return mk_deriv(new_rule, d->conclusion, d->premises);
  std::vector<DerivPtr> premises = d->premises;
  int k = path[i];
  premises[k] = replace_at(premises[k], path, i + 1, new_rule);
  return mk_deriv(d->rule, d->conclusion, std::move(premises));
}

void collect_mutants(const DerivPtr& root, const DerivPtr& node,
                     std::vector<int>& path, std::vector<DerivPtr>& out) {
  for (RuleId cand : same_kind_rules(node->rule)) {
    if (trivially_valid_flip(*node, cand)) continue;
    out.push_back(replace_at(root, path, 0, cand));
  }
  for (size_t i = 0; i < node->premises.size(); ++i) {
    path.push_back(static_cast<int>(i));
    collect_mutants(root, node->premises[i], path, out);
    path.pop_back();
  }
}

}  // namespace

std::vector<DerivPtr> label_mutants(const DerivPtr& d) {
  std::vector<DerivPtr> out;
  std::vector<int> path;
  collect_mutants(d, d, path, out);
  return out;
}

}  // namespace bq::gen
