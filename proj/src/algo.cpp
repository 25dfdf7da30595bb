#include "bq/algo.hpp"

#include <cassert>
#include <stdexcept>

namespace bq {

TypePtr expose(const Context& ctx, TypePtr t) {
  while (t->tag == TypeTag::FVar) {
    auto b = ctx.bound_of(t->name);
    if (!b) break;
    t = *b;
  }
  return t;
}

namespace {

struct Goal {
  Context ctx;
  TypePtr s;
  TypePtr t;
};

}  // namespace

AlgoResult algo_subtype(const Context& ctx, TypePtr s, TypePtr t,
                        const AlgoOptions& opts) {
  AlgoResult res;
  res.trace.fuel_cap = opts.fuel;

  std::vector<Goal> stack;
  stack.push_back({ctx, s, t});

  auto emit = [&](AlgoRule rule, const Goal& g, uint8_t premises) {
    ++res.trace.step_count;
    if (opts.record_steps)
      res.trace.steps.push_back(
          {rule, Judgment::subtype(g.ctx, g.s, g.t), premises});
  };

  while (!stack.empty()) {
    if (res.trace.step_count >= opts.fuel) {
      res.trace.fuel_exhausted = true;
      res.accepted = false;
      return res;
    }
    Goal g = stack.back();
    stack.pop_back();

    if (is_top(g.t)) {
      emit(AlgoRule::Top, g, 0);
      continue;
    }
    if (g.s->tag == TypeTag::FVar) {
      if (g.t->tag == TypeTag::FVar && alpha_eq(g.s, g.t)) {
        emit(AlgoRule::ReflVar, g, 0);
        continue;
      }
      auto bound = g.ctx.bound_of(g.s->name);
      if (!bound) {
        res.failed_goal = Judgment::subtype(g.ctx, g.s, g.t);
        return res;
      }
      emit(AlgoRule::VarExpose, g, 1);
      stack.push_back({g.ctx, *bound, g.t});
      continue;
    }
    if (g.s->tag == TypeTag::Arrow && g.t->tag == TypeTag::Arrow) {
      emit(AlgoRule::Arrow, g, 2);
      stack.push_back({g.ctx, g.s->b, g.t->b});      // processed second
      stack.push_back({g.ctx, g.t->a, g.s->a});      // processed first
      continue;
    }
    if (g.s->tag == TypeTag::Forall && g.t->tag == TypeTag::Forall) {
      Flavor lf = g.s->flavor;
      Flavor rf = g.t->flavor;
      if (lf == Flavor::Kernel && rf == Flavor::Kernel) {
        if (!alpha_eq(g.s->a, g.t->a)) {
          res.failed_goal = Judgment::subtype(g.ctx, g.s, g.t);
          return res;
        }
        emit(AlgoRule::ForallFun, g, 1);
        std::string x = g.ctx.fresh_type_var();
        Context inner = g.ctx.push_type(x, g.s->a);
        TypePtr xv = tvar(x);
        stack.push_back({inner, open_forall(g.s->b, xv), open_forall(g.t->b, xv)});
        continue;
      }
      if (lf == Flavor::Kernel && rf == Flavor::TopStyle) {
        emit(AlgoRule::ForallLoc, g, 2);
        std::string x = g.ctx.fresh_type_var();
        Context inner = g.ctx.push_type(x, g.s->a);
        TypePtr xv = tvar(x);
        stack.push_back({inner, open_forall(g.s->b, xv), open_forall(g.t->b, xv)});
        stack.push_back({g.ctx, g.t->a, g.s->a});
        continue;
      }
      if (lf == Flavor::TopStyle && rf == Flavor::TopStyle) {
        emit(AlgoRule::ForallTop, g, 2);
        std::string x = g.ctx.fresh_type_var();
        Context inner = g.ctx.push_type(x, top_type());
        TypePtr xv = tvar(x);
        stack.push_back({inner, open_forall(g.s->b, xv), open_forall(g.t->b, xv)});
        stack.push_back({g.ctx, g.t->a, g.s->a});
        continue;
      }
      // top-style on the left of kernel is never derivable; plain flavors are
      // not part of this system
      res.failed_goal = Judgment::subtype(g.ctx, g.s, g.t);
      return res;
    }
    res.failed_goal = Judgment::subtype(g.ctx, g.s, g.t);
    return res;
  }
  res.accepted = true;
  return res;
}

namespace {

RuleId declarative_rule(SystemId sys, AlgoRule r) {
  switch (r) {
    case AlgoRule::Top: return RuleId::SubTop;
    case AlgoRule::ReflVar: return RuleId::SubRefl;
    case AlgoRule::VarExpose: return RuleId::SubTrans;
    case AlgoRule::Arrow: return RuleId::SubArrow;
    case AlgoRule::ForallFun:
      if (sys == SystemId::Ftop)
        throw std::logic_error("kernel rule in an ftop trace");
      return RuleId::SubForallFun;
    case AlgoRule::ForallLoc:
      if (sys != SystemId::Kt)
        throw std::logic_error("mixed-decoration rule outside kt");
      return RuleId::SubForallLoc;
    case AlgoRule::ForallTop:
      if (sys == SystemId::Kernel)
        throw std::logic_error("top-style rule in a kernel trace");
      return RuleId::SubForallTop;
  }
  throw std::logic_error("unknown algorithmic rule");
}

}  // namespace

DerivPtr algo_to_declarative(SystemId sys, const AlgoTrace& trace) {
  if (trace.steps.empty())
    throw std::logic_error("cannot replay an unrecorded trace");
  std::vector<DerivPtr> built;
  for (auto it = trace.steps.rbegin(); it != trace.steps.rend(); ++it) {
    const AlgoStep& st = *it;
    if (built.size() < st.premise_count)
      throw std::logic_error("cannot replay a partial trace");
    std::vector<DerivPtr> kids;
    kids.reserve(st.premise_count);
    for (int i = 0; i < st.premise_count; ++i) {
      kids.push_back(built.back());
      built.pop_back();
    }
    if (st.rule == AlgoRule::VarExpose) {
      // X <: T from X <: U (Var) and U <: T
      const Judgment& goal = st.goal;
      auto bound = goal.ctx.bound_of(goal.t1->name);
      if (!bound) throw std::logic_error("variable step without a bound");
      DerivPtr var = mk_deriv(RuleId::SubVar,
                              Judgment::subtype(goal.ctx, goal.t1, *bound));
      built.push_back(
          mk_deriv(RuleId::SubTrans, goal, {var, kids[0]}));
      continue;
    }
    built.push_back(mk_deriv(declarative_rule(sys, st.rule), st.goal,
                             std::move(kids)));
  }
  if (built.size() != 1) throw std::logic_error("trace does not form one tree");
  return built.back();
}

DerivPtr exposure_derivation(const Context& ctx, TypePtr t) {
  if (t->tag != TypeTag::FVar) return nullptr;
  auto bound = ctx.bound_of(t->name);
  if (!bound) return nullptr;
  DerivPtr var = mk_deriv(RuleId::SubVar, Judgment::subtype(ctx, t, *bound));
  DerivPtr rest = exposure_derivation(ctx, *bound);
  if (!rest) return var;
  return mk_deriv(
      RuleId::SubTrans,
      Judgment::subtype(ctx, t, rest->conclusion.t2), {var, rest});
}

// ---------------------------------------------------------------------------
// Minimal typing
// ---------------------------------------------------------------------------

std::string to_string(UntypableReason r) {
  switch (r) {
    case UntypableReason::NotAFunction: return "NotAFunction";
    case UntypableReason::NotAQuantifier: return "NotAQuantifier";
    case UntypableReason::ArgumentMismatch: return "ArgumentMismatch";
    case UntypableReason::UnboundVariable: return "UnboundVariable";
  }
  return "?";
}

namespace {

MinTypeResult untypable(UntypableReason r, std::string detail) {
  MinTypeResult res;
  res.typed = false;
  res.reason = r;
  res.detail = std::move(detail);
  return res;
}

MinDerivPtr mk_min(MinRule rule, Judgment conclusion,
                   std::vector<MinDerivPtr> kids = {}, TypePtr exposed = nullptr,
                   AlgoResult sub = {}) {
  auto m = std::make_shared<MinDeriv>();
  m->rule = rule;
  m->conclusion = std::move(conclusion);
  m->kids = std::move(kids);
  m->exposed = exposed;
  m->sub_check = std::move(sub);
  return m;
}

MinTypeResult typed_result(MinDerivPtr trace) {
  MinTypeResult res;
  res.typed = true;
  res.type = trace->conclusion.t1;
  res.trace = std::move(trace);
  return res;
}

MinTypeResult min_rec(const Context& ctx, const TermPtr& t,
                      const AlgoOptions& opts) {
  switch (t->tag) {
    case TermTag::TopC:
      return typed_result(
          mk_min(MinRule::Top, Judgment::typing(ctx, t, top_type())));
    case TermTag::Var: {
      auto ty = ctx.term_type_of(t->name);
      if (!ty) return untypable(UntypableReason::UnboundVariable, t->name);
      return typed_result(mk_min(MinRule::Var, Judgment::typing(ctx, t, *ty)));
    }
    case TermTag::Lam: {
      std::string binder = t->name;
      TermPtr body = t->t1;
      if (ctx.binds(binder)) {
        std::string nn = fresh_name(binder, ctx.dom());
        body = subst_term(body, binder, term_var(nn));
        binder = nn;
      }
      MinTypeResult inner = min_rec(ctx.push_term(binder, t->type), body, opts);
      if (!inner.typed) return inner;
      TypePtr ty = arrow(t->type, inner.type);
      return typed_result(mk_min(MinRule::Lam, Judgment::typing(ctx, t, ty),
                                 {inner.trace}));
    }
    case TermTag::TLam: {
      std::string binder = t->name;
      TermPtr body = t->t1;
      if (ctx.binds(binder)) {
        std::string nn = fresh_name(binder, ctx.dom());
        body = subst_type_in_term(body, binder, tvar(nn));
        binder = nn;
      }
      MinTypeResult inner = min_rec(ctx.push_type(binder, t->type), body, opts);
      if (!inner.typed) return inner;
      TypePtr ty = forall(Flavor::Kernel, binder, t->type,
                          close_type(inner.type, binder));
      return typed_result(mk_min(MinRule::TLam, Judgment::typing(ctx, t, ty),
                                 {inner.trace}));
    }
    case TermTag::App: {
      MinTypeResult mf = min_rec(ctx, t->t1, opts);
      if (!mf.typed) return mf;
      MinTypeResult ma = min_rec(ctx, t->t2, opts);
      if (!ma.typed) return ma;
      TypePtr exposed = expose(ctx, mf.type);
      if (exposed->tag != TypeTag::Arrow)
        return untypable(UntypableReason::NotAFunction,
                         "function position exposes to a non-arrow type");
      AlgoResult sub = algo_subtype(ctx, ma.type, exposed->a, opts);
      if (sub.fuel_exhausted()) {
        MinTypeResult res;
        res.fuel_exhausted = true;
        res.detail = "fuel exhausted while checking the argument";
        return res;
      }
      if (!sub.accepted)
        return untypable(UntypableReason::ArgumentMismatch,
                         "argument type is not a subtype of the domain");
      Judgment c = Judgment::typing(ctx, t, exposed->b);
      return typed_result(mk_min(MinRule::App, std::move(c),
                                 {mf.trace, ma.trace}, exposed, std::move(sub)));
    }
    case TermTag::TApp: {
      MinTypeResult mf = min_rec(ctx, t->t1, opts);
      if (!mf.typed) return mf;
      TypePtr exposed = expose(ctx, mf.type);
      if (exposed->tag != TypeTag::Forall ||
          exposed->flavor == Flavor::Plain)
        return untypable(UntypableReason::NotAQuantifier,
                         "type application exposes to a non-quantifier");
      AlgoResult sub = algo_subtype(ctx, t->type, exposed->a, opts);
      if (sub.fuel_exhausted()) {
        MinTypeResult res;
        res.fuel_exhausted = true;
        res.detail = "fuel exhausted while checking the type argument";
        return res;
      }
      if (!sub.accepted)
        return untypable(UntypableReason::ArgumentMismatch,
                         "type argument is not a subtype of the bound");
      Judgment c = Judgment::typing(ctx, t, open_forall(exposed->b, t->type));
      return typed_result(mk_min(MinRule::TApp, std::move(c), {mf.trace},
                                 exposed, std::move(sub)));
    }
  }
  return untypable(UntypableReason::UnboundVariable, "unreachable");
}

}  // namespace

MinTypeResult minimal_type(const Context& ctx, const TermPtr& t,
                           const AlgoOptions& opts) {
  return min_rec(ctx, t, opts);
}

namespace {

// Widens a typing derivation `d` (of t : from) to t : to via one sub node,
// unless the types already coincide.
DerivPtr widen(DerivPtr d, TypePtr to, DerivPtr sub) {
  if (alpha_eq(d->conclusion.t1, to)) return d;
  if (!sub) throw std::logic_error("widening without a subtyping certificate");
  Judgment c = Judgment::typing(d->conclusion.ctx, d->conclusion.m1, to);
  return mk_deriv(RuleId::TypSub, std::move(c), {std::move(d), std::move(sub)});
}

// Kernel-to-top-style bridging at the same bound: forall_loc with reflexive
// premises.
DerivPtr loc_bridge(const Context& ctx, TypePtr kernel_type) {
  if (kernel_type->tag != TypeTag::Forall ||
      kernel_type->flavor != Flavor::Kernel)
    throw std::logic_error("bridging a non-kernel quantifier");
  TypePtr bound = kernel_type->a;
  TypePtr target = forall(Flavor::TopStyle, kernel_type->name, bound,
                          kernel_type->b);
  DerivPtr pb = mk_deriv(RuleId::SubRefl, Judgment::subtype(ctx, bound, bound));
  std::string x = ctx.fresh_type_var();
  Context inner = ctx.push_type(x, bound);
  TypePtr body = open_forall(kernel_type->b, tvar(x));
  DerivPtr pk = mk_deriv(RuleId::SubRefl, Judgment::subtype(inner, body, body));
  return mk_deriv(RuleId::SubForallLoc,
                  Judgment::subtype(ctx, kernel_type, target), {pb, pk});
}

DerivPtr chain(DerivPtr a, DerivPtr b) {
  if (!a) return b;
  if (!b) return a;
  Judgment c = Judgment::subtype(a->conclusion.ctx, a->conclusion.t1,
                                 b->conclusion.t2);
  return mk_deriv(RuleId::SubTrans, std::move(c), {std::move(a), std::move(b)});
}

}  // namespace

DerivPtr min_to_declarative(SystemId sys, const MinDeriv& m) {
  const Context& ctx = m.conclusion.ctx;
  switch (m.rule) {
    case MinRule::Var:
      return mk_deriv(RuleId::TypVar, m.conclusion);
    case MinRule::Top:
      return mk_deriv(RuleId::TypTop, m.conclusion);
    case MinRule::Lam:
      return mk_deriv(RuleId::TypArrowI, m.conclusion,
                      {min_to_declarative(sys, *m.kids[0])});
    case MinRule::TLam:
      return mk_deriv(RuleId::TypForallI, m.conclusion,
                      {min_to_declarative(sys, *m.kids[0])});
    case MinRule::App: {
      DerivPtr fd = min_to_declarative(sys, *m.kids[0]);
      DerivPtr ad = min_to_declarative(sys, *m.kids[1]);
      fd = widen(fd, m.exposed, exposure_derivation(ctx, fd->conclusion.t1));
      TypePtr dom = m.exposed->a;
      if (!alpha_eq(ad->conclusion.t1, dom))
        ad = widen(ad, dom, algo_to_declarative(sys, m.sub_check.trace));
      return mk_deriv(RuleId::TypArrowE, m.conclusion, {fd, ad});
    }
    case MinRule::TApp: {
      DerivPtr fd = min_to_declarative(sys, *m.kids[0]);
      DerivPtr expo = exposure_derivation(ctx, fd->conclusion.t1);
      TypePtr target = m.exposed;
      DerivPtr bridge;
      if (elim_flavor(sys) == Flavor::TopStyle &&
          m.exposed->flavor == Flavor::Kernel) {
        bridge = loc_bridge(ctx, m.exposed);
        target = bridge->conclusion.t2;
      } else if (m.exposed->flavor != elim_flavor(sys)) {
        throw std::logic_error("exposed quantifier has the wrong decoration");
      }
      fd = widen(fd, target, chain(expo, bridge));
      DerivPtr argd = algo_to_declarative(sys, m.sub_check.trace);
      return mk_deriv(RuleId::TypForallE, m.conclusion, {fd, argd});
    }
  }
  throw std::logic_error("unknown minimal-typing rule");
}

TypecheckResult typecheck(const Context& ctx, const TermPtr& t, TypePtr type,
                          const AlgoOptions& opts) {
  TypecheckResult res;
  MinTypeResult m = minimal_type(ctx, t, opts);
  res.fuel_exhausted = m.fuel_exhausted;
  if (!m.typed) {
    res.reason = m.fuel_exhausted
                     ? m.detail
                     : to_string(m.reason) + ": " + m.detail;
    return res;
  }
  res.minimal = m.type;
  res.min_trace = m.trace;
  res.final_sub = algo_subtype(ctx, m.type, type, opts);
  if (res.final_sub.fuel_exhausted()) {
    res.fuel_exhausted = true;
    res.reason = "fuel exhausted while comparing against the requested type";
    return res;
  }
  if (!res.final_sub.accepted) {
    res.reason = "minimal type is not a subtype of the requested type";
    return res;
  }
  res.accepted = true;
  DerivPtr decl = min_to_declarative(SystemId::Kt, *m.trace);
  if (!alpha_eq(m.type, type)) {
    DerivPtr sub = algo_to_declarative(SystemId::Kt, res.final_sub.trace);
    decl = mk_deriv(RuleId::TypSub, Judgment::typing(ctx, t, type), {decl, sub});
  }
  res.certificate = decl;
  return res;
}

}  // namespace bq
