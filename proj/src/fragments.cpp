#include "bq/fragments.hpp"

#include <cassert>
#include <map>

namespace bq {

namespace {

bool uniform_flavor(TypePtr t, Flavor f) {
  switch (t->tag) {
    case TypeTag::Meet:
      return false;
    case TypeTag::Forall:
      return t->flavor == f && uniform_flavor(t->a, f) && uniform_flavor(t->b, f);
    case TypeTag::Arrow:
      return uniform_flavor(t->a, f) && uniform_flavor(t->b, f);
    default:
      return true;
  }
}

bool minimal_for_ftop(TypePtr t) {
  if (uniform_flavor(t, Flavor::TopStyle)) return true;
  switch (t->tag) {
    case TypeTag::Forall:
      return t->flavor == Flavor::Kernel &&
             uniform_flavor(t->a, Flavor::TopStyle) && minimal_for_ftop(t->b);
    case TypeTag::Arrow:
      return uniform_flavor(t->a, Flavor::TopStyle) && minimal_for_ftop(t->b);
    default:
      return false;
  }
}

}  // namespace

FragmentFlags classify_type(TypePtr t) {
  FragmentFlags f;
  f.is_kernel = uniform_flavor(t, Flavor::Kernel);
  f.is_ftop = uniform_flavor(t, Flavor::TopStyle);
  f.is_minimal_for_ftop = minimal_for_ftop(t);
  return f;
}

namespace {

void merge(FragmentFlags& into, const FragmentFlags& other) {
  into.is_kernel = into.is_kernel && other.is_kernel;
  into.is_ftop = into.is_ftop && other.is_ftop;
  into.is_minimal_for_ftop = into.is_minimal_for_ftop && other.is_minimal_for_ftop;
}

void classify_term_rec(const TermPtr& t, FragmentFlags& acc) {
  switch (t->tag) {
    case TermTag::Lam:
    case TermTag::TLam:
      merge(acc, classify_type(t->type));
      classify_term_rec(t->t1, acc);
      break;
    case TermTag::App:
      classify_term_rec(t->t1, acc);
      classify_term_rec(t->t2, acc);
      break;
    case TermTag::TApp:
      merge(acc, classify_type(t->type));
      classify_term_rec(t->t1, acc);
      break;
    default:
      break;
  }
}

}  // namespace

FragmentFlags classify_term(const TermPtr& t) {
  FragmentFlags acc{true, true, true};
  classify_term_rec(t, acc);
  return acc;
}

FragmentFlags classify_context(const Context& ctx) {
  FragmentFlags acc{true, true, true};
  for (const CtxNode* e : ctx.entries()) merge(acc, classify_type(e->type));
  return acc;
}

// ---------------------------------------------------------------------------
// Beta-normal conservativity elaborator (ftop)
// ---------------------------------------------------------------------------

namespace {

// Declarative ftop subtyping certificate from the algorithm; both sides must
// classify ftop for the trace to stay inside the ftop rules.
DerivPtr ftop_sub(const Context& ctx, TypePtr s, TypePtr t) {
  AlgoResult r = algo_subtype(ctx, s, t);
  if (!r.accepted || r.fuel_exhausted())
    throw std::logic_error("elaboration lost a subtyping the typechecker established");
  return algo_to_declarative(SystemId::Ftop, r.trace);
}

DerivPtr widen_ftop(const Context& ctx, DerivPtr d, TypePtr to) {
  if (alpha_eq(d->conclusion.t1, to)) return d;
  Judgment c = Judgment::typing(ctx, d->conclusion.m1, to);
  return mk_deriv(RuleId::TypSub, std::move(c),
                  {d, ftop_sub(ctx, d->conclusion.t1, to)});
}

DerivPtr elab_at_min(const Context& ctx, const TermPtr& t, const MinTypeResult& m);

// Elaborates Theta |- t : type in ftop. `t` is beta-normal, every piece
// classifies ftop, and the kt typechecker accepts the judgment; those are
// the elaborator's preconditions and recursion keeps them invariant.
DerivPtr elab(const Context& ctx, const TermPtr& t, TypePtr type) {
  if (is_top(type)) {
    switch (t->tag) {
      case TermTag::TopC:
        return mk_deriv(RuleId::TypTop, Judgment::typing(ctx, t, top_type()));
      case TermTag::Lam: {
        std::string binder = t->name;
        TermPtr body = t->t1;
        if (ctx.binds(binder)) {
          std::string nn = fresh_name(binder, ctx.dom());
          body = subst_term(body, binder, term_var(nn));
          binder = nn;
        }
        Context inner = ctx.push_term(binder, t->type);
        DerivPtr bd = elab(inner, body, top_type());
        TypePtr arr = arrow(t->type, top_type());
        DerivPtr li = mk_deriv(RuleId::TypArrowI, Judgment::typing(ctx, t, arr), {bd});
        return widen_ftop(ctx, li, top_type());
      }
      case TermTag::TLam: {
        std::string binder = t->name;
        TermPtr body = t->t1;
        if (ctx.binds(binder)) {
          std::string nn = fresh_name(binder, ctx.dom());
          body = subst_type_in_term(body, binder, tvar(nn));
          binder = nn;
        }
        Context inner = ctx.push_type(binder, t->type);
        DerivPtr bd = elab(inner, body, top_type());
        TypePtr q = forall(Flavor::TopStyle, binder, t->type, top_type());
        DerivPtr fi = mk_deriv(RuleId::TypForallI, Judgment::typing(ctx, t, q), {bd});
        return widen_ftop(ctx, fi, top_type());
      }
      default: {
        // variables, applications and type applications synthesize an ftop
        // minimal type; subsume it to Top
        MinTypeResult m = minimal_type(ctx, t);
        if (!m.typed) throw std::logic_error("elaboration lost the minimal type");
        DerivPtr d = elab_at_min(ctx, t, m);
        return widen_ftop(ctx, d, top_type());
      }
    }
  }

  switch (t->tag) {
    case TermTag::Var: {
      auto ty = ctx.term_type_of(t->name);
      if (!ty) throw std::logic_error("elaboration met an unbound variable");
      DerivPtr v = mk_deriv(RuleId::TypVar, Judgment::typing(ctx, t, *ty));
      return widen_ftop(ctx, v, type);
    }
    case TermTag::App:
    case TermTag::TApp: {
      MinTypeResult m = minimal_type(ctx, t);
      if (!m.typed) throw std::logic_error("elaboration lost the minimal type");
      DerivPtr d = elab_at_min(ctx, t, m);
      return widen_ftop(ctx, d, type);
    }
    case TermTag::Lam: {
      // type has the shape R' -> T' with R' <: annotation
      if (type->tag != TypeTag::Arrow)
        throw std::logic_error("elaboration target for fun is not an arrow");
      std::string binder = t->name;
      TermPtr body = t->t1;
      if (ctx.binds(binder)) {
        std::string nn = fresh_name(binder, ctx.dom());
        body = subst_term(body, binder, term_var(nn));
        binder = nn;
      }
      Context inner = ctx.push_term(binder, t->type);
      DerivPtr bd = elab(inner, body, type->b);
      TypePtr arr = arrow(t->type, type->b);
      DerivPtr li = mk_deriv(RuleId::TypArrowI, Judgment::typing(ctx, t, arr), {bd});
      return widen_ftop(ctx, li, type);
    }
    case TermTag::TLam: {
      // type has the shape forall_t (X <: R') . T' with R' <: bound; the body
      // is elaborated at T' under the term's own bound so that the inner
      // subsumptions may still use it
      if (type->tag != TypeTag::Forall || type->flavor != Flavor::TopStyle)
        throw std::logic_error("elaboration target for tfun is not top-style");
      std::string binder = t->name;
      TermPtr body = t->t1;
      if (ctx.binds(binder)) {
        std::string nn = fresh_name(binder, ctx.dom());
        body = subst_type_in_term(body, binder, tvar(nn));
        binder = nn;
      }
      Context inner = ctx.push_type(binder, t->type);
      TypePtr body_target = open_forall(type->b, tvar(binder));
      DerivPtr bd = elab(inner, body, body_target);
      TypePtr q = forall(Flavor::TopStyle, binder, t->type,
                         close_type(body_target, binder));
      DerivPtr fi = mk_deriv(RuleId::TypForallI, Judgment::typing(ctx, t, q), {bd});
      return widen_ftop(ctx, fi, type);
    }
    case TermTag::TopC:
      // top's only type besides Top would be a supertype of Top, i.e. Top
      // itself, which the branch above already handled
      break;
  }
  throw std::logic_error("elaboration met an impossible term/type pair");
}

// Synthesizing branch for non-abstraction beta-normal terms: their minimal
// type is already an ftop type, and every recursion target stays ftop.
DerivPtr elab_at_min(const Context& ctx, const TermPtr& t, const MinTypeResult& m) {
  switch (t->tag) {
    case TermTag::Var:
      return mk_deriv(RuleId::TypVar, Judgment::typing(ctx, t, m.type));
    case TermTag::App: {
      const MinDeriv& node = *m.trace;
      TypePtr exposed = node.exposed;  // R -> S, ftop
      DerivPtr fd = elab(ctx, t->t1, exposed);
      DerivPtr ad = elab(ctx, t->t2, exposed->a);
      return mk_deriv(RuleId::TypArrowE, Judgment::typing(ctx, t, exposed->b),
                      {fd, ad});
    }
    case TermTag::TApp: {
      const MinDeriv& node = *m.trace;
      TypePtr exposed = node.exposed;  // forall_t (X <: R') . B
      if (exposed->flavor != Flavor::TopStyle)
        throw std::logic_error("a beta-normal non-abstraction exposed a kernel type");
      DerivPtr fd = elab(ctx, t->t1, exposed);
      DerivPtr argd = ftop_sub(ctx, t->type, exposed->a);
      return mk_deriv(RuleId::TypForallE,
                      Judgment::typing(ctx, t, open_forall(exposed->b, t->type)),
                      {fd, argd});
    }
    default:
      throw std::logic_error("synthesis branch reached an abstraction");
  }
}

}  // namespace

DerivPtr elaborate_ftop_typing(const Context& ctx, const TermPtr& t, TypePtr type) {
  FragmentFlags fc = classify_context(ctx);
  if (!fc.is_ftop) throw PreconditionViolated("context is not an ftop context");
  if (!classify_term(t).is_ftop) throw PreconditionViolated("term is not an ftop term");
  if (!classify_type(type).is_ftop)
    throw PreconditionViolated("type is not an ftop type");
  if (!is_beta_normal(t)) throw PreconditionViolated("term is not beta-normal");
  WfCheck w = wf_term(ctx, t, SystemId::Kt);
  if (!w.ok) throw PreconditionViolated("ill-formed term: " + w.detail);
  WfCheck wt = wf_type(ctx, type, SystemId::Kt);
  if (!wt.ok) throw PreconditionViolated("ill-formed type: " + wt.detail);
  TypecheckResult tc = typecheck(ctx, t, type);
  if (!tc.accepted)
    throw PreconditionViolated("typing not accepted: " + tc.reason);
  return elab(ctx, t, type);
}

DerivPtr elaborate_kernel(const Context& ctx, const TermPtr& t, TypePtr type) {
  if (!classify_context(ctx).is_kernel)
    throw PreconditionViolated("context is not a kernel context");
  if (!classify_term(t).is_kernel)
    throw PreconditionViolated("term is not a kernel term");
  if (!classify_type(type).is_kernel)
    throw PreconditionViolated("type is not a kernel type");
  WfCheck w = wf_term(ctx, t, SystemId::Kt);
  if (!w.ok) throw PreconditionViolated("ill-formed term: " + w.detail);
  WfCheck wt = wf_type(ctx, type, SystemId::Kt);
  if (!wt.ok) throw PreconditionViolated("ill-formed type: " + wt.detail);
  TypecheckResult tc = typecheck(ctx, t, type);
  if (!tc.accepted)
    throw PreconditionViolated("typing not accepted: " + tc.reason);
  DerivPtr decl = min_to_declarative(SystemId::Kernel, *tc.min_trace);
  if (!alpha_eq(tc.minimal, type)) {
    DerivPtr sub = algo_to_declarative(SystemId::Kernel, tc.final_sub.trace);
    decl = mk_deriv(RuleId::TypSub, Judgment::typing(ctx, t, type), {decl, sub});
  }
  return decl;
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration
// ---------------------------------------------------------------------------

std::optional<FragmentFilter> fragment_from_string(std::string_view s) {
  if (s == "kernel") return FragmentFilter::Kernel;
  if (s == "ftop") return FragmentFilter::Ftop;
  if (s == "minimal-ftop") return FragmentFilter::MinimalForFtop;
  return std::nullopt;
}

std::string to_string(FragmentFilter f) {
  switch (f) {
    case FragmentFilter::Kernel: return "kernel";
    case FragmentFilter::Ftop: return "ftop";
    case FragmentFilter::MinimalForFtop: return "minimal-ftop";
  }
  return "?";
}

namespace {

struct Enumerator {
  std::vector<std::string> ctx_vars;  // outermost-first
  std::vector<Flavor> flavors;
  bool with_meets;
  // memo[(size, binder depth)] -> canonical trees
  std::map<std::pair<int, int>, std::vector<TypePtr>> memo;

  const std::vector<TypePtr>& gen(int size, int depth) {
    auto key = std::make_pair(size, depth);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<TypePtr> out;
    if (size == 1) {
      out.push_back(top_type());
      for (const auto& v : ctx_vars) out.push_back(tvar(v));
      for (int k = 0; k < depth; ++k) out.push_back(bvar(k));
    } else if (size >= 3) {
      for (int i = 1; i <= size - 2; ++i) {
        int j = size - 1 - i;
        for (TypePtr a : gen(i, depth))
          for (TypePtr b : gen(j, depth)) out.push_back(arrow(a, b));
      }
      for (Flavor f : flavors) {
        for (int i = 1; i <= size - 2; ++i) {
          int j = size - 1 - i;
          for (TypePtr bound : gen(i, depth))
            for (TypePtr body : gen(j, depth + 1))
              out.push_back(forall(f, "", bound, body));
        }
      }
      if (with_meets) {
        for (int i = 1; i <= size - 2; ++i) {
          int j = size - 1 - i;
          for (TypePtr a : gen(i, depth))
            for (TypePtr b : gen(j, depth)) out.push_back(meet(a, b));
        }
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  }
};

}  // namespace

std::vector<TypePtr> enumerate_types(const Context& ctx, int max_size,
                                     SystemId sys,
                                     std::optional<FragmentFilter> filter) {
  assert(max_size >= 1);
  Enumerator e;
  for (const CtxNode* n : ctx.entries())
    if (n->kind == BindKind::TypeBound) e.ctx_vars.push_back(n->name);
  switch (sys) {
    case SystemId::Kt:
      e.flavors = {Flavor::Kernel, Flavor::TopStyle};
      break;
    case SystemId::Kernel:
      e.flavors = {Flavor::Kernel};
      break;
    case SystemId::Ftop:
      e.flavors = {Flavor::TopStyle};
      break;
    case SystemId::FsubOrig:
    case SystemId::Fwedge:
      e.flavors = {Flavor::Plain};
      break;
  }
  if (filter == FragmentFilter::Kernel) e.flavors = {Flavor::Kernel};
  if (filter == FragmentFilter::Ftop) e.flavors = {Flavor::TopStyle};
  e.with_meets = sys == SystemId::Fwedge;

  std::vector<TypePtr> out;
  for (int n = 1; n <= max_size; ++n) {
    for (TypePtr t : e.gen(n, 0)) {
      if (sys == SystemId::Fwedge && t->tag == TypeTag::Forall && !is_top(t->a))
        continue;  // handled by the filter below as well; cheap cut
      if (!constructs_ok(sys, t)) continue;
      if (filter) {
        FragmentFlags f = classify_type(t);
        bool keep = filter == FragmentFilter::Kernel ? f.is_kernel
                    : filter == FragmentFilter::Ftop ? f.is_ftop
                                                     : f.is_minimal_for_ftop;
        if (!keep) continue;
      }
      out.push_back(t);
    }
  }
  return out;
}

}  // namespace bq
