#include "bq/judgments.hpp"

#include <cassert>

namespace bq {

Judgment Judgment::wf(Context c, TypePtr t) {
  Judgment j;
  j.kind = JudgKind::WfType;
  j.ctx = c;
  j.t1 = t;
  return j;
}

Judgment Judgment::subtype(Context c, TypePtr s, TypePtr t) {
  Judgment j;
  j.kind = JudgKind::Subtype;
  j.ctx = c;
  j.t1 = s;
  j.t2 = t;
  return j;
}

Judgment Judgment::typing(Context c, TermPtr m, TypePtr t) {
  Judgment j;
  j.kind = JudgKind::Typing;
  j.ctx = c;
  j.t1 = t;
  j.m1 = std::move(m);
  return j;
}

Judgment Judgment::equality(Context c, TermPtr l, TermPtr r, TypePtr t) {
  Judgment j;
  j.kind = JudgKind::Equality;
  j.ctx = c;
  j.t1 = t;
  j.m1 = std::move(l);
  j.m2 = std::move(r);
  return j;
}

bool judgment_alpha_eq(const Judgment& a, const Judgment& b) {
  if (a.kind != b.kind || !ctx_alpha_eq(a.ctx, b.ctx)) return false;
  switch (a.kind) {
    case JudgKind::WfType:
      return alpha_eq(a.t1, b.t1);
    case JudgKind::Subtype:
      return alpha_eq(a.t1, b.t1) && alpha_eq(a.t2, b.t2);
    case JudgKind::Typing:
      return alpha_eq(a.t1, b.t1) && term_alpha_eq(a.m1, b.m1);
    case JudgKind::Equality:
      return alpha_eq(a.t1, b.t1) && term_alpha_eq(a.m1, b.m1) &&
             term_alpha_eq(a.m2, b.m2);
  }
  return false;
}

std::string to_string(RuleId r) {
  switch (r) {
    case RuleId::SubVar: return "var";
    case RuleId::SubTop: return "top";
    case RuleId::SubRefl: return "refl";
    case RuleId::SubTrans: return "trans";
    case RuleId::SubArrow: return "arrow";
    case RuleId::SubForallFun: return "forall_fun";
    case RuleId::SubForallLoc: return "forall_loc";
    case RuleId::SubForallTop: return "forall_top";
    case RuleId::SubForallOrig: return "forall_orig";
    case RuleId::SubMeetL: return "meet_l";
    case RuleId::SubMeetR: return "meet_r";
    case RuleId::SubMeetIntro: return "meet_intro";
    case RuleId::TypTop: return "t_top";
    case RuleId::TypVar: return "t_var";
    case RuleId::TypSub: return "t_sub";
    case RuleId::TypArrowI: return "t_arrow_i";
    case RuleId::TypArrowE: return "t_arrow_e";
    case RuleId::TypForallI: return "t_forall_i";
    case RuleId::TypForallE: return "t_forall_e";
    case RuleId::EqTop: return "e_top";
    case RuleId::EqRefl: return "e_refl";
    case RuleId::EqTrans: return "e_trans";
    case RuleId::EqSym: return "e_sym";
    case RuleId::EqBeta1: return "e_beta1";
    case RuleId::EqEta1: return "e_eta1";
    case RuleId::EqBeta2: return "e_beta2";
    case RuleId::EqEta2: return "e_eta2";
    case RuleId::EqAbs1: return "e_abs1";
    case RuleId::EqAbs2: return "e_abs2";
    case RuleId::EqApp1: return "e_app1";
    case RuleId::EqApp2: return "e_app2";
  }
  return "?";
}

std::optional<RuleId> rule_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(RuleId::EqApp2); ++i) {
    RuleId r = static_cast<RuleId>(i);
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

JudgKind rule_kind(RuleId r) {
  if (r <= RuleId::SubMeetIntro) return JudgKind::Subtype;
  if (r <= RuleId::TypForallE) return JudgKind::Typing;
  return JudgKind::Equality;
}

bool subtype_rule_allowed(SystemId s, RuleId r) {
  switch (r) {
    case RuleId::SubVar:
    case RuleId::SubTop:
    case RuleId::SubRefl:
    case RuleId::SubTrans:
    case RuleId::SubArrow:
      return true;
    case RuleId::SubForallFun:
      return s == SystemId::Kt || s == SystemId::Kernel;
    case RuleId::SubForallLoc:
      return s == SystemId::Kt;
    case RuleId::SubForallTop:
      return s == SystemId::Kt || s == SystemId::Ftop;
    case RuleId::SubForallOrig:
      return s == SystemId::FsubOrig || s == SystemId::Fwedge;
    case RuleId::SubMeetL:
    case RuleId::SubMeetR:
    case RuleId::SubMeetIntro:
      return s == SystemId::Fwedge;
    default:
      return false;
  }
}

DerivPtr mk_deriv(RuleId rule, Judgment conclusion, std::vector<DerivPtr> premises) {
  auto d = std::make_shared<Derivation>();
  d->rule = rule;
  d->conclusion = std::move(conclusion);
  d->premises = std::move(premises);
  return d;
}

uint32_t deriv_height(const Derivation& d) {
  uint32_t h = 0;
  for (const auto& p : d.premises) h = std::max(h, deriv_height(*p));
  return h + 1;
}

uint32_t deriv_nodes(const Derivation& d) {
  uint32_t n = 1;
  for (const auto& p : d.premises) n += deriv_nodes(*p);
  return n;
}

// ---------------------------------------------------------------------------
// Well-formedness
// ---------------------------------------------------------------------------

namespace {

WfCheck wf_type_scoped(const Context& ctx, TypePtr t, SystemId sys) {
  switch (t->tag) {
    case TypeTag::Top:
      return WfCheck::good();
    case TypeTag::FVar:
      if (!ctx.bound_of(t->name))
        return WfCheck::bad(WfError::UnboundVariable, t->name);
      return WfCheck::good();
    case TypeTag::BVar:
      return WfCheck::bad(WfError::UnboundVariable,
                          "dangling bound variable #" + std::to_string(t->index));
    case TypeTag::Arrow: {
      WfCheck a = wf_type_scoped(ctx, t->a, sys);
      if (!a.ok) return a;
      return wf_type_scoped(ctx, t->b, sys);
    }
    case TypeTag::Meet: {
      if (!meets_allowed(sys))
        return WfCheck::bad(WfError::ForbiddenConstruct,
                            "meet type outside " + to_string(SystemId::Fwedge));
      WfCheck a = wf_type_scoped(ctx, t->a, sys);
      if (!a.ok) return a;
      return wf_type_scoped(ctx, t->b, sys);
    }
    case TypeTag::Forall: {
      if (!flavor_allowed(sys, t->flavor))
        return WfCheck::bad(WfError::ForbiddenConstruct,
                            "quantifier flavor not allowed in " + to_string(sys));
      if (!bounded_forall_allowed(sys) && !is_top(t->a))
        return WfCheck::bad(WfError::ForbiddenConstruct,
                            "bounded quantifier in " + to_string(sys));
      WfCheck a = wf_type_scoped(ctx, t->a, sys);
      if (!a.ok) return a;
      Context inner = ctx.push_type(ctx.fresh_type_var(), t->a);
      return wf_type_scoped(inner, open_forall(t->b, tvar(inner.last()->name)), sys);
    }
  }
  return WfCheck::good();
}

}  // namespace

WfCheck wf_context(const Context& ctx, SystemId sys) {
  for (const CtxNode* e : ctx.entries()) {
    Context prefix(e->parent);
    if (prefix.binds(e->name))
      return WfCheck::bad(WfError::DuplicateBinding, e->name);
    WfCheck w = wf_type_scoped(prefix, e->type, sys);
    if (!w.ok) return w;
  }
  return WfCheck::good();
}

WfCheck wf_type(const Context& ctx, TypePtr t, SystemId sys) {
  WfCheck c = wf_context(ctx, sys);
  if (!c.ok) return c;
  return wf_type_scoped(ctx, t, sys);
}

namespace {

WfCheck wf_term_scoped(const Context& ctx, const TermPtr& t, SystemId sys) {
  switch (t->tag) {
    case TermTag::TopC:
      return WfCheck::good();
    case TermTag::Var:
      if (!ctx.term_type_of(t->name))
        return WfCheck::bad(WfError::UnboundVariable, t->name);
      return WfCheck::good();
    case TermTag::Lam: {
      WfCheck a = wf_type_scoped(ctx, t->type, sys);
      if (!a.ok) return a;
      std::string binder = t->name;
      TermPtr body = t->t1;
      if (ctx.binds(binder)) {
        std::string nn = fresh_name(binder, ctx.dom());
        // renaming is safe: nn is fresh for the context, which covers all
        // free variables of the body
        body = subst_term(body, binder, term_var(nn));
        binder = nn;
      }
      return wf_term_scoped(ctx.push_term(binder, t->type), body, sys);
    }
    case TermTag::TLam: {
      WfCheck a = wf_type_scoped(ctx, t->type, sys);
      if (!a.ok) return a;
      std::string binder = t->name;
      TermPtr body = t->t1;
      if (ctx.binds(binder)) {
        std::string nn = fresh_name(binder, ctx.dom());
        body = subst_type_in_term(body, binder, tvar(nn));
        binder = nn;
      }
      return wf_term_scoped(ctx.push_type(binder, t->type), body, sys);
    }
    case TermTag::App: {
      WfCheck a = wf_term_scoped(ctx, t->t1, sys);
      if (!a.ok) return a;
      return wf_term_scoped(ctx, t->t2, sys);
    }
    case TermTag::TApp: {
      WfCheck a = wf_term_scoped(ctx, t->t1, sys);
      if (!a.ok) return a;
      return wf_type_scoped(ctx, t->type, sys);
    }
  }
  return WfCheck::good();
}

}  // namespace

WfCheck wf_term(const Context& ctx, const TermPtr& t, SystemId sys) {
  WfCheck c = wf_context(ctx, sys);
  if (!c.ok) return c;
  return wf_term_scoped(ctx, t, sys);
}

// ---------------------------------------------------------------------------
// Certificate checking
// ---------------------------------------------------------------------------

namespace {

struct Checker {
  SystemId sys;

  Verdict fail(const std::string& path, std::string reason) const {
    return Verdict::reject(path, std::move(reason));
  }

  Verdict check(const Derivation& d, const std::string& path) const {
    switch (d.conclusion.kind) {
      case JudgKind::Subtype: return check_sub(d, path);
      case JudgKind::Typing: return check_typ(d, path);
      case JudgKind::Equality: return check_eq(d, path);
      default: return fail(path, "unsupported judgment kind");
    }
  }

  // --- shared small checks ----------------------------------------------

  Verdict premise_count(const Derivation& d, size_t n, const std::string& path) const {
    if (d.premises.size() != n)
      return fail(path, "rule " + bq::to_string(d.rule) + " expects " +
                            std::to_string(n) + " premises, got " +
                            std::to_string(d.premises.size()));
    return Verdict::accept();
  }

  Verdict want_kind(const Judgment& j, JudgKind k, const std::string& path,
                    const char* what) const {
    if (j.kind != k) return fail(path, std::string(what) + ": wrong judgment kind");
    return Verdict::accept();
  }

  Verdict same_ctx(const Judgment& p, const Judgment& c, const std::string& path) const {
    if (!ctx_alpha_eq(p.ctx, c.ctx))
      return fail(path, "premise context differs from conclusion context");
    return Verdict::accept();
  }

  // Premise context must be the conclusion context plus one fresh binding of
  // the given kind; returns the binder entry or a failure.
  Verdict extension(const Judgment& p, const Judgment& c, BindKind kind,
                    TypePtr expected_bound, const std::string& path,
                    const CtxNode** out) const {
    const CtxNode* e = p.ctx.last();
    if (!e || e->kind != kind)
      return fail(path, "premise context does not end in the expected binding");
    if (!ctx_alpha_eq(p.ctx.pop(), c.ctx))
      return fail(path, "premise context does not extend the conclusion context");
    if (expected_bound && !alpha_eq(e->type, expected_bound))
      return fail(path, "premise binding carries the wrong type");
    if (c.ctx.binds(e->name))
      return fail(path, "binder " + e->name + " already bound in the context");
    *out = e;
    return Verdict::accept();
  }

  Verdict wf_ok(const WfCheck& w, const std::string& path) const {
    if (!w.ok) return fail(path, "ill-formed: " + w.detail);
    return Verdict::accept();
  }

  Verdict constructs(const Judgment& j, const std::string& path) const {
    bool ok = true;
    if (j.t1) ok = ok && constructs_ok(sys, j.t1);
    if (j.t2) ok = ok && constructs_ok(sys, j.t2);
    if (j.m1) ok = ok && constructs_ok(sys, j.m1);
    if (j.m2) ok = ok && constructs_ok(sys, j.m2);
    for (const CtxNode* e : j.ctx.entries()) ok = ok && constructs_ok(sys, e->type);
    if (!ok) return fail(path, "construct not expressible in " + to_string(sys));
    return Verdict::accept();
  }

  // --- subtyping ----------------------------------------------------------

  Verdict check_sub(const Derivation& d, const std::string& path) const {
    const Judgment& c = d.conclusion;
    if (rule_kind(d.rule) != JudgKind::Subtype)
      return fail(path, "rule " + bq::to_string(d.rule) + " is not a subtyping rule");
    if (!subtype_rule_allowed(sys, d.rule))
      return fail(path, "rule " + bq::to_string(d.rule) + " not part of " + to_string(sys));
    if (auto v = constructs(c, path); !v.ok) return v;

    switch (d.rule) {
      case RuleId::SubVar: {
        if (auto v = premise_count(d, 0, path); !v.ok) return v;
        if (c.t1->tag != TypeTag::FVar) return fail(path, "var: lhs is not a variable");
        auto bound = c.ctx.bound_of(c.t1->name);
        if (!bound) return fail(path, "var: unbound " + c.t1->name);
        if (!alpha_eq(*bound, c.t2))
          return fail(path, "var: rhs is not the declared bound");
        return wf_ok(wf_context(c.ctx, sys), path);
      }
      case RuleId::SubTop: {
        if (auto v = premise_count(d, 0, path); !v.ok) return v;
        if (!is_top(c.t2)) return fail(path, "top: rhs is not Top");
        return wf_ok(wf_type(c.ctx, c.t1, sys), path);
      }
      case RuleId::SubRefl: {
        if (auto v = premise_count(d, 0, path); !v.ok) return v;
        if (!alpha_eq(c.t1, c.t2)) return fail(path, "refl: sides differ");
        return wf_ok(wf_type(c.ctx, c.t1, sys), path);
      }
      case RuleId::SubTrans: {
        if (auto v = premise_count(d, 2, path); !v.ok) return v;
        const Judgment& p0 = d.premises[0]->conclusion;
        const Judgment& p1 = d.premises[1]->conclusion;
        if (auto v = want_kind(p0, JudgKind::Subtype, path, "trans"); !v.ok) return v;
        if (auto v = want_kind(p1, JudgKind::Subtype, path, "trans"); !v.ok) return v;
        if (auto v = same_ctx(p0, c, path); !v.ok) return v;
        if (auto v = same_ctx(p1, c, path); !v.ok) return v;
        if (!alpha_eq(p0.t1, c.t1)) return fail(path, "trans: first premise lhs mismatch");
        if (!alpha_eq(p0.t2, p1.t1)) return fail(path, "trans: cut formula mismatch");
        if (!alpha_eq(p1.t2, c.t2)) return fail(path, "trans: second premise rhs mismatch");
        return recurse(d, path);
      }
      case RuleId::SubArrow: {
        if (auto v = premise_count(d, 2, path); !v.ok) return v;
        if (c.t1->tag != TypeTag::Arrow || c.t2->tag != TypeTag::Arrow)
          return fail(path, "arrow: sides are not arrow types");
        const Judgment& p0 = d.premises[0]->conclusion;
        const Judgment& p1 = d.premises[1]->conclusion;
        if (auto v = want_kind(p0, JudgKind::Subtype, path, "arrow"); !v.ok) return v;
        if (auto v = want_kind(p1, JudgKind::Subtype, path, "arrow"); !v.ok) return v;
        if (auto v = same_ctx(p0, c, path); !v.ok) return v;
        if (auto v = same_ctx(p1, c, path); !v.ok) return v;
        if (!alpha_eq(p0.t1, c.t2->a) || !alpha_eq(p0.t2, c.t1->a))
          return fail(path, "arrow: contravariant premise mismatch");
        if (!alpha_eq(p1.t1, c.t1->b) || !alpha_eq(p1.t2, c.t2->b))
          return fail(path, "arrow: covariant premise mismatch");
        return recurse(d, path);
      }
      case RuleId::SubForallFun: {
        if (auto v = premise_count(d, 1, path); !v.ok) return v;
        if (c.t1->tag != TypeTag::Forall || c.t2->tag != TypeTag::Forall ||
            c.t1->flavor != Flavor::Kernel || c.t2->flavor != Flavor::Kernel)
          return fail(path, "forall_fun: needs kernel quantifiers on both sides");
        if (!alpha_eq(c.t1->a, c.t2->a))
          return fail(path, "forall_fun: bounds differ");
        const Judgment& p = d.premises[0]->conclusion;
        if (auto v = want_kind(p, JudgKind::Subtype, path, "forall_fun"); !v.ok) return v;
        const CtxNode* e = nullptr;
        if (auto v = extension(p, c, BindKind::TypeBound, c.t1->a, path, &e); !v.ok) return v;
        TypePtr x = tvar(e->name);
        if (!alpha_eq(p.t1, open_forall(c.t1->b, x)) ||
            !alpha_eq(p.t2, open_forall(c.t2->b, x)))
          return fail(path, "forall_fun: body premise mismatch");
        return recurse(d, path);
      }
      case RuleId::SubForallLoc:
      case RuleId::SubForallTop:
      case RuleId::SubForallOrig: {
        Flavor lf, rf;
        if (d.rule == RuleId::SubForallLoc) {
          lf = Flavor::Kernel;
          rf = Flavor::TopStyle;
        } else if (d.rule == RuleId::SubForallTop) {
          lf = rf = Flavor::TopStyle;
        } else {
          lf = rf = Flavor::Plain;
        }
        if (auto v = premise_count(d, 2, path); !v.ok) return v;
        if (c.t1->tag != TypeTag::Forall || c.t2->tag != TypeTag::Forall ||
            c.t1->flavor != lf || c.t2->flavor != rf)
          return fail(path, bq::to_string(d.rule) + ": quantifier shapes mismatch");
        const Judgment& pb = d.premises[0]->conclusion;  // bounds, contravariant
        const Judgment& pk = d.premises[1]->conclusion;  // bodies
        if (auto v = want_kind(pb, JudgKind::Subtype, path, "bound premise"); !v.ok) return v;
        if (auto v = want_kind(pk, JudgKind::Subtype, path, "body premise"); !v.ok) return v;
        if (auto v = same_ctx(pb, c, path); !v.ok) return v;
        if (!alpha_eq(pb.t1, c.t2->a) || !alpha_eq(pb.t2, c.t1->a))
          return fail(path, bq::to_string(d.rule) + ": bound premise mismatch");
        // body context: Loc rebinds at the left bound, Top at Top, Orig at the
        // right bound
        TypePtr body_bound = d.rule == RuleId::SubForallLoc ? c.t1->a
                             : d.rule == RuleId::SubForallTop ? top_type()
                                                              : c.t2->a;
        const CtxNode* e = nullptr;
        if (auto v = extension(pk, c, BindKind::TypeBound, body_bound, path, &e); !v.ok) return v;
        TypePtr x = tvar(e->name);
        if (!alpha_eq(pk.t1, open_forall(c.t1->b, x)) ||
            !alpha_eq(pk.t2, open_forall(c.t2->b, x)))
          return fail(path, bq::to_string(d.rule) + ": body premise mismatch");
        return recurse(d, path);
      }
      case RuleId::SubMeetL:
      case RuleId::SubMeetR: {
        if (auto v = premise_count(d, 0, path); !v.ok) return v;
        if (c.t1->tag != TypeTag::Meet) return fail(path, "meet axiom: lhs is not a meet");
        TypePtr side = d.rule == RuleId::SubMeetL ? c.t1->a : c.t1->b;
        if (!alpha_eq(c.t2, side))
          return fail(path, "meet axiom: rhs is not the projected component");
        return wf_ok(wf_type(c.ctx, c.t1, sys), path);
      }
      case RuleId::SubMeetIntro: {
        if (auto v = premise_count(d, 2, path); !v.ok) return v;
        if (c.t2->tag != TypeTag::Meet) return fail(path, "meet_intro: rhs is not a meet");
        const Judgment& p0 = d.premises[0]->conclusion;
        const Judgment& p1 = d.premises[1]->conclusion;
        if (auto v = want_kind(p0, JudgKind::Subtype, path, "meet_intro"); !v.ok) return v;
        if (auto v = want_kind(p1, JudgKind::Subtype, path, "meet_intro"); !v.ok) return v;
        if (auto v = same_ctx(p0, c, path); !v.ok) return v;
        if (auto v = same_ctx(p1, c, path); !v.ok) return v;
        if (!alpha_eq(p0.t1, c.t1) || !alpha_eq(p0.t2, c.t2->a) ||
            !alpha_eq(p1.t1, c.t1) || !alpha_eq(p1.t2, c.t2->b))
          return fail(path, "meet_intro: premise mismatch");
        return recurse(d, path);
      }
      default:
        return fail(path, "unreachable subtyping rule");
    }
  }

  // --- typing --------------------------------------------------------------

  Verdict check_typ(const Derivation& d, const std::string& path) const {
    const Judgment& c = d.conclusion;
    if (rule_kind(d.rule) != JudgKind::Typing)
      return fail(path, "rule " + bq::to_string(d.rule) + " is not a typing rule");
    if (auto v = constructs(c, path); !v.ok) return v;

    switch (d.rule) {
      case RuleId::TypTop: {
        if (auto v = premise_count(d, 0, path); !v.ok) return v;
        if (c.m1->tag != TermTag::TopC || !is_top(c.t1))
          return fail(path, "t_top: conclusion is not top : Top");
        return wf_ok(wf_context(c.ctx, sys), path);
      }
      case RuleId::TypVar: {
        if (auto v = premise_count(d, 0, path); !v.ok) return v;
        if (c.m1->tag != TermTag::Var) return fail(path, "t_var: subject is not a variable");
        auto ty = c.ctx.term_type_of(c.m1->name);
        if (!ty) return fail(path, "t_var: unbound " + c.m1->name);
        if (!alpha_eq(*ty, c.t1)) return fail(path, "t_var: type is not the declared one");
        return wf_ok(wf_context(c.ctx, sys), path);
      }
      case RuleId::TypSub: {
        if (auto v = premise_count(d, 2, path); !v.ok) return v;
        const Judgment& pt = d.premises[0]->conclusion;
        const Judgment& ps = d.premises[1]->conclusion;
        if (auto v = want_kind(pt, JudgKind::Typing, path, "t_sub"); !v.ok) return v;
        if (auto v = want_kind(ps, JudgKind::Subtype, path, "t_sub"); !v.ok) return v;
        if (auto v = same_ctx(pt, c, path); !v.ok) return v;
        if (auto v = same_ctx(ps, c, path); !v.ok) return v;
        if (!term_alpha_eq(pt.m1, c.m1)) return fail(path, "t_sub: subject mismatch");
        if (!alpha_eq(ps.t1, pt.t1) || !alpha_eq(ps.t2, c.t1))
          return fail(path, "t_sub: subtyping premise mismatch");
        return recurse(d, path);
      }
      case RuleId::TypArrowI: {
        if (auto v = premise_count(d, 1, path); !v.ok) return v;
        if (c.m1->tag != TermTag::Lam) return fail(path, "t_arrow_i: subject is not fun");
        if (c.t1->tag != TypeTag::Arrow || !alpha_eq(c.t1->a, c.m1->type))
          return fail(path, "t_arrow_i: type is not annotation -> codomain");
        const Judgment& p = d.premises[0]->conclusion;
        if (auto v = want_kind(p, JudgKind::Typing, path, "t_arrow_i"); !v.ok) return v;
        const CtxNode* e = nullptr;
        if (auto v = extension(p, c, BindKind::TermBinding, c.m1->type, path, &e); !v.ok) return v;
        TermPtr expected = c.m1->name == e->name
                               ? c.m1->t1
                               : subst_term(c.m1->t1, c.m1->name, term_var(e->name));
        if (!term_alpha_eq(p.m1, expected))
          return fail(path, "t_arrow_i: body premise mismatch");
        if (!alpha_eq(p.t1, c.t1->b)) return fail(path, "t_arrow_i: codomain mismatch");
        return recurse(d, path);
      }
      case RuleId::TypArrowE: {
        if (auto v = premise_count(d, 2, path); !v.ok) return v;
        if (c.m1->tag != TermTag::App) return fail(path, "t_arrow_e: subject is not an application");
        const Judgment& pf = d.premises[0]->conclusion;
        const Judgment& pa = d.premises[1]->conclusion;
        if (auto v = want_kind(pf, JudgKind::Typing, path, "t_arrow_e"); !v.ok) return v;
        if (auto v = want_kind(pa, JudgKind::Typing, path, "t_arrow_e"); !v.ok) return v;
        if (auto v = same_ctx(pf, c, path); !v.ok) return v;
        if (auto v = same_ctx(pa, c, path); !v.ok) return v;
        if (!term_alpha_eq(pf.m1, c.m1->t1) || !term_alpha_eq(pa.m1, c.m1->t2))
          return fail(path, "t_arrow_e: subterm mismatch");
        if (pf.t1->tag != TypeTag::Arrow)
          return fail(path, "t_arrow_e: function premise is not an arrow");
        if (!alpha_eq(pf.t1->a, pa.t1)) return fail(path, "t_arrow_e: argument type mismatch");
        if (!alpha_eq(pf.t1->b, c.t1)) return fail(path, "t_arrow_e: result type mismatch");
        return recurse(d, path);
      }
      case RuleId::TypForallI: {
        if (auto v = premise_count(d, 1, path); !v.ok) return v;
        if (c.m1->tag != TermTag::TLam) return fail(path, "t_forall_i: subject is not tfun");
        Flavor want = intro_flavor(sys);
        if (c.t1->tag != TypeTag::Forall || c.t1->flavor != want)
          return fail(path, "t_forall_i: type must be a " + flavor_word(want) + " quantifier");
        if (!alpha_eq(c.t1->a, c.m1->type))
          return fail(path, "t_forall_i: quantifier bound differs from annotation");
        const Judgment& p = d.premises[0]->conclusion;
        if (auto v = want_kind(p, JudgKind::Typing, path, "t_forall_i"); !v.ok) return v;
        const CtxNode* e = nullptr;
        if (auto v = extension(p, c, BindKind::TypeBound, c.m1->type, path, &e); !v.ok) return v;
        TermPtr expected = c.m1->name == e->name
                               ? c.m1->t1
                               : subst_type_in_term(c.m1->t1, c.m1->name, tvar(e->name));
        if (!term_alpha_eq(p.m1, expected))
          return fail(path, "t_forall_i: body premise mismatch");
        if (!alpha_eq(p.t1, open_forall(c.t1->b, tvar(e->name))))
          return fail(path, "t_forall_i: body type mismatch");
        return recurse(d, path);
      }
      case RuleId::TypForallE: {
        if (auto v = premise_count(d, 2, path); !v.ok) return v;
        if (c.m1->tag != TermTag::TApp)
          return fail(path, "t_forall_e: subject is not a type application");
        const Judgment& pf = d.premises[0]->conclusion;
        const Judgment& ps = d.premises[1]->conclusion;
        if (auto v = want_kind(pf, JudgKind::Typing, path, "t_forall_e"); !v.ok) return v;
        if (auto v = want_kind(ps, JudgKind::Subtype, path, "t_forall_e"); !v.ok) return v;
        if (auto v = same_ctx(pf, c, path); !v.ok) return v;
        if (auto v = same_ctx(ps, c, path); !v.ok) return v;
        if (!term_alpha_eq(pf.m1, c.m1->t1)) return fail(path, "t_forall_e: function mismatch");
        Flavor want = elim_flavor(sys);
        if (pf.t1->tag != TypeTag::Forall || pf.t1->flavor != want)
          return fail(path, "t_forall_e: function premise must be a " +
                                flavor_word(want) + " quantifier");
        if (!alpha_eq(ps.t1, c.m1->type) || !alpha_eq(ps.t2, pf.t1->a))
          return fail(path, "t_forall_e: instantiation subtyping mismatch");
        if (!alpha_eq(c.t1, open_forall(pf.t1->b, c.m1->type)))
          return fail(path, "t_forall_e: result is not the instantiated body");
        return recurse(d, path);
      }
      default:
        return fail(path, "unreachable typing rule");
    }
  }

  // --- term equality --------------------------------------------------------

  Verdict check_eq(const Derivation& d, const std::string& path) const {
    if (sys != SystemId::Kt && sys != SystemId::Fwedge)
      return fail(path, "term equality is defined for kt and fwedge only");
    const Judgment& c = d.conclusion;
    if (rule_kind(d.rule) != JudgKind::Equality)
      return fail(path, "rule " + bq::to_string(d.rule) + " is not an equality rule");
    if (auto v = constructs(c, path); !v.ok) return v;

    switch (d.rule) {
      case RuleId::EqTop: {
        if (auto v = premise_count(d, 2, path); !v.ok) return v;
        if (!is_top(c.t1)) return fail(path, "e_top: type is not Top");
        for (int i = 0; i < 2; ++i) {
          const Judgment& p = d.premises[i]->conclusion;
          if (auto v = want_kind(p, JudgKind::Typing, path, "e_top"); !v.ok) return v;
          if (auto v = same_ctx(p, c, path); !v.ok) return v;
          if (!is_top(p.t1)) return fail(path, "e_top: premise type is not Top");
          if (!term_alpha_eq(p.m1, i == 0 ? c.m1 : c.m2))
            return fail(path, "e_top: premise subject mismatch");
        }
        return recurse(d, path);
      }
      case RuleId::EqRefl: {
        if (auto v = premise_count(d, 1, path); !v.ok) return v;
        const Judgment& p = d.premises[0]->conclusion;
        if (auto v = want_kind(p, JudgKind::Typing, path, "e_refl"); !v.ok) return v;
        if (auto v = same_ctx(p, c, path); !v.ok) return v;
        if (!term_alpha_eq(c.m1, c.m2)) return fail(path, "e_refl: sides differ");
        if (!term_alpha_eq(p.m1, c.m1) || !alpha_eq(p.t1, c.t1))
          return fail(path, "e_refl: premise mismatch");
        return recurse(d, path);
      }
      case RuleId::EqTrans: {
        if (auto v = premise_count(d, 2, path); !v.ok) return v;
        const Judgment& p0 = d.premises[0]->conclusion;
        const Judgment& p1 = d.premises[1]->conclusion;
        if (auto v = want_kind(p0, JudgKind::Equality, path, "e_trans"); !v.ok) return v;
        if (auto v = want_kind(p1, JudgKind::Equality, path, "e_trans"); !v.ok) return v;
        if (auto v = same_ctx(p0, c, path); !v.ok) return v;
        if (auto v = same_ctx(p1, c, path); !v.ok) return v;
        if (!alpha_eq(p0.t1, c.t1) || !alpha_eq(p1.t1, c.t1))
          return fail(path, "e_trans: type mismatch");
        if (!term_alpha_eq(p0.m1, c.m1) || !term_alpha_eq(p0.m2, p1.m1) ||
            !term_alpha_eq(p1.m2, c.m2))
          return fail(path, "e_trans: chain mismatch");
        return recurse(d, path);
      }
      case RuleId::EqSym: {
        if (auto v = premise_count(d, 1, path); !v.ok) return v;
        const Judgment& p = d.premises[0]->conclusion;
        if (auto v = want_kind(p, JudgKind::Equality, path, "e_sym"); !v.ok) return v;
        if (auto v = same_ctx(p, c, path); !v.ok) return v;
        if (!alpha_eq(p.t1, c.t1)) return fail(path, "e_sym: type mismatch");
        if (!term_alpha_eq(p.m1, c.m2) || !term_alpha_eq(p.m2, c.m1))
          return fail(path, "e_sym: sides are not swapped");
        return recurse(d, path);
      }
      case RuleId::EqBeta1: {
        if (auto v = premise_count(d, 2, path); !v.ok) return v;
        if (c.m1->tag != TermTag::App || c.m1->t1->tag != TermTag::Lam)
          return fail(path, "e_beta1: lhs is not a term redex");
        TermPtr fn = c.m1->t1;
        TermPtr arg = c.m1->t2;
        if (!term_alpha_eq(c.m2, subst_term(fn->t1, fn->name, arg)))
          return fail(path, "e_beta1: rhs is not the contractum");
        const Judgment& pb = d.premises[0]->conclusion;
        const Judgment& pa = d.premises[1]->conclusion;
        if (auto v = want_kind(pb, JudgKind::Typing, path, "e_beta1"); !v.ok) return v;
        if (auto v = want_kind(pa, JudgKind::Typing, path, "e_beta1"); !v.ok) return v;
        const CtxNode* e = nullptr;
        if (auto v = extension(pb, c, BindKind::TermBinding, fn->type, path, &e); !v.ok) return v;
        TermPtr expected = fn->name == e->name
                               ? fn->t1
                               : subst_term(fn->t1, fn->name, term_var(e->name));
        if (!term_alpha_eq(pb.m1, expected) || !alpha_eq(pb.t1, c.t1))
          return fail(path, "e_beta1: body premise mismatch");
        if (auto v = same_ctx(pa, c, path); !v.ok) return v;
        if (!term_alpha_eq(pa.m1, arg) || !alpha_eq(pa.t1, fn->type))
          return fail(path, "e_beta1: argument premise mismatch");
        return recurse(d, path);
      }
      case RuleId::EqEta1: {
        if (auto v = premise_count(d, 1, path); !v.ok) return v;
        if (c.m1->tag != TermTag::Lam || c.m1->t1->tag != TermTag::App ||
            c.m1->t1->t2->tag != TermTag::Var || c.m1->t1->t2->name != c.m1->name)
          return fail(path, "e_eta1: lhs is not fun (x:S) => t x");
        if (c.ctx.binds(c.m1->name))
          return fail(path, "e_eta1: binder shadows the context");
        if (free_term_vars(c.m2).count(c.m1->name))
          return fail(path, "e_eta1: binder occurs free in the eta-contracted term");
        if (!term_alpha_eq(c.m1->t1->t1, c.m2))
          return fail(path, "e_eta1: applied term differs from rhs");
        if (c.t1->tag != TypeTag::Arrow || !alpha_eq(c.t1->a, c.m1->type))
          return fail(path, "e_eta1: type is not the annotated arrow");
        const Judgment& p = d.premises[0]->conclusion;
        if (auto v = want_kind(p, JudgKind::Typing, path, "e_eta1"); !v.ok) return v;
        if (auto v = same_ctx(p, c, path); !v.ok) return v;
        if (!term_alpha_eq(p.m1, c.m2) || !alpha_eq(p.t1, c.t1))
          return fail(path, "e_eta1: premise mismatch");
        return recurse(d, path);
      }
      case RuleId::EqBeta2: {
        if (auto v = premise_count(d, 2, path); !v.ok) return v;
        if (c.m1->tag != TermTag::TApp || c.m1->t1->tag != TermTag::TLam)
          return fail(path, "e_beta2: lhs is not a type redex");
        TermPtr fn = c.m1->t1;
        TypePtr arg = c.m1->type;
        if (!term_alpha_eq(c.m2, subst_type_in_term(fn->t1, fn->name, arg)))
          return fail(path, "e_beta2: rhs is not the contractum");
        const Judgment& pb = d.premises[0]->conclusion;
        const Judgment& ps = d.premises[1]->conclusion;
        if (auto v = want_kind(pb, JudgKind::Typing, path, "e_beta2"); !v.ok) return v;
        if (auto v = want_kind(ps, JudgKind::Subtype, path, "e_beta2"); !v.ok) return v;
        const CtxNode* e = nullptr;
        if (auto v = extension(pb, c, BindKind::TypeBound, fn->type, path, &e); !v.ok) return v;
        TermPtr expected = fn->name == e->name
                               ? fn->t1
                               : subst_type_in_term(fn->t1, fn->name, tvar(e->name));
        if (!term_alpha_eq(pb.m1, expected))
          return fail(path, "e_beta2: body premise mismatch");
        if (!alpha_eq(subst_type(pb.t1, e->name, arg), c.t1))
          return fail(path, "e_beta2: type is not the instantiated body type");
        if (auto v = same_ctx(ps, c, path); !v.ok) return v;
        if (!alpha_eq(ps.t1, arg) || !alpha_eq(ps.t2, fn->type))
          return fail(path, "e_beta2: instantiation subtyping mismatch");
        return recurse(d, path);
      }
      case RuleId::EqEta2: {
        if (auto v = premise_count(d, 1, path); !v.ok) return v;
        if (c.m1->tag != TermTag::TLam || c.m1->t1->tag != TermTag::TApp ||
            c.m1->t1->type->tag != TypeTag::FVar ||
            c.m1->t1->type->name != c.m1->name)
          return fail(path, "e_eta2: lhs is not tfun (Y<:S) => t [Y]");
        if (c.ctx.binds(c.m1->name))
          return fail(path, "e_eta2: binder shadows the context");
        if (free_type_vars_in_term(c.m2).count(c.m1->name))
          return fail(path, "e_eta2: binder occurs free in the eta-contracted term");
        if (!term_alpha_eq(c.m1->t1->t1, c.m2))
          return fail(path, "e_eta2: applied term differs from rhs");
        Flavor want = sys == SystemId::Kt ? Flavor::TopStyle : Flavor::Plain;
        if (c.t1->tag != TypeTag::Forall || c.t1->flavor != want ||
            !alpha_eq(c.t1->a, c.m1->type))
          return fail(path, "e_eta2: type is not the matching quantifier");
        const Judgment& p = d.premises[0]->conclusion;
        if (auto v = want_kind(p, JudgKind::Typing, path, "e_eta2"); !v.ok) return v;
        if (auto v = same_ctx(p, c, path); !v.ok) return v;
        if (!term_alpha_eq(p.m1, c.m2) || !alpha_eq(p.t1, c.t1))
          return fail(path, "e_eta2: premise mismatch");
        return recurse(d, path);
      }
      case RuleId::EqAbs1: {
        if (auto v = premise_count(d, 1, path); !v.ok) return v;
        if (c.m1->tag != TermTag::Lam || c.m2->tag != TermTag::Lam ||
            !alpha_eq(c.m1->type, c.m2->type))
          return fail(path, "e_abs1: sides are not equally-annotated funs");
        if (c.t1->tag != TypeTag::Arrow || !alpha_eq(c.t1->a, c.m1->type))
          return fail(path, "e_abs1: type is not the annotated arrow");
        const Judgment& p = d.premises[0]->conclusion;
        if (auto v = want_kind(p, JudgKind::Equality, path, "e_abs1"); !v.ok) return v;
        const CtxNode* e = nullptr;
        if (auto v = extension(p, c, BindKind::TermBinding, c.m1->type, path, &e); !v.ok) return v;
        TermPtr l = c.m1->name == e->name
                        ? c.m1->t1
                        : subst_term(c.m1->t1, c.m1->name, term_var(e->name));
        TermPtr r = c.m2->name == e->name
                        ? c.m2->t1
                        : subst_term(c.m2->t1, c.m2->name, term_var(e->name));
        if (!term_alpha_eq(p.m1, l) || !term_alpha_eq(p.m2, r))
          return fail(path, "e_abs1: body premise mismatch");
        if (!alpha_eq(p.t1, c.t1->b)) return fail(path, "e_abs1: codomain mismatch");
        return recurse(d, path);
      }
      case RuleId::EqAbs2: {
        if (auto v = premise_count(d, 1, path); !v.ok) return v;
        if (c.m1->tag != TermTag::TLam || c.m2->tag != TermTag::TLam ||
            !alpha_eq(c.m1->type, c.m2->type))
          return fail(path, "e_abs2: sides are not equally-bounded tfuns");
        Flavor want = sys == SystemId::Kt ? Flavor::Kernel : Flavor::Plain;
        if (c.t1->tag != TypeTag::Forall || c.t1->flavor != want ||
            !alpha_eq(c.t1->a, c.m1->type))
          return fail(path, "e_abs2: type is not the matching quantifier");
        const Judgment& p = d.premises[0]->conclusion;
        if (auto v = want_kind(p, JudgKind::Equality, path, "e_abs2"); !v.ok) return v;
        const CtxNode* e = nullptr;
        if (auto v = extension(p, c, BindKind::TypeBound, c.m1->type, path, &e); !v.ok) return v;
        TermPtr l = c.m1->name == e->name
                        ? c.m1->t1
                        : subst_type_in_term(c.m1->t1, c.m1->name, tvar(e->name));
        TermPtr r = c.m2->name == e->name
                        ? c.m2->t1
                        : subst_type_in_term(c.m2->t1, c.m2->name, tvar(e->name));
        if (!term_alpha_eq(p.m1, l) || !term_alpha_eq(p.m2, r))
          return fail(path, "e_abs2: body premise mismatch");
        if (!alpha_eq(p.t1, open_forall(c.t1->b, tvar(e->name))))
          return fail(path, "e_abs2: body type mismatch");
        return recurse(d, path);
      }
      case RuleId::EqApp1: {
        if (auto v = premise_count(d, 2, path); !v.ok) return v;
        if (c.m1->tag != TermTag::App || c.m2->tag != TermTag::App)
          return fail(path, "e_app1: sides are not applications");
        const Judgment& pf = d.premises[0]->conclusion;
        const Judgment& pa = d.premises[1]->conclusion;
        if (auto v = want_kind(pf, JudgKind::Equality, path, "e_app1"); !v.ok) return v;
        if (auto v = want_kind(pa, JudgKind::Equality, path, "e_app1"); !v.ok) return v;
        if (auto v = same_ctx(pf, c, path); !v.ok) return v;
        if (auto v = same_ctx(pa, c, path); !v.ok) return v;
        if (pf.t1->tag != TypeTag::Arrow)
          return fail(path, "e_app1: function premise is not at an arrow type");
        if (!term_alpha_eq(pf.m1, c.m1->t1) || !term_alpha_eq(pf.m2, c.m2->t1) ||
            !term_alpha_eq(pa.m1, c.m1->t2) || !term_alpha_eq(pa.m2, c.m2->t2))
          return fail(path, "e_app1: subterm mismatch");
        if (!alpha_eq(pa.t1, pf.t1->a) || !alpha_eq(c.t1, pf.t1->b))
          return fail(path, "e_app1: type mismatch");
        return recurse(d, path);
      }
      case RuleId::EqApp2: {
        if (auto v = premise_count(d, 5, path); !v.ok) return v;
        if (c.m1->tag != TermTag::TApp || c.m2->tag != TermTag::TApp)
          return fail(path, "e_app2: sides are not type applications");
        TypePtr r1 = c.m1->type;
        TypePtr r2 = c.m2->type;
        const Judgment& pe = d.premises[0]->conclusion;
        if (auto v = want_kind(pe, JudgKind::Equality, path, "e_app2"); !v.ok) return v;
        if (auto v = same_ctx(pe, c, path); !v.ok) return v;
        if (!term_alpha_eq(pe.m1, c.m1->t1) || !term_alpha_eq(pe.m2, c.m2->t1))
          return fail(path, "e_app2: function premise mismatch");
        Flavor want = sys == SystemId::Kt ? Flavor::TopStyle : Flavor::Plain;
        if (pe.t1->tag != TypeTag::Forall || pe.t1->flavor != want)
          return fail(path, "e_app2: function premise is not at the matching quantifier");
        TypePtr bound = pe.t1->a;
        TypePtr body = pe.t1->b;
        struct SubExpect { TypePtr l, r; } expect[4] = {
            {r1, bound},
            {r2, bound},
            {open_forall(body, r1), c.t1},
            {open_forall(body, r2), c.t1},
        };
        for (int i = 0; i < 4; ++i) {
          const Judgment& p = d.premises[i + 1]->conclusion;
          if (auto v = want_kind(p, JudgKind::Subtype, path, "e_app2"); !v.ok) return v;
          if (auto v = same_ctx(p, c, path); !v.ok) return v;
          if (!alpha_eq(p.t1, expect[i].l) || !alpha_eq(p.t2, expect[i].r))
            return fail(path, "e_app2: subtyping premise " + std::to_string(i + 1) +
                                  " mismatch");
        }
        return recurse(d, path);
      }
      default:
        return fail(path, "unreachable equality rule");
    }
  }

  Verdict recurse(const Derivation& d, const std::string& path) const {
    for (size_t i = 0; i < d.premises.size(); ++i) {
      Verdict v = check(*d.premises[i], path + "/" + std::to_string(i));
      if (!v.ok) return v;
    }
    return Verdict::accept();
  }

  static std::string flavor_word(Flavor f) {
    switch (f) {
      case Flavor::Kernel: return "kernel";
      case Flavor::TopStyle: return "top-style";
      case Flavor::Plain: return "plain";
    }
    return "?";
  }
};

}  // namespace

Verdict check_subtype_derivation(SystemId sys, const Derivation& d) {
  if (d.conclusion.kind != JudgKind::Subtype)
    return Verdict::reject("", "conclusion is not a subtyping judgment");
  return Checker{sys}.check(d, "");
}

Verdict check_typing_derivation(SystemId sys, const Derivation& d) {
  if (d.conclusion.kind != JudgKind::Typing)
    return Verdict::reject("", "conclusion is not a typing judgment");
  return Checker{sys}.check(d, "");
}

Verdict check_equality_derivation(SystemId sys, const Derivation& d) {
  if (d.conclusion.kind != JudgKind::Equality)
    return Verdict::reject("", "conclusion is not an equality judgment");
  return Checker{sys}.check(d, "");
}

Verdict check_derivation(SystemId sys, const Derivation& d) {
  switch (d.conclusion.kind) {
    case JudgKind::Subtype: return check_subtype_derivation(sys, d);
    case JudgKind::Typing: return check_typing_derivation(sys, d);
    case JudgKind::Equality: return check_equality_derivation(sys, d);
    default: return Verdict::reject("", "unsupported judgment kind");
  }
}

}  // namespace bq
