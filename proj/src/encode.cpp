#include "bq/encode.hpp"

#include <cassert>

namespace bq {

TypePtr encode_type(TypePtr t) {
  switch (t->tag) {
    case TypeTag::Top:
    case TypeTag::FVar:
    case TypeTag::BVar:
      return t;
    case TypeTag::Arrow:
      return arrow(encode_type(t->a), encode_type(t->b));
    case TypeTag::Meet:
      throw InvalidInput("encode_type: meets cannot appear in the source type");
    case TypeTag::Forall: {
      if (t->flavor == Flavor::Plain)
        throw InvalidInput("encode_type: undecorated quantifier in the source type");
      std::string hint = t->name.empty() ? "X" : t->name;
      std::string x = fresh_name(hint, free_type_vars(t));
      TypePtr bound = encode_type(t->a);
      TypePtr body = encode_type(open_forall(t->b, tvar(x)));
      TypePtr rep = meet(tvar(x), bound);
      TypePtr substituted = t->flavor == Flavor::Kernel
                                ? subst_type(body, x, rep)
                                : neg_subst(body, x, rep);
      return forall(Flavor::Plain, hint, top_type(), close_type(substituted, x));
    }
  }
  throw InvalidInput("encode_type: unreachable");
}

TermPtr encode_term(const TermPtr& t) {
  switch (t->tag) {
    case TermTag::TopC:
    case TermTag::Var:
      return t;
    case TermTag::Lam:
      return lam(t->name, encode_type(t->type), encode_term(t->t1));
    case TermTag::TLam: {
      TypePtr bound = encode_type(t->type);
      TermPtr body = encode_term(t->t1);
      TermPtr substituted =
          subst_type_in_term(body, t->name, meet(tvar(t->name), bound));
      return tlam(t->name, top_type(), substituted);
    }
    case TermTag::App:
      return app(encode_term(t->t1), encode_term(t->t2));
    case TermTag::TApp:
      return tapp(encode_term(t->t1), encode_type(t->type));
  }
  throw InvalidInput("encode_term: unreachable");
}

Context encode_judgment_context(const Context& ctx) {
  Context out;
  for (const CtxNode* e : ctx.entries()) {
    if (e->kind == BindKind::TypeBound) {
      out = out.push_type(e->name, top_type());
    } else {
      out = out.push_term(e->name, encode_in_context(Context(e->parent), e->type));
    }
  }
  return out;
}

namespace {

// Parallel substitution: replacements are final and not re-traversed.
TypePtr subst_parallel(TypePtr t, const std::map<std::string, TypePtr>& rep) {
  switch (t->tag) {
    case TypeTag::FVar: {
      auto it = rep.find(t->name);
      return it == rep.end() ? t : it->second;
    }
    case TypeTag::Arrow:
      return arrow(subst_parallel(t->a, rep), subst_parallel(t->b, rep));
    case TypeTag::Meet:
      return meet(subst_parallel(t->a, rep), subst_parallel(t->b, rep));
    case TypeTag::Forall:
      return forall(t->flavor, t->name, subst_parallel(t->a, rep),
                    subst_parallel(t->b, rep));
    default:
      return t;
  }
}

}  // namespace

TypePtr encode_in_context(const Context& ctx, TypePtr t) {
  TypePtr enc = encode_type(t);
  // Bounded variables are represented by X /\ (representation of the bound);
  // representations chain outermost-first so that variable bound chains stay
  // derivable in the target calculus.
  std::map<std::string, TypePtr> rep;
  for (const CtxNode* e : ctx.entries()) {
    if (e->kind != BindKind::TypeBound) continue;
    if (is_top(e->type)) continue;
    rep[e->name] = meet(tvar(e->name), subst_parallel(encode_type(e->type), rep));
  }
  return subst_parallel(enc, rep);
}

// ---------------------------------------------------------------------------
// Lemma instances
// ---------------------------------------------------------------------------

std::optional<LemmaId> lemma_from_string(std::string_view s) {
  if (s == "L-KFun") return LemmaId::KFun;
  if (s == "L-MixedMono") return LemmaId::MixedMono;
  if (s == "L-MixedCong") return LemmaId::MixedCong;
  if (s == "L-TopRule") return LemmaId::TopRule;
  if (s == "L-Loc") return LemmaId::Loc;
  if (s == "L-BetaSide") return LemmaId::BetaSide;
  if (s == "L-EtaSide") return LemmaId::EtaSide;
  return std::nullopt;
}

std::string to_string(LemmaId id) {
  switch (id) {
    case LemmaId::KFun: return "L-KFun";
    case LemmaId::MixedMono: return "L-MixedMono";
    case LemmaId::MixedCong: return "L-MixedCong";
    case LemmaId::TopRule: return "L-TopRule";
    case LemmaId::Loc: return "L-Loc";
    case LemmaId::BetaSide: return "L-BetaSide";
    case LemmaId::EtaSide: return "L-EtaSide";
  }
  return "?";
}

std::vector<std::string> lemma_metavars(LemmaId id) {
  switch (id) {
    case LemmaId::KFun: return {"S", "T", "TPrime"};
    case LemmaId::MixedMono:
      return {"T", "Sneg", "Spos", "SnegPrime", "SposPrime"};
    case LemmaId::MixedCong: return {"T", "TPrime", "Sneg", "Spos"};
    case LemmaId::TopRule: return {"S", "SPrime", "T"};
    case LemmaId::Loc: return {"S0", "T0", "S1", "T1"};
    case LemmaId::BetaSide: return {"S", "SPrime", "T"};
    case LemmaId::EtaSide: return {"S", "T"};
  }
  return {};
}

namespace {

struct LemmaShape {
  std::vector<Judgment> premises;
  Judgment conclusion;
};

TypePtr need(const LemmaInstance& inst, const std::string& key) {
  auto it = inst.bindings.find(key);
  if (it == inst.bindings.end())
    throw InvalidInput("lemma instance is missing binding " + key);
  return it->second;
}

LemmaShape lemma_shape(const LemmaInstance& inst) {
  const Context& ctx = inst.ctx;
  const std::string& x = inst.var;
  if (ctx.binds(x))
    throw InvalidInput("lemma variable " + x + " collides with the context");
  auto sub = [&](TypePtr a, TypePtr b) { return Judgment::subtype(ctx, a, b); };
  auto uquant = [&](TypePtr body) {
    return forall(Flavor::Plain, x, top_type(), close_type(body, x));
  };

  switch (inst.lemma) {
    case LemmaId::KFun: {
      TypePtr s = need(inst, "S");
      TypePtr t = need(inst, "T");
      TypePtr tp = need(inst, "TPrime");
      Context inner = ctx.push_type(x, s);
      TypePtr rep = meet(tvar(x), s);
      return {{Judgment::subtype(inner, t, tp)},
              sub(uquant(subst_type(t, x, rep)), uquant(subst_type(tp, x, rep)))};
    }
    case LemmaId::MixedMono: {
      TypePtr t = need(inst, "T");
      TypePtr sn = need(inst, "Sneg");
      TypePtr sp = need(inst, "Spos");
      TypePtr snp = need(inst, "SnegPrime");
      TypePtr spp = need(inst, "SposPrime");
      return {{sub(snp, sn), sub(sp, spp)},
              sub(mixed_subst(t, x, sn, sp), mixed_subst(t, x, snp, spp))};
    }
    case LemmaId::MixedCong: {
      TypePtr t = need(inst, "T");
      TypePtr tp = need(inst, "TPrime");
      TypePtr sn = need(inst, "Sneg");
      TypePtr sp = need(inst, "Spos");
      Context inner = ctx.push_type(x, top_type());
      return {{Judgment::subtype(inner, t, tp)},
              sub(mixed_subst(t, x, sn, sp), mixed_subst(tp, x, sn, sp))};
    }
    case LemmaId::TopRule: {
      TypePtr s = need(inst, "S");
      TypePtr sp = need(inst, "SPrime");
      TypePtr t = need(inst, "T");
      return {{sub(sp, s)},
              sub(uquant(neg_subst(t, x, meet(tvar(x), s))),
                  uquant(neg_subst(t, x, meet(tvar(x), sp))))};
    }
    case LemmaId::Loc: {
      TypePtr s0 = need(inst, "S0");
      TypePtr t0 = need(inst, "T0");
      TypePtr s1 = need(inst, "S1");
      TypePtr t1 = need(inst, "T1");
      Context inner = ctx.push_type(x, s0);
      return {{sub(t0, s0), Judgment::subtype(inner, s1, t1)},
              sub(uquant(subst_type(s1, x, meet(tvar(x), s0))),
                  uquant(neg_subst(t1, x, meet(tvar(x), t0))))};
    }
    case LemmaId::BetaSide: {
      TypePtr s = need(inst, "S");
      TypePtr sp = need(inst, "SPrime");
      TypePtr t = need(inst, "T");
      return {{sub(sp, s)},
              sub(subst_type(t, x, meet(s, sp)), subst_type(t, x, sp))};
    }
    case LemmaId::EtaSide: {
      TypePtr s = need(inst, "S");
      TypePtr t = need(inst, "T");
      const std::string& y = inst.fresh;
      if (ctx.binds(y) || y == x)
        throw InvalidInput("fresh variable " + y + " collides");
      Context inner = ctx.push_type(y, top_type());
      TypePtr ys = meet(tvar(y), s);
      LemmaShape shape;
      shape.conclusion = Judgment::subtype(
          inner, mixed_subst(t, x, meet(ys, s), ys), mixed_subst(t, x, ys, tvar(y)));
      return shape;
    }
  }
  throw InvalidInput("unknown lemma");
}

void validate_instance(const LemmaInstance& inst) {
  auto vars = lemma_metavars(inst.lemma);
  for (const auto& v : vars) need(inst, v);
  if (inst.bindings.size() != vars.size())
    throw InvalidInput("lemma instance binds variables outside the statement");
}

}  // namespace

LemmaReport verify_lemma_instance(const LemmaInstance& inst, int depth) {
  validate_instance(inst);
  LemmaShape shape = lemma_shape(inst);
  LemmaReport report;
  for (const Judgment& p : shape.premises) {
    SearchResult r = search_subtype(SystemId::Fwedge, p.ctx, p.t1, p.t2, depth);
    bool ok = r.found();
    report.premises.push_back({p, std::move(r)});
    if (!ok) {
      report.status = LemmaReport::Status::PremiseNotEstablished;
      return report;
    }
  }
  const Judgment& c = shape.conclusion;
  SearchResult r = search_subtype(SystemId::Fwedge, c.ctx, c.t1, c.t2, depth);
  bool ok = r.found();
  report.conclusion = LemmaOutcome{c, std::move(r)};
  if (!ok) report.status = LemmaReport::Status::ConclusionNotFound;
  return report;
}

}  // namespace bq
