#include "bq/json_io.hpp"

namespace bq {

namespace {

const char* flavor_tag(Flavor f) {
  switch (f) {
    case Flavor::Kernel: return "k";
    case Flavor::TopStyle: return "t";
    case Flavor::Plain: return "plain";
  }
  return "?";
}

Flavor flavor_from_tag(const std::string& s) {
  if (s == "k") return Flavor::Kernel;
  if (s == "t") return Flavor::TopStyle;
  if (s == "plain") return Flavor::Plain;
  throw JsonFormatError("unknown quantifier flavor: " + s);
}

Json type_json(TypePtr t, std::vector<std::string>& binders,
               std::set<std::string>& taken) {
  switch (t->tag) {
    case TypeTag::Top:
      return Json{{"node", "top"}};
    case TypeTag::FVar:
      return Json{{"node", "tvar"}, {"name", t->name}};
    case TypeTag::BVar: {
      size_t i = binders.size();
      if (t->index >= i) throw JsonFormatError("dangling bound type variable");
      return Json{{"node", "tvar"}, {"name", binders[i - 1 - t->index]}};
    }
    case TypeTag::Arrow:
      return Json{{"node", "arrow"},
                  {"dom", type_json(t->a, binders, taken)},
                  {"cod", type_json(t->b, binders, taken)}};
    case TypeTag::Meet:
      return Json{{"node", "meet"},
                  {"left", type_json(t->a, binders, taken)},
                  {"right", type_json(t->b, binders, taken)}};
    case TypeTag::Forall: {
      std::string name = fresh_name(t->name.empty() ? "X" : t->name, taken);
      Json bound = type_json(t->a, binders, taken);
      bool inserted = taken.insert(name).second;
      binders.push_back(name);
      Json body = type_json(t->b, binders, taken);
      binders.pop_back();
      if (inserted) taken.erase(name);
      return Json{{"node", "forall"},
                  {"flavor", flavor_tag(t->flavor)},
                  {"binder", name},
                  {"bound", std::move(bound)},
                  {"body", std::move(body)}};
    }
  }
  throw JsonFormatError("unreachable type tag");
}

const Json& field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw JsonFormatError("missing field '" + std::string(key) + "'");
  return *it;
}

std::string str_field(const Json& j, const char* key) {
  const Json& f = field(j, key);
  if (!f.is_string())
    throw JsonFormatError("field '" + std::string(key) + "' must be a string");
  return f.get<std::string>();
}

}  // namespace

Json type_to_json(TypePtr t) {
  std::vector<std::string> binders;
  std::set<std::string> taken = free_type_vars(t);
  return type_json(t, binders, taken);
}

TypePtr type_from_json(const Json& j) {
  if (!j.is_object()) throw JsonFormatError("type must be a JSON object");
  std::string node = str_field(j, "node");
  if (node == "top") return top_type();
  if (node == "tvar") return tvar(str_field(j, "name"));
  if (node == "arrow")
    return arrow(type_from_json(field(j, "dom")), type_from_json(field(j, "cod")));
  if (node == "meet")
    return meet(type_from_json(field(j, "left")),
                type_from_json(field(j, "right")));
  if (node == "forall") {
    std::string binder = str_field(j, "binder");
    TypePtr bound = type_from_json(field(j, "bound"));
    TypePtr body = type_from_json(field(j, "body"));
    return forall(flavor_from_tag(str_field(j, "flavor")), binder, bound,
                  close_type(body, binder));
  }
  throw JsonFormatError("unknown type node '" + node + "'");
}

Json term_to_json(const TermPtr& t) {
  switch (t->tag) {
    case TermTag::TopC:
      return Json{{"node", "topc"}};
    case TermTag::Var:
      return Json{{"node", "var"}, {"name", t->name}};
    case TermTag::Lam:
      return Json{{"node", "lam"},
                  {"binder", t->name},
                  {"annotation", type_to_json(t->type)},
                  {"body", term_to_json(t->t1)}};
    case TermTag::TLam:
      return Json{{"node", "tlam"},
                  {"binder", t->name},
                  {"bound", type_to_json(t->type)},
                  {"body", term_to_json(t->t1)}};
    case TermTag::App:
      return Json{{"node", "app"},
                  {"fn", term_to_json(t->t1)},
                  {"arg", term_to_json(t->t2)}};
    case TermTag::TApp:
      return Json{{"node", "tapp"},
                  {"fn", term_to_json(t->t1)},
                  {"arg", type_to_json(t->type)}};
  }
  throw JsonFormatError("unreachable term tag");
}

TermPtr term_from_json(const Json& j) {
  if (!j.is_object()) throw JsonFormatError("term must be a JSON object");
  std::string node = str_field(j, "node");
  if (node == "topc") return top_term();
  if (node == "var") return term_var(str_field(j, "name"));
  if (node == "lam")
    return lam(str_field(j, "binder"), type_from_json(field(j, "annotation")),
               term_from_json(field(j, "body")));
  if (node == "tlam")
    return tlam(str_field(j, "binder"), type_from_json(field(j, "bound")),
                term_from_json(field(j, "body")));
  if (node == "app")
    return app(term_from_json(field(j, "fn")), term_from_json(field(j, "arg")));
  if (node == "tapp")
    return tapp(term_from_json(field(j, "fn")), type_from_json(field(j, "arg")));
  throw JsonFormatError("unknown term node '" + node + "'");
}

Json ctx_to_json(const Context& ctx) {
  Json out = Json::array();
  for (const CtxNode* e : ctx.entries()) {
    if (e->kind == BindKind::TypeBound) {
      out.push_back(Json{{"kind", "type_bound"},
                         {"name", e->name},
                         {"bound", type_to_json(e->type)}});
    } else {
      out.push_back(Json{{"kind", "term_binding"},
                         {"name", e->name},
                         {"type", type_to_json(e->type)}});
    }
  }
  return out;
}

Context ctx_from_json(const Json& j) {
  if (!j.is_array()) throw JsonFormatError("context must be a JSON array");
  Context ctx;
  for (const Json& e : j) {
    std::string kind = str_field(e, "kind");
    if (kind == "type_bound") {
      ctx = ctx.push_type(str_field(e, "name"), type_from_json(field(e, "bound")));
    } else if (kind == "term_binding") {
      ctx = ctx.push_term(str_field(e, "name"), type_from_json(field(e, "type")));
    } else {
      throw JsonFormatError("unknown context entry kind '" + kind + "'");
    }
  }
  return ctx;
}

Json judgment_to_json(const Judgment& j) {
  switch (j.kind) {
    case JudgKind::WfType:
      return Json{{"judgment", "wf_type"},
                  {"ctx", ctx_to_json(j.ctx)},
                  {"type", type_to_json(j.t1)}};
    case JudgKind::Subtype:
      return Json{{"judgment", "subtype"},
                  {"ctx", ctx_to_json(j.ctx)},
                  {"lhs", type_to_json(j.t1)},
                  {"rhs", type_to_json(j.t2)}};
    case JudgKind::Typing:
      return Json{{"judgment", "typing"},
                  {"ctx", ctx_to_json(j.ctx)},
                  {"term", term_to_json(j.m1)},
                  {"type", type_to_json(j.t1)}};
    case JudgKind::Equality:
      return Json{{"judgment", "equality"},
                  {"ctx", ctx_to_json(j.ctx)},
                  {"lhs", term_to_json(j.m1)},
                  {"rhs", term_to_json(j.m2)},
                  {"type", type_to_json(j.t1)}};
  }
  throw JsonFormatError("unreachable judgment kind");
}

Judgment judgment_from_json(const Json& j) {
  std::string kind = str_field(j, "judgment");
  Context ctx = ctx_from_json(field(j, "ctx"));
  if (kind == "wf_type")
    return Judgment::wf(ctx, type_from_json(field(j, "type")));
  if (kind == "subtype")
    return Judgment::subtype(ctx, type_from_json(field(j, "lhs")),
                             type_from_json(field(j, "rhs")));
  if (kind == "typing")
    return Judgment::typing(ctx, term_from_json(field(j, "term")),
                            type_from_json(field(j, "type")));
  if (kind == "equality")
    return Judgment::equality(ctx, term_from_json(field(j, "lhs")),
                              term_from_json(field(j, "rhs")),
                              type_from_json(field(j, "type")));
  throw JsonFormatError("unknown judgment '" + kind + "'");
}

Json derivation_to_json(const Derivation& d) {
  Json premises = Json::array();
  for (const auto& p : d.premises) premises.push_back(derivation_to_json(*p));
  return Json{{"rule", to_string(d.rule)},
              {"conclusion", judgment_to_json(d.conclusion)},
              {"premises", std::move(premises)}};
}

DerivPtr derivation_from_json(const Json& j) {
  std::string rule = str_field(j, "rule");
  auto r = rule_from_string(rule);
  if (!r) throw JsonFormatError("unknown rule '" + rule + "'");
  Judgment conclusion = judgment_from_json(field(j, "conclusion"));
  std::vector<DerivPtr> premises;
  const Json& ps = field(j, "premises");
  if (!ps.is_array()) throw JsonFormatError("premises must be an array");
  for (const Json& p : ps) premises.push_back(derivation_from_json(p));
  return mk_deriv(*r, std::move(conclusion), std::move(premises));
}

}  // namespace bq
