#include "bq/system.hpp"

namespace bq {

std::string to_string(SystemId s) {
  switch (s) {
    case SystemId::Kt: return "kt";
    case SystemId::Kernel: return "kernel";
    case SystemId::Ftop: return "ftop";
    case SystemId::FsubOrig: return "fsub-orig";
    case SystemId::Fwedge: return "fwedge";
  }
  return "?";
}

std::optional<SystemId> system_from_string(std::string_view s) {
  if (s == "kt") return SystemId::Kt;
  if (s == "kernel") return SystemId::Kernel;
  if (s == "ftop") return SystemId::Ftop;
  if (s == "fsub-orig") return SystemId::FsubOrig;
  if (s == "fwedge") return SystemId::Fwedge;
  return std::nullopt;
}

bool flavor_allowed(SystemId s, Flavor f) {
  switch (s) {
    case SystemId::Kt: return f != Flavor::Plain;
    case SystemId::Kernel: return f == Flavor::Kernel;
    case SystemId::Ftop: return f == Flavor::TopStyle;
    case SystemId::FsubOrig:
    case SystemId::Fwedge: return f == Flavor::Plain;
  }
  return false;
}

bool meets_allowed(SystemId s) { return s == SystemId::Fwedge; }

bool bounded_forall_allowed(SystemId s) { return s != SystemId::Fwedge; }

Flavor intro_flavor(SystemId s) {
  switch (s) {
    case SystemId::Kt:
    case SystemId::Kernel: return Flavor::Kernel;
    case SystemId::Ftop: return Flavor::TopStyle;
    default: return Flavor::Plain;
  }
}

Flavor elim_flavor(SystemId s) {
  switch (s) {
    case SystemId::Kt:
    case SystemId::Ftop: return Flavor::TopStyle;
    case SystemId::Kernel: return Flavor::Kernel;
    default: return Flavor::Plain;
  }
}

bool constructs_ok(SystemId s, TypePtr t) {
  switch (t->tag) {
    case TypeTag::Meet:
      return meets_allowed(s) && constructs_ok(s, t->a) && constructs_ok(s, t->b);
    case TypeTag::Forall:
      if (!flavor_allowed(s, t->flavor)) return false;
      if (!bounded_forall_allowed(s) && !is_top(t->a)) return false;
      return constructs_ok(s, t->a) && constructs_ok(s, t->b);
    case TypeTag::Arrow:
      return constructs_ok(s, t->a) && constructs_ok(s, t->b);
    default:
      return true;
  }
}

bool constructs_ok(SystemId s, const TermPtr& t) {
  switch (t->tag) {
    case TermTag::Lam:
    case TermTag::TLam:
      // A tfun bound is a context bound, not a quantifier bound; it only has
      // to be an expressible type of the system.
      return constructs_ok(s, t->type) && constructs_ok(s, t->t1);
    case TermTag::App:
      return constructs_ok(s, t->t1) && constructs_ok(s, t->t2);
    case TermTag::TApp:
      return constructs_ok(s, t->type) && constructs_ok(s, t->t1);
    default:
      return true;
  }
}

}  // namespace bq
