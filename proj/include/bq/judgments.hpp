#ifndef BQ_JUDGMENTS_HPP
#define BQ_JUDGMENTS_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bq/syntax.hpp"
#include "bq/system.hpp"

namespace bq {

enum class JudgKind : uint8_t { WfType, Subtype, Typing, Equality };

struct Judgment {
  JudgKind kind = JudgKind::WfType;
  Context ctx;
  TypePtr t1 = nullptr;  // WfType subject / Subtype lhs / Typing type / Equality type
  TypePtr t2 = nullptr;  // Subtype rhs
  TermPtr m1;            // Typing subject / Equality lhs
  TermPtr m2;            // Equality rhs

  static Judgment wf(Context c, TypePtr t);
  static Judgment subtype(Context c, TypePtr s, TypePtr t);
  static Judgment typing(Context c, TermPtr m, TypePtr t);
  static Judgment equality(Context c, TermPtr l, TermPtr r, TypePtr t);
};

bool judgment_alpha_eq(const Judgment& a, const Judgment& b);
std::string describe(const Judgment& j);

// Closed rule vocabulary across all systems; each checker accepts the subset
// belonging to its judgment form and the declared system.
enum class RuleId : uint8_t {
  // subtyping
  SubVar, SubTop, SubRefl, SubTrans, SubArrow,
  SubForallFun, SubForallLoc, SubForallTop, SubForallOrig,
  SubMeetL, SubMeetR, SubMeetIntro,
  // typing
  TypTop, TypVar, TypSub, TypArrowI, TypArrowE, TypForallI, TypForallE,
  // term equality
  EqTop, EqRefl, EqTrans, EqSym, EqBeta1, EqEta1, EqBeta2, EqEta2,
  EqAbs1, EqAbs2, EqApp1, EqApp2,
};

std::string to_string(RuleId r);
std::optional<RuleId> rule_from_string(std::string_view s);
JudgKind rule_kind(RuleId r);
bool subtype_rule_allowed(SystemId s, RuleId r);

struct Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

struct Derivation {
  RuleId rule;
  Judgment conclusion;
  std::vector<DerivPtr> premises;
};

DerivPtr mk_deriv(RuleId rule, Judgment conclusion,
                  std::vector<DerivPtr> premises = {});
uint32_t deriv_height(const Derivation& d);
uint32_t deriv_nodes(const Derivation& d);

// --------------------------------------------------------------------------
// Well-formedness (context and type formation, plus the meet formation rule).
// --------------------------------------------------------------------------

enum class WfError : uint8_t {
  None, UnboundVariable, DuplicateBinding, ForbiddenConstruct,
};

struct WfCheck {
  bool ok = true;
  WfError error = WfError::None;
  std::string detail;

  static WfCheck good() { return {}; }
  static WfCheck bad(WfError e, std::string d) { return {false, e, std::move(d)}; }
};

WfCheck wf_context(const Context& ctx, SystemId sys);
WfCheck wf_type(const Context& ctx, TypePtr t, SystemId sys);
// Checks every annotation of `t` in its scope.
WfCheck wf_term(const Context& ctx, const TermPtr& t, SystemId sys);

// --------------------------------------------------------------------------
// Certificate checking. Axiom nodes carry their well-formation evidence via
// checker-side wf calls; interior nodes are matched purely against the rule
// schema of the declared system.
// --------------------------------------------------------------------------

struct Verdict {
  bool ok = true;
  std::string path;    // premise indices from the root, e.g. "/0/1"
  std::string reason;

  static Verdict accept() { return {}; }
  static Verdict reject(std::string path, std::string reason) {
    return {false, std::move(path), std::move(reason)};
  }
};

Verdict check_subtype_derivation(SystemId sys, const Derivation& d);
Verdict check_typing_derivation(SystemId sys, const Derivation& d);
Verdict check_equality_derivation(SystemId sys, const Derivation& d);
// Dispatches on the conclusion kind.
Verdict check_derivation(SystemId sys, const Derivation& d);

}  // namespace bq

#endif
