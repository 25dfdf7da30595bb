#ifndef BQ_ENCODE_HPP
#define BQ_ENCODE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bq/oracle.hpp"
#include "bq/syntax.hpp"

namespace bq {

// Type translation into the meet calculus: kernel quantifiers substitute
// X /\ S for every occurrence of the bound variable, top-style quantifiers
// only for the negative ones. Extended homomorphically through nested
// quantifiers (bound and body are encoded first).
TypePtr encode_type(TypePtr t);

// Term translation: bounded type abstraction becomes a top-bounded
// abstraction whose body carries X /\ S in all annotations.
TermPtr encode_term(const TermPtr& t);

// Context translation for whole subtyping judgments: every bound becomes Top
// and use sites already carry the meet via the substitution above.
Context encode_judgment_context(const Context& ctx);
// Rewrites a type over `ctx` so that each bounded variable X <: S occurs as
// X /\ encode(S) at positive positions per the representation of bounded
// variables; used together with encode_judgment_context.
TypePtr encode_in_context(const Context& ctx, TypePtr t);

enum class LemmaId : uint8_t {
  KFun,        // bodies related under the bound lift through the kernel encoding
  MixedMono,   // mixed substitution is antitone/monotone in its two slots
  MixedCong,   // mixed substitution preserves subtyping of the substituted type
  TopRule,     // negative substitution is antitone in the bound
  Loc,         // kernel encoding below top-style encoding across bounds
  BetaSide,    // T[S /\ S'/X] <: T[S'/X] given S' <: S
  EtaSide,     // T[((Y/\S)/\S, Y/\S)/X] <: T[(Y/\S, Y)/X]
};

std::optional<LemmaId> lemma_from_string(std::string_view s);
std::string to_string(LemmaId id);
// Metavariables the instance must bind, in order.
std::vector<std::string> lemma_metavars(LemmaId id);

struct LemmaInstance {
  LemmaId lemma = LemmaId::KFun;
  Context ctx;
  std::string var = "X";    // the quantified variable of the statement
  std::string fresh = "Y";  // EtaSide only
  std::map<std::string, TypePtr> bindings;
};

struct LemmaOutcome {
  Judgment judgment;
  SearchResult result;
};

struct LemmaReport {
  enum class Status { Verified, PremiseNotEstablished, ConclusionNotFound };

  Status status = Status::Verified;
  std::vector<LemmaOutcome> premises;
  std::optional<LemmaOutcome> conclusion;

  bool verified() const { return status == Status::Verified; }
};

// Builds the lemma's premise and conclusion judgments from the bindings and
// discharges them with the meet-calculus oracle at the given depth.
LemmaReport verify_lemma_instance(const LemmaInstance& inst, int depth);

}  // namespace bq

#endif
