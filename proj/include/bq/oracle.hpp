#ifndef BQ_ORACLE_HPP
#define BQ_ORACLE_HPP

#include <memory>

#include "bq/judgments.hpp"
#include "bq/syntax.hpp"
#include "bq/system.hpp"

namespace bq {

struct SearchResult {
  enum class Outcome { Found, NotFoundWithinDepth };

  Outcome outcome = Outcome::NotFoundWithinDepth;
  DerivPtr derivation;  // set when Found; checkable by check_subtype_derivation
  int depth_used = 0;
  long nodes_expanded = 0;

  bool found() const { return outcome == Outcome::Found; }
};

struct InvalidInput : std::runtime_error {
  explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

// Iterative-deepening search for a declarative subtyping derivation. Trans
// cut formulas are drawn from the subterms of the current goal, the bounds in
// scope, their exposures, and (for fwedge) pairwise meets of those.
// NotFoundWithinDepth is not a refutation.
SearchResult search_subtype(SystemId sys, const Context& ctx, TypePtr s,
                            TypePtr t, int depth);

// A session keeps the memo table alive across queries over a fixed system,
// for bulk equivalence runs. Queries are answered at the exact depth given
// (no iterative deepening); results match search_subtype's verdicts.
class SearchSession {
public:
  explicit SearchSession(SystemId sys);
  ~SearchSession();
  SearchSession(const SearchSession&) = delete;
  SearchSession& operator=(const SearchSession&) = delete;

  SearchResult query(const Context& ctx, TypePtr s, TypePtr t, int depth,
                     bool want_derivation = true);
  long nodes_expanded() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace bq

#endif
