#ifndef BQ_SURFACE_HPP
#define BQ_SURFACE_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "bq/judgments.hpp"
#include "bq/syntax.hpp"
#include "bq/system.hpp"

namespace bq {

struct ParseError : std::runtime_error {
  int line;
  int column;
  std::string expected;

  ParseError(int line, int column, const std::string& expected)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(column) + ": expected " + expected),
        line(line),
        column(column),
        expected(expected) {}
};

struct SystemMismatch : std::runtime_error {
  explicit SystemMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct TypeQuery {
  TypePtr lhs;
  TypePtr rhs;
};

struct TermQuery {
  TermPtr term;
  TypePtr ascription;  // null if absent
};

struct DerivationFile {
  DerivPtr derivation;
};

struct SourceUnit {
  SystemId system = SystemId::Kt;
  Context context;
  std::variant<TypeQuery, TermQuery, DerivationFile> payload;
};

// Whole-unit parsing; header comments (`-- ...`) are skipped. Derivation
// payloads continue as JSON after the `derivation` keyword.
SourceUnit parse_source(const std::string& text);

// Standalone fragments, parsed against an ambient system for construct checks.
TypePtr parse_type(const std::string& text, SystemId sys);
TermPtr parse_term(const std::string& text, SystemId sys);
Context parse_context(const std::string& text, SystemId sys);

std::string render(TypePtr t);
std::string render(const TermPtr& t);
std::string render(const Context& ctx);
std::string render(const SourceUnit& u);
std::string describe(const Judgment& j);

}  // namespace bq

#endif
