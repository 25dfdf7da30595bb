#ifndef BQ_JSON_IO_HPP
#define BQ_JSON_IO_HPP

#include <stdexcept>

#include <json.hpp>

#include "bq/judgments.hpp"
#include "bq/syntax.hpp"

namespace bq {

// Key order is kept stable so that reports are byte-reproducible.
using Json = nlohmann::ordered_json;

struct JsonFormatError : std::runtime_error {
  explicit JsonFormatError(const std::string& what) : std::runtime_error(what) {}
};

Json type_to_json(TypePtr t);
TypePtr type_from_json(const Json& j);

Json term_to_json(const TermPtr& t);
TermPtr term_from_json(const Json& j);

Json ctx_to_json(const Context& ctx);
Context ctx_from_json(const Json& j);

Json judgment_to_json(const Judgment& j);
Judgment judgment_from_json(const Json& j);

Json derivation_to_json(const Derivation& d);
DerivPtr derivation_from_json(const Json& j);

}  // namespace bq

#endif
