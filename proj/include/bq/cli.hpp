#ifndef BQ_CLI_HPP
#define BQ_CLI_HPP

#include <string>
#include <vector>

#include "bq/json_io.hpp"

namespace bq {

struct Report {
  enum class V { Accept, Reject, Found, NotFound, Error };

  std::string command;
  V verdict = V::Error;
  Json details = Json::object();
  int exit_code = 2;
};

std::string verdict_string(Report::V v);
Json report_to_json(const Report& r);
std::string report_human(const Report& r);

// Dispatches one subcommand invocation (argv without the program name).
// Never throws; malformed input yields an Error report.
Report run_command(const std::vector<std::string>& args);

// Full CLI entry: prints the report (JSON with --json) and returns the exit
// code.
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace bq

#endif
