#ifndef LHOM_IO_RUN_HPP
#define LHOM_IO_RUN_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "lhom/io/config.hpp"
#include "lhom/io/report.hpp"

namespace lhom::io {

struct RunOutput {
  /// Deterministic part of the report: configuration echo and results.
  json science;
  /// Optional table written next to the JSON report.
  std::optional<CsvTable> table;
};

/// Executes the configured subcommand without touching the filesystem
/// (apart from field_in / field_out).
RunOutput execute(const RunConfig& config);

/// Full report document: {"science": ..., "metadata": {timestamp, host, ...}}.
json make_report(const RunConfig& config, const RunOutput& output);

/// Runs the subcommand and writes <output>.json (and <output>.csv when the
/// command produces a table). Returns the process exit status; failures are
/// reported on `err` as a JSON error document.
int run(const RunConfig& config, std::ostream& err);

/// JSON error document {"error": {"stage", "type", "message", ...}}.
json error_report(const std::string& stage, const std::exception& e);

}  // namespace lhom::io

#endif  // LHOM_IO_RUN_HPP
