#ifndef LHOM_IO_CONFIG_HPP
#define LHOM_IO_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "lhom/ensembles.hpp"
#include "lhom/experiments.hpp"
#include "lhom/solver.hpp"

namespace lhom::io {

enum class Command {
  Corrector,
  Green,
  CheckGreenBounds,
  Homogenize,
  Moments,
  VarianceScan,
  SgCheck,
  SgPCheck,
  Decay,
  ProbeStationarity,
};

std::string to_string(Command c);
std::optional<Command> parse_command(std::string_view name);
const std::vector<std::string>& command_names();

/// Validated run configuration. Every field has a default; see README for the table.
struct RunConfig {
  Command command = Command::Corrector;
  EnsembleSpec ensemble;
  int d = 2;
  int L = 8;
  std::vector<int> Ls{8, 16, 32, 64};
  std::vector<double> xi;  // default e_1
  std::vector<double> e0;  // default e_1
  std::vector<double> e1;  // default e_1
  double p = 2.0;
  std::vector<double> q_list{1.25, 1.5, 2.0};
  int sg_p = 2;
  double sg_q = 2.0;
  int n_samples = 100;
  std::uint64_t seed = 0;
  std::uint64_t sample_index = 0;
  SolveOptions solve;
  StatisticKind statistic = StatisticKind::AhomBilinear;
  std::vector<int> source;  // default origin
  int rho0 = 2;
  int n_max = 4;
  std::string field_in;
  std::string field_out;
  std::string output = "lhom_report";
  int threads = 0;  // 0: available parallelism
};

struct ConfigIssue {
  std::string path;  // JSON pointer of the offending field, or "line:col" for syntax errors
  std::string message;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// Command-line values that take precedence over the configuration file.
struct Overrides {
  std::optional<std::string> command;
  std::optional<int> L;
  std::optional<int> d;
  std::optional<double> lambda;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<double> p;
  std::optional<std::vector<double>> q;
  std::optional<std::string> out;
  std::optional<int> threads;
};

/// Parses and validates a JSON document, reporting every problem at once.
RunConfig parse_config(std::string_view text, const Overrides& overrides = {});

/// The science-relevant configuration as JSON; output paths and thread count are left out.
nlohmann::ordered_json to_json(const RunConfig& config);

}  // namespace lhom::io

#endif  // LHOM_IO_CONFIG_HPP
