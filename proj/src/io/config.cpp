#include "lhom/io/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace lhom::io {

using json = nlohmann::ordered_json;

namespace {

const std::vector<std::pair<Command, std::string>>& command_table() {
  static const std::vector<std::pair<Command, std::string>> table{
      {Command::Corrector, "corrector"},
      {Command::Green, "green"},
      {Command::CheckGreenBounds, "check-green-bounds"},
      {Command::Homogenize, "homogenize"},
      {Command::Moments, "moments"},
      {Command::VarianceScan, "variance-scan"},
      {Command::SgCheck, "sg-check"},
      {Command::SgPCheck, "sg-p-check"},
      {Command::Decay, "decay"},
      {Command::ProbeStationarity, "probe-stationarity"},
  };
  return table;
}

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

/// Reads typed values from a JSON object, recording problems instead of throwing.
class Reader {
 public:
  explicit Reader(std::vector<ConfigIssue>& issues) : issues_(issues) {}

  void fail(const std::string& path, const std::string& message) {
    issues_.push_back({path, message});
  }

  void check_keys(const json& obj, const std::string& path, std::set<std::string> allowed) {
    if (!obj.is_object()) return;
    for (const auto& [key, value] : obj.items()) {
      if (!allowed.count(key)) fail(path + "/" + key, "unknown field");
    }
  }

  template <typename T>
  void read(const json& obj, const std::string& key, const std::string& path, T& out) {
    if (!obj.is_object() || !obj.contains(key)) return;
    const json& v = obj.at(key);
    const std::string where = path + "/" + key;
    if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) return fail(where, "expected a string");
      out = v.get<std::string>();
    } else if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) return fail(where, "expected a number");
      out = v.get<double>();
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned()) return fail(where, "expected a non-negative integer");
      out = v.get<std::uint64_t>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) return fail(where, "expected an integer");
      out = static_cast<T>(v.get<std::int64_t>());
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      if (!v.is_array()) return fail(where, "expected an array of numbers");
      std::vector<double> tmp;
      for (const auto& x : v) {
        if (!x.is_number()) return fail(where, "expected an array of numbers");
        tmp.push_back(x.get<double>());
      }
      out = std::move(tmp);
    } else if constexpr (std::is_same_v<T, std::vector<int>>) {
      if (!v.is_array()) return fail(where, "expected an array of integers");
      std::vector<int> tmp;
      for (const auto& x : v) {
        if (!x.is_number_integer()) return fail(where, "expected an array of integers");
        tmp.push_back(x.get<int>());
      }
      out = std::move(tmp);
    }
  }

  const json& object(const json& parent, const std::string& key, const std::string& path) {
    static const json empty = json::object();
    if (!parent.is_object() || !parent.contains(key)) return empty;
    const json& v = parent.at(key);
    if (!v.is_object()) {
      fail(path + "/" + key, "expected an object");
      return empty;
    }
    return v;
  }

 private:
  std::vector<ConfigIssue>& issues_;
};

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

void apply_overrides(json& doc, const Overrides& o) {
  if (o.command) doc["command"] = *o.command;
  if (o.L) doc["lattice"]["L"] = *o.L;
  if (o.d) doc["lattice"]["d"] = *o.d;
  if (o.lambda) doc["ensemble"]["lambda"] = *o.lambda;
  if (o.seed) doc["seed"] = *o.seed;
  if (o.samples) doc["samples"] = *o.samples;
  if (o.p) doc["p"] = *o.p;
  if (o.q) doc["q"] = *o.q;
  if (o.out) doc["output"] = *o.out;
  if (o.threads) doc["threads"] = *o.threads;
}

void check_direction(Reader& r, const std::string& path, const std::vector<double>& v, int d) {
  if (static_cast<int>(v.size()) != d) {
    r.fail(path, "expected " + std::to_string(d) + " components, got " + std::to_string(v.size()));
    return;
  }
  double n2 = 0.0;
  for (double x : v) n2 += x * x;
  if (!(n2 <= 1.0 + 1e-14)) r.fail(path, "direction must satisfy |v| <= 1");
}

std::vector<double> unit_e1(int d) {
  std::vector<double> v(static_cast<std::size_t>(std::max(d, 1)), 0.0);
  v[0] = 1.0;
  return v;
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [cmd, name] : command_table()) {
    if (cmd == c) return name;
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
  for (const auto& [cmd, n] : command_table()) {
    if (n == name) return cmd;
  }
  return std::nullopt;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& entry : command_table()) v.push_back(entry.second);
    return v;
  }();
  return names;
}

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& i : issues) msg += "\n  " + i.path + ": " + i.message;
        return msg;
      }()),
      issues_(std::move(issues)) {}

RunConfig parse_config(std::string_view text, const Overrides& overrides) {
  json doc;
  try {
    doc = text.find_first_not_of(" \t\r\n") == std::string_view::npos ? json::object()
                                                                       : json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw ConfigError(std::vector<ConfigIssue>{
        {std::to_string(line) + ":" + std::to_string(col), "syntax error: " + std::string(e.what())}});
  }
  if (!doc.is_object()) throw ConfigError(std::vector<ConfigIssue>{{"", "top-level JSON value must be an object"}});
  apply_overrides(doc, overrides);

  std::vector<ConfigIssue> issues;
  Reader r(issues);
  RunConfig c;

  r.check_keys(doc, "",
               {"command", "ensemble", "lattice", "xi", "e0", "e1", "p", "q", "sg_p", "sg_q",
                "samples", "seed", "sample_index", "solver", "statistic", "source", "rho0",
                "n_max", "field_in", "field_out", "output", "threads"});

  std::string command = to_string(c.command);
  r.read(doc, "command", "", command);
  if (auto cmd = parse_command(command)) {
    c.command = *cmd;
  } else {
    std::string list;
    for (const auto& n : command_names()) list += (list.empty() ? "" : ", ") + n;
    r.fail("/command", "unknown command '" + command + "' (expected one of: " + list + ")");
  }

  // ensemble
  const json& ens = r.object(doc, "ensemble", "");
  r.check_keys(ens, "/ensemble", {"kind", "lambda", "alpha", "beta", "p", "intensity", "radius"});
  std::string kind = to_string(c.ensemble.kind);
  r.read(ens, "kind", "/ensemble", kind);
  if (kind == "iid_uniform") {
    c.ensemble.kind = EnsembleKind::IIDUniform;
  } else if (kind == "bernoulli") {
    c.ensemble.kind = EnsembleKind::Bernoulli;
  } else if (kind == "poisson_inclusions") {
    c.ensemble.kind = EnsembleKind::PoissonInclusions;
  } else {
    r.fail("/ensemble/kind",
           "unknown ensemble '" + kind + "' (expected iid_uniform, bernoulli, poisson_inclusions)");
  }
  r.read(ens, "lambda", "/ensemble", c.ensemble.lambda);
  r.read(ens, "alpha", "/ensemble", c.ensemble.alpha);
  r.read(ens, "beta", "/ensemble", c.ensemble.beta);
  r.read(ens, "p", "/ensemble", c.ensemble.p);
  r.read(ens, "intensity", "/ensemble", c.ensemble.intensity);
  r.read(ens, "radius", "/ensemble", c.ensemble.radius);
  if (!(c.ensemble.lambda > 0.0 && c.ensemble.lambda <= 1.0)) {
    r.fail("/ensemble/lambda",
           num(c.ensemble.lambda) + " outside the admissible range (0, 1] for lambda");
  } else {
    for (const auto& msg : c.ensemble.validate()) r.fail("/ensemble", msg);
  }

  // lattice
  const json& lat = r.object(doc, "lattice", "");
  r.check_keys(lat, "/lattice", {"d", "L", "Ls"});
  r.read(lat, "d", "/lattice", c.d);
  r.read(lat, "L", "/lattice", c.L);
  r.read(lat, "Ls", "/lattice", c.Ls);
  const bool d_ok = c.d >= 1 && c.d <= TorusLattice::kMaxDim;
  if (!d_ok) {
    r.fail("/lattice/d", std::to_string(c.d) + " outside [1, " +
                             std::to_string(TorusLattice::kMaxDim) + "]");
  }
  if (c.L < 2) r.fail("/lattice/L", std::to_string(c.L) + " must be >= 2");
  for (int L : c.Ls) {
    if (L < 2) r.fail("/lattice/Ls", "every size must be >= 2, got " + std::to_string(L));
  }

  // directions
  c.xi = c.e0 = c.e1 = unit_e1(c.d);
  r.read(doc, "xi", "", c.xi);
  r.read(doc, "e0", "", c.e0);
  r.read(doc, "e1", "", c.e1);
  if (d_ok) {
    check_direction(r, "/xi", c.xi, c.d);
    check_direction(r, "/e0", c.e0, c.d);
    check_direction(r, "/e1", c.e1, c.d);
  }

  r.read(doc, "p", "", c.p);
  if (!(c.p >= 1.0) || !std::isfinite(c.p)) r.fail("/p", "moment exponent must be >= 1");
  r.read(doc, "q", "", c.q_list);
  for (double q : c.q_list) {
    if (!(q > 1.0 && q <= 2.0)) r.fail("/q", "exponent " + num(q) + " outside (1, 2]");
  }
  r.read(doc, "sg_p", "", c.sg_p);
  if (c.sg_p < 1) r.fail("/sg_p", "must be >= 1");
  r.read(doc, "sg_q", "", c.sg_q);
  if (!(c.sg_q > 1.0 && c.sg_q <= 2.0)) r.fail("/sg_q", num(c.sg_q) + " outside (1, 2]");

  r.read(doc, "samples", "", c.n_samples);
  r.read(doc, "seed", "", c.seed);
  r.read(doc, "sample_index", "", c.sample_index);
  r.read(doc, "threads", "", c.threads);
  if (c.threads < 0) r.fail("/threads", "must be >= 0");

  const json& solver = r.object(doc, "solver", "");
  r.check_keys(solver, "/solver", {"rel_tol", "max_iter"});
  r.read(solver, "rel_tol", "/solver", c.solve.rel_tol);
  r.read(solver, "max_iter", "/solver", c.solve.max_iter);
  if (!(c.solve.rel_tol > 0.0 && c.solve.rel_tol <= 1e-6)) {
    r.fail("/solver/rel_tol", num(c.solve.rel_tol) + " outside (0, 1e-6]");
  }
  if (c.solve.max_iter < 0) r.fail("/solver/max_iter", "must be >= 1, or 0 for automatic");

  std::string statistic = to_string(c.statistic);
  r.read(doc, "statistic", "", statistic);
  if (statistic == "ahom") {
    c.statistic = StatisticKind::AhomBilinear;
  } else if (statistic == "energy_density") {
    c.statistic = StatisticKind::EnergyDensity;
  } else if (statistic == "corrector_gradient") {
    c.statistic = StatisticKind::CorrectorGradient;
  } else {
    r.fail("/statistic", "unknown statistic '" + statistic +
                             "' (expected ahom, energy_density, corrector_gradient)");
  }

  c.source.assign(static_cast<std::size_t>(std::max(c.d, 1)), 0);
  r.read(doc, "source", "", c.source);
  if (d_ok && static_cast<int>(c.source.size()) != c.d) {
    r.fail("/source", "expected " + std::to_string(c.d) + " coordinates");
  }

  r.read(doc, "rho0", "", c.rho0);
  r.read(doc, "n_max", "", c.n_max);
  r.read(doc, "field_in", "", c.field_in);
  r.read(doc, "field_out", "", c.field_out);
  r.read(doc, "output", "", c.output);
  if (c.output.empty()) r.fail("/output", "must not be empty");

  // command-specific preconditions
  switch (c.command) {
    case Command::Moments:
      if (c.n_samples < 2) r.fail("/samples", "moments needs at least 2 samples");
      break;
    case Command::VarianceScan:
      if (c.n_samples < 3) r.fail("/samples", "variance-scan needs at least 3 samples");
      if (std::set<int>(c.Ls.begin(), c.Ls.end()).size() < 3) {
        r.fail("/lattice/Ls", "variance-scan needs at least 3 distinct sizes");
      }
      break;
    case Command::ProbeStationarity:
      if (c.n_samples < 100) r.fail("/samples", "probe-stationarity needs at least 100 samples");
      break;
    case Command::SgCheck:
    case Command::SgPCheck:
      if (c.ensemble.kind != EnsembleKind::Bernoulli) {
        r.fail("/ensemble/kind", "spectral-gap enumeration needs the bernoulli ensemble");
      }
      if (d_ok && c.L >= 2 && std::pow(static_cast<double>(c.L), c.d) * c.d > 20) {
        r.fail("/lattice", "enumeration limited to 20 edges (d * L^d)");
      }
      break;
    case Command::Decay:
      if (c.rho0 < 1) r.fail("/rho0", "must be >= 1");
      if (c.n_max < 1) r.fail("/n_max", "must be >= 1");
      if (c.rho0 >= 1 && c.n_max >= 1 && std::ldexp(double(c.rho0), c.n_max) > c.L / 2.0) {
        r.fail("/n_max", "2^n_max * rho0 must not exceed L/2");
      }
      break;
    default:
      break;
  }

  if (!issues.empty()) throw ConfigError(std::move(issues));
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  j["command"] = to_string(c.command);
  json ens;
  ens["kind"] = to_string(c.ensemble.kind);
  ens["lambda"] = c.ensemble.lambda;
  if (c.ensemble.kind != EnsembleKind::IIDUniform) {
    ens["alpha"] = c.ensemble.alpha;
    ens["beta"] = c.ensemble.beta;
  }
  if (c.ensemble.kind == EnsembleKind::Bernoulli) ens["p"] = c.ensemble.p;
  if (c.ensemble.kind == EnsembleKind::PoissonInclusions) {
    ens["intensity"] = c.ensemble.intensity;
    ens["radius"] = c.ensemble.radius;
  }
  j["ensemble"] = ens;
  j["lattice"] = {{"d", c.d}, {"L", c.L}, {"Ls", c.Ls}};
  j["xi"] = c.xi;
  j["e0"] = c.e0;
  j["e1"] = c.e1;
  j["p"] = c.p;
  j["q"] = c.q_list;
  j["sg_p"] = c.sg_p;
  j["sg_q"] = c.sg_q;
  j["samples"] = c.n_samples;
  j["seed"] = c.seed;
  j["sample_index"] = c.sample_index;
  j["solver"] = {{"rel_tol", c.solve.rel_tol}, {"max_iter", c.solve.max_iter}};
  j["statistic"] = to_string(c.statistic);
  j["source"] = c.source;
  j["rho0"] = c.rho0;
  j["n_max"] = c.n_max;
  j["field_in"] = c.field_in;
  return j;
}

}  // namespace lhom::io
