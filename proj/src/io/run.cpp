#include "lhom/io/run.hpp"

#include <unistd.h>

#include <chrono>
#include <ctime>
#include <ostream>

#include "lhom/io/field_io.hpp"
#include "lhom/parallel.hpp"

namespace lhom::io {

namespace {

int thread_count(const RunConfig& c) { return c.threads > 0 ? c.threads : default_threads(); }

CoefficientField acquire_field(const RunConfig& c) {
  if (!c.field_in.empty()) return load_field(c.field_in);
  return sample(c.ensemble, TorusLattice(c.d, c.L), {c.seed, c.sample_index});
}

json field_summary(const CoefficientField& a) {
  return {{"d", a.lattice().dim()},
          {"L", a.lattice().side()},
          {"lambda", a.lambda()},
          {"min", a.values().minCoeff()},
          {"max", a.values().maxCoeff()},
          {"mean", a.values().mean()}};
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hostname() {
  char buf[256] = {};
  if (::gethostname(buf, sizeof buf - 1) != 0) return "unknown";
  return buf;
}

}  // namespace

RunOutput execute(const RunConfig& c) {
  RunOutput out;
  json result;
  const int threads = thread_count(c);

  switch (c.command) {
    case Command::Corrector: {
      const CoefficientField a = acquire_field(c);
      if (!c.field_out.empty()) dump_field(a, c.field_out);
      const Corrector phi = solve_corrector(a, c.xi, c.solve);
      result["field"] = field_summary(a);
      result["residual"] = phi.residual;
      result["iterations"] = phi.iterations;
      result["grad_phi_norm"] = gradient(a.lattice(), phi.phi).norm();
      result["phi_max_abs"] = phi.phi.cwiseAbs().maxCoeff();
      result["energy_density"] = energy_density(a, phi);
      result["flux"] = vector_json(averaged_flux(a, phi));
      break;
    }
    case Command::Green: {
      const CoefficientField a = acquire_field(c);
      if (!c.field_out.empty()) dump_field(a, c.field_out);
      const TorusLattice& lat = a.lattice();
      const Index y = lat.site_index(c.source);
      const GreenColumn g = green_column(a, y, c.solve);
      SiteField rhs = SiteField::Constant(lat.num_sites(), -1.0 / double(lat.num_sites()));
      rhs(y) += 1.0;
      result["field"] = field_summary(a);
      result["source"] = c.source;
      result["residual"] = (apply_operator(a, g.G) - rhs).norm() / rhs.norm();
      result["G_at_source"] = g.G(y);
      result["G_min"] = g.G.minCoeff();
      result["G_max"] = g.G.maxCoeff();
      std::vector<std::string> header;
      for (int i = 0; i < lat.dim(); ++i) header.push_back("x" + std::to_string(i + 1));
      header.push_back("G");
      CsvTable table(header);
      for (Index x = 0; x < lat.num_sites(); ++x) {
        std::vector<double> row;
        for (int v : lat.coords(x)) row.push_back(v);
        row.push_back(g.G(x));
        table.add_row(row);
      }
      out.table = std::move(table);
      break;
    }
    case Command::CheckGreenBounds: {
      const CoefficientField a = acquire_field(c);
      if (!c.field_out.empty()) dump_field(a, c.field_out);
      result["field"] = field_summary(a);
      result["bounds"] = to_json(check_mixed_bounds(a, c.solve, 1e-6, threads));
      break;
    }
    case Command::Homogenize: {
      const CoefficientField a = acquire_field(c);
      if (!c.field_out.empty()) dump_field(a, c.field_out);
      const HomogenizedMatrix h = homogenized_matrix(a, c.solve);
      result["field"] = field_summary(a);
      result["homogenized"] = to_json(h);
      json bounds = json::array();
      for (int i = 0; i < a.lattice().dim(); ++i) {
        const AxisBounds b = axis_bounds(a, i);
        bounds.push_back({{"axis", i + 1}, {"harmonic", b.harmonic}, {"arithmetic", b.arithmetic}});
      }
      result["axis_bounds"] = bounds;
      break;
    }
    case Command::Moments: {
      const MomentReport r = moment_estimate(c.ensemble, TorusLattice(c.d, c.L), c.xi, c.p,
                                             c.n_samples, c.seed, c.solve, threads);
      result["moments"] = to_json(r);
      break;
    }
    case Command::VarianceScan: {
      const VarianceReport r = variance_scan(c.ensemble, c.d, c.Ls, c.e0, c.e1, c.n_samples,
                                             c.seed, c.solve, threads);
      result["variance"] = to_json(r);
      out.table = to_csv(r);
      break;
    }
    case Command::SgCheck:
    case Command::SgPCheck: {
      Statistic stat = Statistic::axis(c.statistic, c.d);
      stat.e0 = c.e0;
      stat.e1 = c.e1;
      stat.xi = c.xi;
      const TorusLattice lat(c.d, c.L);
      const auto zeta =
          enumerate_statistic(c.ensemble.alpha, c.ensemble.beta, lat, stat, c.solve, threads);
      std::optional<std::pair<int, double>> pc;
      if (c.command == Command::SgPCheck) pc = std::make_pair(c.sg_p, c.sg_q);
      const SGReport r = analyze_enumeration(zeta, static_cast<int>(lat.num_edges()),
                                             c.ensemble.p, c.q_list, pc);
      result["statistic"] = to_string(c.statistic);
      result["sg"] = to_json(r);
      out.table = to_csv(r);
      break;
    }
    case Command::Decay: {
      const CoefficientField a = acquire_field(c);
      if (!c.field_out.empty()) dump_field(a, c.field_out);
      const DecayReport r = decay_probe(a, c.rho0, c.n_max, c.solve);
      result["field"] = field_summary(a);
      result["decay"] = to_json(r);
      out.table = to_csv(r);
      break;
    }
    case Command::ProbeStationarity: {
      const TorusLattice lat(c.d, c.L);
      const StationarityTable t = stationarity_probe(c.ensemble, lat, c.n_samples, c.seed);
      result["stationarity"] = to_json(t);
      CsvTable table({"edge", "mean", "std_error"});
      for (std::size_t e = 0; e < t.mean.size(); ++e) {
        table.add_row({double(e), t.mean[e], t.std_error[e]});
      }
      out.table = std::move(table);
      break;
    }
  }

  out.science = {{"config", to_json(c)}, {"result", result}};
  return out;
}

json make_report(const RunConfig& config, const RunOutput& output) {
  json meta = {{"command", to_string(config.command)},
               {"timestamp", timestamp()},
               {"host", hostname()},
               {"threads", thread_count(config)}};
  return {{"science", output.science}, {"metadata", meta}};
}

json error_report(const std::string& stage, const std::exception& e) {
  json err = {{"stage", stage}, {"message", e.what()}};
  if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) {
    json issues = json::array();
    for (const auto& i : ce->issues()) issues.push_back({{"path", i.path}, {"message", i.message}});
    err["type"] = "config";
    err["issues"] = issues;
  } else if (const auto* se = dynamic_cast<const SolveError*>(&e)) {
    err["type"] = "solver";
    err["residual"] = se->residual();
    err["iterations"] = se->iterations();
  } else if (dynamic_cast<const IoError*>(&e)) {
    err["type"] = "io";
  } else if (dynamic_cast<const InvalidArgument*>(&e)) {
    err["type"] = "invalid_argument";
  } else {
    err["type"] = "internal";
  }
  return {{"error", err}};
}

int run(const RunConfig& config, std::ostream& err) {
  RunOutput output;
  try {
    output = execute(config);
  } catch (const std::exception& e) {
    err << dump_json(error_report(to_string(config.command), e));
    return 2;
  }
  try {
    write_atomically(config.output + ".json", dump_json(make_report(config, output)));
    if (output.table) write_atomically(config.output + ".csv", output.table->str());
  } catch (const std::exception& e) {
    err << dump_json(error_report("write", e));
    return 3;
  }
  return 0;
}

}  // namespace lhom::io
