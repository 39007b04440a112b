// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "lhom/experiments.hpp"
#include "lhom/green.hpp"
#include "lhom/io/report.hpp"
#include "lhom/io/run.hpp"
#include "lhom/parallel.hpp"
#include "oracles.hpp"

using namespace lhom;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const int kThreads = default_threads();

// Samples checked for the weak-form identity and effective bounds, filled by 4-6.
SampleChecks g_checks;

void absorb(const SampleChecks& c) {
  g_checks.checked += c.checked;
  g_checks.bounds_checked += c.bounds_checked;
  g_checks.bound_violations += c.bound_violations;
  g_checks.max_weak_form_defect = std::max(g_checks.max_weak_form_defect, c.max_weak_form_defect);
  g_checks.max_residual = std::max(g_checks.max_residual, c.max_residual);
}

Outcome green_bounds() {
  const TorusLattice lat(2, 8);
  const auto spec = EnsembleSpec::bernoulli(0.25, 1.0, 0.5);
  double worst_col = 0.0, worst_row = 0.0;
  bool ok = true;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const MixedBoundsReport r = check_mixed_bounds(sample(spec, lat, {1001, s}), {}, 1e-6, kThreads);
    ok = ok && r.column_bound_holds && r.row_bound_holds;
    worst_col = std::max(worst_col, r.max_column_sum);
    worst_row = std::max(worst_row, r.max_row_sum);
  }
  ok = ok && worst_col <= 16.0 * (1 + 1e-6) && worst_row <= 16.0 * (1 + 1e-6);
  return {ok, fmt("max column sum %.6f, max row sum %.6f, bound 16", worst_col, worst_row)};
}

Outcome sensitivity() {
  const TorusLattice lat(2, 8);
  const CounterRng pick({2002, 0});
  const std::vector<double> xi = {1.0, 0.0};
  double worst = 0.0;
  bool ok = true;
  for (int t = 0; t < 50; ++t) {
    const CoefficientField a =
        sample(EnsembleSpec::iid_uniform(0.25), lat, {2002, static_cast<std::uint64_t>(t)});
    const Edge e = lat.edge(static_cast<Index>(pick.bits(1, t) % lat.num_edges()));
    // half the triples probe b near e, where the response is largest
    Edge b;
    if (t % 2 == 0) {
      b = lat.edge(static_cast<Index>(pick.bits(2, t) % lat.num_edges()));
    } else {
      std::vector<int> off = {static_cast<int>(pick.bits(3, t) % 3) - 1,
                              static_cast<int>(pick.bits(4, t) % 3) - 1};
      b = {lat.translate(e.site, off), static_cast<int>(pick.bits(5, t) % 2)};
    }
    const Corrector phi = solve_corrector(a, xi);
    const double formula = sensitivity_green(a, phi, e, b);
    const double fd = finite_difference_sensitivity(a, xi, e, b, 1e-6);
    const double err = std::abs(formula - fd);
    const double tol = std::max(1e-4 * std::abs(fd), 1e-8);
    ok = ok && err <= tol;
    worst = std::max(worst, err / tol);
  }
  return {ok, fmt("50 triples, worst error / tolerance %.3e", worst)};
}

Outcome constant_oracle() {
  const int L = 8;
  const TorusLattice lat(2, L);
  const CoefficientField one = CoefficientField::constant(lat, 1.0, 1.0);
  double phi_max = 0.0;
  for (int i = 0; i < 2; ++i) {
    std::vector<double> xi(2, 0.0);
    xi[i] = 1.0;
    phi_max = std::max(phi_max, solve_corrector(one, xi).phi.cwiseAbs().maxCoeff());
  }
  double worst = 0.0;
  for (Index y : {Index(0), Index(27)}) {
    const GreenColumn g = green_column(one, y);
    for (Index x = 0; x < lat.num_sites(); ++x) {
      const double ref = oracle::green(oracle::coords(x, 2, L), oracle::coords(y, 2, L), L);
      worst = std::max(worst, std::abs(g.G(x) - ref));
    }
  }
  return {phi_max <= 1e-12 && worst <= 1e-8,
          fmt("max |phi| %.2e, max |G - G_dft| %.2e", phi_max, worst)};
}

Outcome harmonic_1d() {
  double worst = 0.0;
  SampleChecks checks;
  for (int t = 0; t < 10; ++t) {
    const int L = 16 + 5 * t;
    const TorusLattice lat(1, L);
    const CoefficientField a =
        sample(EnsembleSpec::iid_uniform(0.25), lat, {4004, static_cast<std::uint64_t>(t)});
    std::vector<double> v(a.values().data(), a.values().data() + L);
    const double hm = oracle::harmonic_mean(v);
    const HomogenizedMatrix h = homogenized_matrix(a);
    worst = std::max(worst, std::abs(h.A(0, 0) - hm) / hm);

    const std::vector<double> xi = {1.0};
    const Corrector c = solve_corrector(a, xi);
    const double e = energy_density(a, c);
    const AxisBounds b = axis_bounds(a, 0);
    ++checks.checked;
    ++checks.bounds_checked;
    checks.max_weak_form_defect = std::max(checks.max_weak_form_defect, std::abs(e - h.A(0, 0)) / e);
    if (!(b.harmonic * (1 - 1e-9) <= h.A(0, 0) && h.A(0, 0) <= b.arithmetic * (1 + 1e-9))) {
      ++checks.bound_violations;
    }
  }
  absorb(checks);
  return {worst <= 1e-10, fmt("10 fields, L in [16, 61], max relative error %.2e", worst)};
}

Outcome variance_scaling() {
  const auto spec = EnsembleSpec::bernoulli(0.25, 1.0, 0.5);
  const std::vector<double> e2 = {1.0, 0.0}, e3 = {1.0, 0.0, 0.0};
  const std::vector<int> L2 = {8, 16, 32, 64}, L3 = {4, 8, 16};
  const VarianceReport r2 = variance_scan(spec, 2, L2, e2, e2, 1000, 5005, {}, kThreads);
  const VarianceReport r3 = variance_scan(spec, 3, L3, e3, e3, 500, 5006, {}, kThreads);
  absorb(r2.checks);
  absorb(r3.checks);
  const double s2 = r2.slope.value_or(NAN), s3 = r3.slope.value_or(NAN);
  const bool ok = s2 >= -2.4 && s2 <= -1.6 && s3 >= -3.6 && s3 <= -2.4;
  return {ok, fmt("d=2 slope %.3f +- %.3f in [-2.4, -1.6]; d=3 slope %.3f +- %.3f in [-3.6, -2.4]",
                  s2, r2.slope_se.value_or(NAN), s3, r3.slope_se.value_or(NAN))};
}

Outcome moment_stability() {
  const auto spec = EnsembleSpec::bernoulli(0.25, 1.0, 0.5);
  const std::vector<double> xi = {1.0, 0.0};
  const MomentReport small =
      moment_estimate(spec, TorusLattice(2, 8), xi, 2.0, 1000, 6006, {}, kThreads);
  const MomentReport large =
      moment_estimate(spec, TorusLattice(2, 32), xi, 2.0, 1000, 6007, {}, kThreads);
  absorb(small.checks);
  absorb(large.checks);
  const double rel = std::abs(small.ratio - large.ratio) / large.ratio;
  return {rel <= 0.15, fmt("ratio L=8 %.5f +- %.5f, L=32 %.5f +- %.5f, relative gap %.4f",
                           small.ratio, small.ratio_se, large.ratio, large.ratio_se, rel)};
}

Outcome spectral_gap() {
  const TorusLattice lat(2, 2);
  const std::vector<double> qs = {1.25, 1.5, 2.0};
  bool ok = true;
  std::string detail;
  for (auto kind : {StatisticKind::AhomBilinear, StatisticKind::EnergyDensity}) {
    const auto zeta = enumerate_statistic(0.25, 1.0, lat, Statistic::axis(kind, 2), {}, kThreads);
    const SGReport r = analyze_enumeration(zeta, 8, 0.5, qs, std::make_pair(2, 2.0));
    const bool es = r.variance <= r.efron_stein;
    const bool mono = r.osc_moments[0].value >= r.osc_moments[1].value &&
                      r.osc_moments[1].value >= r.osc_moments[2].value;
    const bool finite = r.p_check && r.p_check->ratio && std::isfinite(*r.p_check->ratio);
    ok = ok && es && mono && finite && r.configurations == 256;
    detail += fmt("%s: var %.4e <= ES %.4e, q-monotone %s, p=2 constant %.4e; ",
                  to_string(kind).c_str(), r.variance, r.efron_stein, mono ? "yes" : "no",
                  finite ? *r.p_check->ratio : NAN);
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

Outcome weak_form() {
  const bool ok = g_checks.checked > 0 && g_checks.max_weak_form_defect <= 1e-8 &&
                  g_checks.bound_violations == 0 && g_checks.bounds_checked == g_checks.checked;
  return {ok, fmt("%d samples, max defect %.2e, bound violations %d of %d", g_checks.checked,
                  g_checks.max_weak_form_defect, g_checks.bound_violations,
                  g_checks.bounds_checked)};
}

Outcome hole_filling() {
  const TorusLattice lat(2, 64);
  const auto spec = EnsembleSpec::bernoulli(0.25, 1.0, 0.5);
  std::vector<DecayReport> reports(20);
  parallel_for(reports.size(), kThreads, [&](std::size_t s) {
    reports[s] = decay_probe(sample(spec, lat, {9009, s}), 2, 4);
  });
  bool ok = true;
  double max_ratio = 0.0, min_alpha = INFINITY;
  for (const auto& r : reports) {
    for (std::size_t n = 0; n + 1 < r.energies.size(); ++n) {
      ok = ok && r.energies[n] <= r.energies[n + 1];
    }
    ok = ok && r.max_ratio < 1.0 && r.alpha_bar > 0.0;
    max_ratio = std::max(max_ratio, r.max_ratio);
    min_alpha = std::min(min_alpha, r.alpha_bar);
  }
  return {ok, fmt("20 samples, max a_n/a_{n+1} %.4f, min alpha_bar %.4f", max_ratio, min_alpha)};
}

Outcome determinism() {
  const std::vector<std::string> configs = {
      R"({"command": "check-green-bounds", "seed": 1001, "lattice": {"L": 8}})",
      R"({"command": "corrector", "ensemble": {"kind": "bernoulli", "alpha": 1, "beta": 1, "lambda": 1}})",
      R"({"command": "homogenize", "lattice": {"d": 1, "L": 32}, "ensemble": {"kind": "iid_uniform"}})",
      R"({"command": "variance-scan", "lattice": {"Ls": [8, 16, 32, 64]}, "samples": 40, "seed": 5005})",
      R"({"command": "moments", "lattice": {"L": 32}, "samples": 60, "seed": 6007})",
      R"({"command": "sg-p-check", "lattice": {"L": 2}})",
      R"({"command": "decay", "lattice": {"L": 64}, "seed": 9009})",
      R"({"command": "probe-stationarity", "lattice": {"L": 8}, "samples": 200,
          "ensemble": {"kind": "poisson_inclusions", "alpha": 0.25, "beta": 1}})",
  };
  int identical = 0;
  for (const auto& text : configs) {
    io::Overrides serial, parallel;
    serial.threads = 1;
    parallel.threads = std::max(2, kThreads);
    const std::string a = io::dump_json(io::execute(io::parse_config(text, serial)).science);
    const std::string b = io::dump_json(io::execute(io::parse_config(text, serial)).science);
    const std::string c = io::dump_json(io::execute(io::parse_config(text, parallel)).science);
    if (a == b && a == c) ++identical;
  }
  const int n = static_cast<int>(configs.size());
  return {identical == n,
          fmt("%d of %d commands byte-identical across reruns and thread counts", identical, n)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"green function bounds", green_bounds},
      {"sensitivity vs finite differences", sensitivity},
      {"constant-coefficient oracle", constant_oracle},
      {"1-D harmonic mean", harmonic_1d},
      {"variance scaling", variance_scaling},
      {"moment-ratio stability", moment_stability},
      {"exhaustive spectral gap", spectral_gap},
      {"weak-form identity and bounds", weak_form},
      {"hole-filling decay", hole_filling},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s %zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", k + 1,
                criteria[k].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
