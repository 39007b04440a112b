#include "lhom/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "lhom/parallel.hpp"
#include "lhom/stats.hpp"

namespace lhom {

namespace {

/// Index of the axis when xi is a signed unit basis vector, else -1.
int axis_of(std::span<const double> xi) {
  int axis = -1;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (xi[i] == 0.0) continue;
    if (std::abs(xi[i]) != 1.0 || axis >= 0) return -1;
    axis = static_cast<int>(i);
  }
  return axis;
}

double dot(std::span<const double> u, const Eigen::VectorXd& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v(static_cast<Index>(i));
  return s;
}

struct CheckSample {
  double weak_form_defect = 0.0;
  bool bounds_checked = false;
  bool bounds_ok = true;
  double residual = 0.0;
};

/// Weak-form identity and series/parallel bounds for one solved corrector.
CheckSample check_sample(const CoefficientField& a, const Corrector& c,
                         const Eigen::VectorXd& flux) {
  CheckSample s;
  s.residual = c.residual;
  const double energy = energy_density(a, c);
  const double quad = dot(c.xi, flux);
  if (energy > 0.0) s.weak_form_defect = std::abs(quad - energy) / energy;
  const int axis = axis_of(c.xi);
  if (axis >= 0) {
    const AxisBounds b = axis_bounds(a, axis);
    const double slack = 1e-9;
    s.bounds_checked = true;
    s.bounds_ok = b.harmonic * (1.0 - slack) <= quad && quad <= b.arithmetic * (1.0 + slack);
  }
  return s;
}

void merge(SampleChecks& into, const CheckSample& s) {
  ++into.checked;
  into.max_weak_form_defect = std::max(into.max_weak_form_defect, s.weak_form_defect);
  into.max_residual = std::max(into.max_residual, s.residual);
  if (s.bounds_checked) {
    ++into.bounds_checked;
    if (!s.bounds_ok) ++into.bound_violations;
  }
}

void check_direction(std::span<const double> v, int d, const char* name) {
  if (static_cast<int>(v.size()) != d) {
    throw InvalidArgument(std::string(name) + " must have " + std::to_string(d) + " components");
  }
  double n2 = 0.0;
  for (double x : v) n2 += x * x;
  if (!(n2 <= 1.0 + 1e-14)) throw InvalidArgument(std::string(name) + " must satisfy |v| <= 1");
}

}  // namespace

MomentReport moment_estimate(const EnsembleSpec& spec, const TorusLattice& lattice,
                             std::span<const double> xi, double p, int n_samples,
                             std::uint64_t master_seed, const SolveOptions& opts, int threads) {
  spec.check();
  check_direction(xi, lattice.dim(), "xi");
  if (!(p >= 1.0)) throw InvalidArgument("moment exponent p must be >= 1");
  if (n_samples < 2) throw InvalidArgument("moment_estimate needs n_samples >= 2");

  struct Sample {
    double high = 0.0;  // L^{-d} sum_b |grad phi + xi|^{2p}
    double low = 0.0;   // L^{-d} sum_b |grad phi + xi|^2
    CheckSample check;
  };
  std::vector<Sample> samples(static_cast<std::size_t>(n_samples));
  const auto n_sites = static_cast<double>(lattice.num_sites());

  parallel_for(samples.size(), threads, [&](std::size_t s) {
    const CoefficientField a = sample(spec, lattice, {master_seed, s});
    const Corrector c = solve_corrector(a, xi, opts);
    const EdgeField g = corrected_gradient(a, c);
    samples[s].high = g.array().abs().pow(2.0 * p).sum() / n_sites;
    samples[s].low = g.squaredNorm() / n_sites;
    samples[s].check = check_sample(a, c, averaged_flux(a, c));
  });

  MomentReport r;
  r.p = p;
  r.L = lattice.side();
  r.d = lattice.dim();
  r.n_samples = n_samples;
  r.xi.assign(xi.begin(), xi.end());

  std::vector<double> high(samples.size()), low(samples.size());
  for (std::size_t s = 0; s < samples.size(); ++s) {
    high[s] = samples[s].high;
    low[s] = samples[s].low;
    merge(r.checks, samples[s].check);
  }
  const double mh = stats::mean(high);
  const double ml = stats::mean(low);
  r.estimate = std::pow(mh, 1.0 / p);
  r.F2 = ml;
  r.ratio = ml > 0.0 ? r.estimate / ml : 0.0;

  const auto loo_h = stats::leave_one_out_means(high);
  const auto loo_l = stats::leave_one_out_means(low);
  std::vector<double> loo_est(samples.size()), loo_ratio(samples.size());
  for (std::size_t s = 0; s < samples.size(); ++s) {
    loo_est[s] = std::pow(loo_h[s], 1.0 / p);
    loo_ratio[s] = loo_l[s] > 0.0 ? loo_est[s] / loo_l[s] : 0.0;
  }
  r.estimate_se = stats::jackknife_se(loo_est);
  r.F2_se = stats::jackknife_se(loo_l);
  r.ratio_se = stats::jackknife_se(loo_ratio);
  return r;
}

VarianceReport variance_scan(const EnsembleSpec& spec, int d, std::span<const int> Ls,
                             std::span<const double> e0, std::span<const double> e1,
                             int n_samples, std::uint64_t master_seed, const SolveOptions& opts,
                             int threads) {
  spec.check();
  check_direction(e0, d, "e0");
  check_direction(e1, d, "e1");
  if (std::set<int>(Ls.begin(), Ls.end()).size() < 3) {
    throw InvalidArgument("variance_scan needs at least 3 distinct lattice sizes");
  }
  if (n_samples < 3) throw InvalidArgument("variance_scan needs n_samples >= 3");

  VarianceReport r;
  r.d = d;
  r.e0.assign(e0.begin(), e0.end());
  r.e1.assign(e1.begin(), e1.end());

  std::vector<double> log_l, log_var, weight;
  for (int L : Ls) {
    const TorusLattice lattice(d, L);
    const std::uint64_t seed = derive_seed(master_seed, static_cast<std::uint64_t>(L));
    std::vector<double> zeta(static_cast<std::size_t>(n_samples));
    std::vector<CheckSample> checks(zeta.size());
    parallel_for(zeta.size(), threads, [&](std::size_t s) {
      const CoefficientField a = sample(spec, lattice, {seed, s});
      const Corrector c = solve_corrector(a, e1, opts);
      const Eigen::VectorXd flux = averaged_flux(a, c);
      zeta[s] = dot(e0, flux);
      checks[s] = check_sample(a, c, flux);
    });
    for (const auto& c : checks) merge(r.checks, c);

    VarianceRow row;
    row.L = L;
    row.n_samples = n_samples;
    row.mean = stats::mean(zeta);
    row.variance = stats::sample_variance(zeta);
    row.variance_se = stats::jackknife_se(stats::leave_one_out_variances(zeta));
    r.rows.push_back(row);

    if (row.variance > 0.0 && row.variance_se > 0.0) {
      const double rel = row.variance_se / row.variance;
      log_l.push_back(std::log(static_cast<double>(L)));
      log_var.push_back(std::log(row.variance));
      weight.push_back(1.0 / (rel * rel));
    }
  }

  if (log_l.size() >= 3) {
    if (auto fit = stats::weighted_line_fit(log_l, log_var, weight)) {
      r.slope = fit->slope;
      r.slope_se = fit->slope_se;
    }
  }
  return r;
}

std::string to_string(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::AhomBilinear:
      return "ahom";
    case StatisticKind::EnergyDensity:
      return "energy_density";
    case StatisticKind::CorrectorGradient:
      return "corrector_gradient";
  }
  return "unknown";
}

Statistic Statistic::axis(StatisticKind kind, int d) {
  Statistic s;
  s.kind = kind;
  s.xi.assign(static_cast<std::size_t>(d), 0.0);
  s.xi[0] = 1.0;
  s.e0 = s.xi;
  s.e1 = s.xi;
  return s;
}

double Statistic::evaluate(const CoefficientField& a, const SolveOptions& opts) const {
  switch (kind) {
    case StatisticKind::AhomBilinear: {
      const Corrector c = solve_corrector(a, e1, opts);
      return dot(e0, averaged_flux(a, c));
    }
    case StatisticKind::EnergyDensity:
      return energy_density(a, solve_corrector(a, xi, opts));
    case StatisticKind::CorrectorGradient:
      return corrected_gradient(a, solve_corrector(a, xi, opts))(0);
  }
  return 0.0;
}

namespace {

constexpr int kMaxEnumeratedEdges = 20;

void check_enumerable(const TorusLattice& lattice) {
  if (lattice.num_edges() > kMaxEnumeratedEdges) {
    throw InvalidArgument("lattice too large for exhaustive enumeration: " +
                          std::to_string(lattice.num_edges()) + " edges (max " +
                          std::to_string(kMaxEnumeratedEdges) + ")");
  }
}

void check_q(double q) {
  if (!(q > 1.0 && q <= 2.0)) {
    throw InvalidArgument("oscillation exponent q=" + std::to_string(q) + " outside (1, 2]");
  }
}

}  // namespace

std::vector<double> enumerate_statistic(double alpha, double beta, const TorusLattice& lattice,
                                        const Statistic& statistic, const SolveOptions& opts,
                                        int threads) {
  check_enumerable(lattice);
  EnsembleSpec::bernoulli(alpha, beta, 0.5).check();
  const Index edges = lattice.num_edges();
  const std::size_t configs = std::size_t{1} << edges;
  std::vector<double> zeta(configs);
  parallel_for(configs, threads, [&](std::size_t c) {
    EdgeField v(edges);
    for (Index z = 0; z < edges; ++z) v(z) = (c >> z) & 1u ? alpha : beta;
    zeta[c] = statistic.evaluate(CoefficientField(lattice, std::move(v), alpha), opts);
  });
  return zeta;
}

SGReport analyze_enumeration(std::span<const double> zeta, int edges, double prob,
                             std::span<const double> q_list,
                             std::optional<std::pair<int, double>> p_check) {
  if (edges < 1 || edges > kMaxEnumeratedEdges) {
    throw InvalidArgument("analyze_enumeration: unsupported edge count");
  }
  const std::size_t configs = std::size_t{1} << edges;
  require_size(static_cast<Index>(zeta.size()), static_cast<Index>(configs), "analyze_enumeration");
  if (!(prob >= 0.0 && prob <= 1.0)) throw InvalidArgument("probability outside [0, 1]");
  for (double q : q_list) check_q(q);
  if (p_check) {
    if (p_check->first < 1) throw InvalidArgument("p must be >= 1");
    check_q(p_check->second);
  }

  std::vector<double> weight(configs);
  for (std::size_t c = 0; c < configs; ++c) {
    const int low = std::popcount(c);
    weight[c] = std::pow(prob, low) * std::pow(1.0 - prob, edges - low);
  }

  SGReport r;
  r.configurations = configs;
  r.edges = edges;
  for (std::size_t c = 0; c < configs; ++c) r.mean += weight[c] * zeta[c];
  for (std::size_t c = 0; c < configs; ++c) {
    r.variance += weight[c] * (zeta[c] - r.mean) * (zeta[c] - r.mean);
  }

  std::vector<double> osc(static_cast<std::size_t>(edges));
  std::vector<double> moments(q_list.size(), 0.0);
  double central = 0.0;
  double osc_p = 0.0;
  for (std::size_t c = 0; c < configs; ++c) {
    for (int z = 0; z < edges; ++z) osc[z] = std::abs(zeta[c] - zeta[c ^ (std::size_t{1} << z)]);
    for (int z = 0; z < edges; ++z) r.efron_stein += 0.25 * weight[c] * osc[z] * osc[z];
    for (std::size_t k = 0; k < q_list.size(); ++k) {
      const double q = q_list[k];
      double s = 0.0;
      for (double o : osc) s += std::pow(o, q);
      moments[k] += weight[c] * std::pow(s, 2.0 / q);
    }
    if (p_check) {
      const auto [p, q] = *p_check;
      double s = 0.0;
      for (double o : osc) s += std::pow(o, q);
      osc_p += weight[c] * std::pow(s, 2.0 * p / q);
      central += weight[c] * std::pow(zeta[c] - r.mean, 2 * p);
    }
  }
  for (std::size_t k = 0; k < q_list.size(); ++k) r.osc_moments.push_back({q_list[k], moments[k]});
  if (p_check) {
    SGPCheck pc;
    pc.p = p_check->first;
    pc.q = p_check->second;
    pc.central_moment = central;
    pc.osc_moment = osc_p;
    if (osc_p > 0.0) pc.ratio = central / osc_p;
    r.p_check = pc;
  }
  return r;
}

SGReport sg_bruteforce(double alpha, double beta, double prob, const TorusLattice& lattice,
                       const Statistic& statistic, std::span<const double> q_list,
                       const SolveOptions& opts, int threads) {
  const auto zeta = enumerate_statistic(alpha, beta, lattice, statistic, opts, threads);
  return analyze_enumeration(zeta, static_cast<int>(lattice.num_edges()), prob, q_list);
}

SGPCheck sg_p_check(double alpha, double beta, double prob, const TorusLattice& lattice,
                    const Statistic& statistic, int p, double q, const SolveOptions& opts,
                    int threads) {
  const auto zeta = enumerate_statistic(alpha, beta, lattice, statistic, opts, threads);
  return *analyze_enumeration(zeta, static_cast<int>(lattice.num_edges()), prob, {},
                              std::make_pair(p, q))
              .p_check;
}

DecayReport decay_probe(const CoefficientField& a, int rho0, int n_max, const SolveOptions& opts) {
  const TorusLattice& lat = a.lattice();
  const int d = lat.dim();
  if (rho0 < 1 || n_max < 1) throw InvalidArgument("decay_probe needs rho0 >= 1 and n_max >= 1");
  const double outer = std::ldexp(static_cast<double>(rho0), n_max);
  if (outer > lat.side() / 2.0) {
    throw InvalidArgument("decay_probe: 2^n_max rho0 = " + std::to_string(outer) +
                          " exceeds L/2 = " + std::to_string(lat.side() / 2.0));
  }

  Coord far(static_cast<std::size_t>(d), lat.side() / 2);
  Coord near_far = far;
  near_far[0] -= 1;
  const std::vector<double> origin(static_cast<std::size_t>(d), 0.0);
  for (const Coord& src : {far, near_far}) {
    const std::vector<double> pos(src.begin(), src.end());
    if (!(lat.torus_distance(pos, origin) > outer)) {
      throw InvalidArgument("decay_probe: dipole source lies inside the largest ball of radius " +
                            std::to_string(outer));
    }
  }

  SiteField f = SiteField::Zero(lat.num_sites());
  f(lat.site_index(far)) += 1.0;
  f(lat.site_index(near_far)) -= 1.0;
  const SiteField u = solve_meanfree(a, f, opts);
  const EdgeField g = gradient(lat, u);

  std::vector<double> dist(static_cast<std::size_t>(lat.num_edges()));
  std::vector<double> mid(static_cast<std::size_t>(d));
  for (Index e = 0; e < lat.num_edges(); ++e) {
    const Edge edge = lat.edge(e);
    const Coord x = lat.coords(edge.site);
    for (int j = 0; j < d; ++j) mid[j] = x[j] + (j == edge.dir ? 0.5 : 0.0);
    dist[e] = lat.torus_distance(mid, origin);
  }

  DecayReport r;
  r.rho0 = rho0;
  r.n_max = n_max;
  for (int n = 0; n <= n_max; ++n) {
    const double radius = std::ldexp(static_cast<double>(rho0), n);
    double energy = 0.0;
    for (Index e = 0; e < lat.num_edges(); ++e) {
      if (dist[e] <= radius) energy += g(e) * g(e);
    }
    r.radii.push_back(radius);
    r.energies.push_back(energy);
  }
  for (int n = 0; n < n_max; ++n) {
    const double ratio = r.energies[n] / r.energies[n + 1];
    r.ratios.push_back(ratio);
    r.max_ratio = std::max(r.max_ratio, ratio);
  }

  std::vector<double> x, y, w;
  for (int n = 0; n <= n_max; ++n) {
    if (!(r.energies[n] > 0.0)) continue;
    x.push_back(n);
    y.push_back(std::log2(r.energies[n]));
    w.push_back(1.0);
  }
  if (auto fit = stats::weighted_line_fit(x, y, w)) r.alpha_bar = fit->slope;
  return r;
}

}  // namespace lhom
