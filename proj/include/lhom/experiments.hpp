#ifndef LHOM_EXPERIMENTS_HPP
#define LHOM_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lhom/ensembles.hpp"
#include "lhom/homogenize.hpp"

namespace lhom {

/// Per-sample consistency checks gathered while running an experiment.
struct SampleChecks {
  int checked = 0;
  /// max over samples of |xi . A_hom xi - energy density| / energy density
  double max_weak_form_defect = 0.0;
  /// samples with an axis direction where harmonic <= xi.A_hom xi <= arithmetic failed
  int bound_violations = 0;
  int bounds_checked = 0;
  double max_residual = 0.0;
};

struct MomentReport {
  double p = 1.0;
  int L = 0;
  int d = 0;
  int n_samples = 0;
  std::vector<double> xi;
  /// F(2p)^{1/p}, F(q) = E[sum_i |D_i phi + xi_i|^q]
  double estimate = 0.0;
  double estimate_se = 0.0;
  double F2 = 0.0;
  double F2_se = 0.0;
  /// F(2p)^{1/p} / F(2)
  double ratio = 0.0;
  double ratio_se = 0.0;
  SampleChecks checks;
};

struct VarianceRow {
  int L = 0;
  int n_samples = 0;
  double mean = 0.0;
  double variance = 0.0;
  double variance_se = 0.0;
};

struct VarianceReport {
  int d = 0;
  std::vector<double> e0;
  std::vector<double> e1;
  std::vector<VarianceRow> rows;
  /// slope of log variance against log L; empty when undefined (e.g. zero variance)
  std::optional<double> slope;
  std::optional<double> slope_se;
  SampleChecks checks;
};

enum class StatisticKind { AhomBilinear, EnergyDensity, CorrectorGradient };

std::string to_string(StatisticKind kind);

/// The random variable zeta(a) examined by the spectral-gap checks.
///   AhomBilinear:       e0 . A_hom(a) e1
///   EnergyDensity:      L^{-d} sum_b a (grad phi + xi)^2
///   CorrectorGradient:  (grad phi + xi)([0, e_1])
struct Statistic {
  StatisticKind kind = StatisticKind::AhomBilinear;
  std::vector<double> e0;
  std::vector<double> e1;
  std::vector<double> xi;

  static Statistic axis(StatisticKind kind, int d);
  double evaluate(const CoefficientField& a, const SolveOptions& opts) const;
};

struct OscillationMoment {
  double q = 2.0;
  /// E[(sum_z osc_z^q)^{2/q}]
  double value = 0.0;
};

struct SGPCheck {
  int p = 1;
  double q = 2.0;
  double central_moment = 0.0;  // E[(zeta - E zeta)^{2p}]
  double osc_moment = 0.0;      // E[(sum_z osc_z^q)^{2p/q}]
  std::optional<double> ratio;  // central_moment / osc_moment
};

struct SGReport {
  std::uint64_t configurations = 0;
  int edges = 0;
  int values_per_edge = 2;
  double mean = 0.0;
  double variance = 0.0;
  /// (1/4) sum_z E[osc_z^2]
  double efron_stein = 0.0;
  std::vector<OscillationMoment> osc_moments;
  std::optional<SGPCheck> p_check;
};

struct DecayReport {
  int rho0 = 0;
  int n_max = 0;
  std::vector<double> radii;
  /// a_n = sum of |grad u|^2 over edges with midpoint in B_{2^n rho0}
  std::vector<double> energies;
  std::vector<double> ratios;  // a_n / a_{n+1}
  double max_ratio = 0.0;
  /// least-squares slope of log2 a_n against n
  double alpha_bar = 0.0;
};

MomentReport moment_estimate(const EnsembleSpec& spec, const TorusLattice& lattice,
                             std::span<const double> xi, double p, int n_samples,
                             std::uint64_t master_seed, const SolveOptions& opts = {},
                             int threads = 1);

VarianceReport variance_scan(const EnsembleSpec& spec, int d, std::span<const int> Ls,
                             std::span<const double> e0, std::span<const double> e1,
                             int n_samples, std::uint64_t master_seed,
                             const SolveOptions& opts = {}, int threads = 1);

/// Exact spectral-gap quantities from a table zeta[c] over all 2^edges two-point
/// configurations (bit z of c set means edge z takes the low value, with
/// probability prob).
SGReport analyze_enumeration(std::span<const double> zeta, int edges, double prob,
                             std::span<const double> q_list,
                             std::optional<std::pair<int, double>> p_check = std::nullopt);

/// zeta evaluated on every configuration of the lattice with values in {alpha, beta}.
std::vector<double> enumerate_statistic(double alpha, double beta, const TorusLattice& lattice,
                                        const Statistic& statistic,
                                        const SolveOptions& opts = {}, int threads = 1);

SGReport sg_bruteforce(double alpha, double beta, double prob, const TorusLattice& lattice,
                       const Statistic& statistic, std::span<const double> q_list,
                       const SolveOptions& opts = {}, int threads = 1);

SGPCheck sg_p_check(double alpha, double beta, double prob, const TorusLattice& lattice,
                    const Statistic& statistic, int p, double q, const SolveOptions& opts = {},
                    int threads = 1);

DecayReport decay_probe(const CoefficientField& a, int rho0, int n_max,
                        const SolveOptions& opts = {});

}  // namespace lhom

#endif  // LHOM_EXPERIMENTS_HPP
