#ifndef LHOM_ENSEMBLES_HPP
#define LHOM_ENSEMBLES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lhom/coefficient.hpp"

namespace lhom {

enum class EnsembleKind { IIDUniform, Bernoulli, PoissonInclusions };

std::string to_string(EnsembleKind kind);

/// Law of a stationary random conductance field.
///
/// IIDUniform: a(e) uniform on [lambda, 1], independent across edges.
/// Bernoulli: a(e) = alpha with probability p, beta otherwise.
/// PoissonInclusions: Poisson points of intensity nu in the continuous torus;
///   an edge whose midpoint lies within radius of some point takes alpha,
///   every other edge takes beta.
struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::Bernoulli;
  double lambda = 0.25;
  double alpha = 0.25;
  double beta = 1.0;
  double p = 0.5;
  double intensity = 0.05;
  double radius = 2.0;

  static EnsembleSpec iid_uniform(double lambda);
  static EnsembleSpec bernoulli(double alpha, double beta, double p, double lambda);
  static EnsembleSpec bernoulli(double alpha, double beta, double p) {
    return bernoulli(alpha, beta, p, alpha);
  }
  static EnsembleSpec poisson_inclusions(double intensity, double radius, double alpha,
                                         double beta, double lambda);

  /// Every violated invariant, empty when valid.
  std::vector<std::string> validate() const;
  /// Throws InvalidArgument listing every violation.
  void check() const;
  bool degenerate() const;
};

struct SeedContext {
  std::uint64_t master_seed = 0;
  std::uint64_t sample_index = 0;
};

/// Counter-based generator: every draw is a pure function of
/// (seed, sample, stream, counter).
class CounterRng {
 public:
  explicit CounterRng(SeedContext seed);

  std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint64_t stream, std::uint64_t counter) const;

  static std::uint64_t mix(std::uint64_t x);

 private:
  std::uint64_t key_;
};

/// Derive an independent master seed for a sub-experiment (e.g. one lattice size).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag);

CoefficientField sample(const EnsembleSpec& spec, const TorusLattice& lattice, SeedContext seed);

/// The field x -> a(x + z), edges relabeled by translation mod L.
CoefficientField shift_field(const CoefficientField& a, std::span<const int> z);

struct StationarityTable {
  std::vector<double> mean;       // per edge
  std::vector<double> std_error;  // per edge
  /// max over edge pairs of |m_e - m_f| / sqrt(se_e^2 + se_f^2)
  double max_discrepancy = 0.0;
  Index worst_first = 0;
  Index worst_second = 0;
  bool violation = false;
  int n_samples = 0;
};

/// Per-edge empirical means over n_samples draws; flags a violation when two
/// edges differ by more than 6 standard errors.
StationarityTable stationarity_probe(const EnsembleSpec& spec, const TorusLattice& lattice,
                                     int n_samples, std::uint64_t master_seed);

}  // namespace lhom

#endif  // LHOM_ENSEMBLES_HPP
