#include "lhom/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lhom {

namespace {

constexpr std::uint64_t kEdgeStream = 0;
constexpr std::uint64_t kCountStream = 1;
constexpr std::uint64_t kCenterStream = 2;

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::string to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::IIDUniform:
      return "iid_uniform";
    case EnsembleKind::Bernoulli:
      return "bernoulli";
    case EnsembleKind::PoissonInclusions:
      return "poisson_inclusions";
  }
  return "unknown";
}

EnsembleSpec EnsembleSpec::iid_uniform(double lambda) {
  EnsembleSpec s;
  s.kind = EnsembleKind::IIDUniform;
  s.lambda = lambda;
  return s;
}

EnsembleSpec EnsembleSpec::bernoulli(double alpha, double beta, double p, double lambda) {
  EnsembleSpec s;
  s.kind = EnsembleKind::Bernoulli;
  s.alpha = alpha;
  s.beta = beta;
  s.p = p;
  s.lambda = lambda;
  return s;
}

EnsembleSpec EnsembleSpec::poisson_inclusions(double intensity, double radius, double alpha,
                                              double beta, double lambda) {
  EnsembleSpec s;
  s.kind = EnsembleKind::PoissonInclusions;
  s.intensity = intensity;
  s.radius = radius;
  s.alpha = alpha;
  s.beta = beta;
  s.lambda = lambda;
  return s;
}

std::vector<std::string> EnsembleSpec::validate() const {
  std::vector<std::string> errors;
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    errors.push_back("lambda=" + fmt(lambda) + " outside admissible range (0, 1]");
    return errors;
  }
  if (kind == EnsembleKind::IIDUniform) return errors;

  // A degenerate two-point law (alpha == beta) is accepted as the constant field.
  if (!(alpha >= lambda && alpha <= beta && beta <= 1.0)) {
    errors.push_back("alpha=" + fmt(alpha) + ", beta=" + fmt(beta) +
                     " violate lambda <= alpha <= beta <= 1 (lambda=" + fmt(lambda) + ")");
  }
  if (kind == EnsembleKind::Bernoulli) {
    if (!(p >= 0.0 && p <= 1.0)) errors.push_back("p=" + fmt(p) + " outside [0, 1]");
  } else {
    if (!(intensity >= 0.0) || !std::isfinite(intensity)) {
      errors.push_back("intensity=" + fmt(intensity) + " must be finite and >= 0");
    }
    if (!(radius >= 1.0) || !std::isfinite(radius)) {
      errors.push_back("radius=" + fmt(radius) + " must be >= 1");
    }
  }
  return errors;
}

void EnsembleSpec::check() const {
  auto errors = validate();
  if (errors.empty()) return;
  std::string msg = "invalid " + to_string(kind) + " ensemble:";
  for (const auto& e : errors) msg += " " + e + ";";
  throw InvalidArgument(msg);
}

bool EnsembleSpec::degenerate() const {
  switch (kind) {
    case EnsembleKind::IIDUniform:
      return lambda == 1.0;
    case EnsembleKind::Bernoulli:
      return alpha == beta || p == 0.0 || p == 1.0;
    case EnsembleKind::PoissonInclusions:
      return alpha == beta || intensity == 0.0;
  }
  return false;
}

std::uint64_t CounterRng::mix(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(SeedContext seed)
    : key_(mix(mix(seed.master_seed) ^ (seed.sample_index * 0xd1342543de82ef95ULL + 1))) {}

std::uint64_t CounterRng::bits(std::uint64_t stream, std::uint64_t counter) const {
  return mix(mix(key_ ^ (stream * 0xa0761d6478bd642fULL)) ^ counter);
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t counter) const {
  return static_cast<double>(bits(stream, counter) >> 11) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
  return CounterRng::mix(master ^ CounterRng::mix(tag + 0x632be59bd9b4e019ULL));
}

namespace {

// Poisson count by unit-rate exponential inter-arrival times.
std::uint64_t poisson_count(const CounterRng& rng, double mean) {
  std::uint64_t n = 0;
  double t = 0.0;
  while (true) {
    t -= std::log1p(-rng.uniform(kCountStream, n));
    if (t > mean) return n;
    ++n;
  }
}

void mark_inclusion(const TorusLattice& lat, std::span<const double> center, double r,
                    std::vector<char>& inside) {
  const int d = lat.dim();
  const int L = lat.side();
  std::vector<int> lo(d), width(d);
  for (int j = 0; j < d; ++j) {
    lo[j] = static_cast<int>(std::floor(center[j] - r - 0.5));
    width[j] = std::min(L, static_cast<int>(std::ceil(center[j] + r)) - lo[j] + 1);
  }
  std::vector<int> off(d, 0);
  Coord x(d);
  std::vector<double> mid(d);
  while (true) {
    for (int j = 0; j < d; ++j) x[j] = lo[j] + off[j];
    const Index site = lat.site_index(x);
    const Coord base = lat.coords(site);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) mid[j] = base[j] + (j == i ? 0.5 : 0.0);
      if (lat.torus_distance(mid, center) <= r) inside[site * d + i] = 1;
    }
    int j = 0;
    while (j < d && ++off[j] == width[j]) off[j++] = 0;
    if (j == d) break;
  }
}

}  // namespace

CoefficientField sample(const EnsembleSpec& spec, const TorusLattice& lattice, SeedContext seed) {
  spec.check();
  const CounterRng rng(seed);
  const Index n_edges = lattice.num_edges();
  EdgeField a(n_edges);

  switch (spec.kind) {
    case EnsembleKind::IIDUniform:
      for (Index e = 0; e < n_edges; ++e) {
        a(e) = spec.lambda + (1.0 - spec.lambda) * rng.uniform(kEdgeStream, e);
      }
      break;
    case EnsembleKind::Bernoulli:
      for (Index e = 0; e < n_edges; ++e) {
        a(e) = rng.uniform(kEdgeStream, e) < spec.p ? spec.alpha : spec.beta;
      }
      break;
    case EnsembleKind::PoissonInclusions: {
      const int d = lattice.dim();
      const double volume = static_cast<double>(lattice.num_sites());
      const std::uint64_t n_points = poisson_count(rng, spec.intensity * volume);
      std::vector<char> inside(static_cast<std::size_t>(n_edges), 0);
      std::vector<double> center(d);
      for (std::uint64_t m = 0; m < n_points; ++m) {
        for (int j = 0; j < d; ++j) {
          center[j] = lattice.side() * rng.uniform(kCenterStream, m * d + j);
        }
        mark_inclusion(lattice, center, spec.radius, inside);
      }
      for (Index e = 0; e < n_edges; ++e) a(e) = inside[e] ? spec.alpha : spec.beta;
      break;
    }
  }
  return CoefficientField(lattice, std::move(a), spec.lambda);
}

CoefficientField shift_field(const CoefficientField& a, std::span<const int> z) {
  const TorusLattice& lat = a.lattice();
  const int d = lat.dim();
  EdgeField out(lat.num_edges());
  for (Index x = 0; x < lat.num_sites(); ++x) {
    const Index src = lat.translate(x, z);
    for (int i = 0; i < d; ++i) out(x * d + i) = a(src * d + i);
  }
  return CoefficientField(lat, std::move(out), a.lambda());
}

StationarityTable stationarity_probe(const EnsembleSpec& spec, const TorusLattice& lattice,
                                     int n_samples, std::uint64_t master_seed) {
  if (n_samples < 100) {
    throw InvalidArgument("stationarity_probe needs n_samples >= 100, got " +
                          std::to_string(n_samples));
  }
  const auto n_edges = static_cast<std::size_t>(lattice.num_edges());
  std::vector<double> mean(n_edges, 0.0), m2(n_edges, 0.0);
  for (int s = 0; s < n_samples; ++s) {
    const CoefficientField a =
        sample(spec, lattice, {master_seed, static_cast<std::uint64_t>(s)});
    for (std::size_t e = 0; e < n_edges; ++e) {
      const double v = a(static_cast<Index>(e));
      const double delta = v - mean[e];
      mean[e] += delta / (s + 1);
      m2[e] += delta * (v - mean[e]);
    }
  }

  StationarityTable t;
  t.n_samples = n_samples;
  t.mean = mean;
  t.std_error.resize(n_edges);
  for (std::size_t e = 0; e < n_edges; ++e) {
    t.std_error[e] = std::sqrt(m2[e] / (n_samples - 1) / n_samples);
  }
  for (std::size_t e = 0; e < n_edges; ++e) {
    for (std::size_t f = e + 1; f < n_edges; ++f) {
      const double diff = std::abs(mean[e] - mean[f]);
      const double se = std::hypot(t.std_error[e], t.std_error[f]);
      double z = 0.0;
      if (se > 0.0) {
        z = diff / se;
      } else if (diff > 0.0) {
        z = std::numeric_limits<double>::infinity();
      }
      if (z > t.max_discrepancy) {
        t.max_discrepancy = z;
        t.worst_first = static_cast<Index>(e);
        t.worst_second = static_cast<Index>(f);
      }
    }
  }
  t.violation = t.max_discrepancy > 6.0;
  return t;
}

}  // namespace lhom
