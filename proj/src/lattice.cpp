#include "lhom/lattice.hpp"
#include "lhom/coefficient.hpp"

#include <cmath>
#include <limits>

namespace lhom {

TorusLattice::TorusLattice(int d, int L) : d_(d), L_(L), num_sites_(1) {
  if (d < 1 || d > kMaxDim) {
    throw InvalidArgument("lattice dimension d=" + std::to_string(d) + " outside [1, " +
                          std::to_string(kMaxDim) + "]");
  }
  if (L < 2) {
    throw InvalidArgument("lattice side L=" + std::to_string(L) + " must be >= 2");
  }
  for (int i = 0; i < d; ++i) {
    if (num_sites_ > std::numeric_limits<int32_t>::max() / L) {
      throw InvalidArgument("lattice L^d too large");
    }
    num_sites_ *= L;
  }
  fwd_.resize(static_cast<std::size_t>(num_sites_ * d));
  bwd_.resize(fwd_.size());
  Index stride = 1;
  for (int i = 0; i < d; ++i) {
    for (Index x = 0; x < num_sites_; ++x) {
      const Index c = (x / stride) % L;
      const Index base = x - c * stride;
      fwd_[x * d + i] = base + ((c + 1) % L) * stride;
      bwd_[x * d + i] = base + ((c + L - 1) % L) * stride;
    }
    stride *= L;
  }
}

Index TorusLattice::site_index(std::span<const int> x) const {
  require_size(static_cast<Index>(x.size()), d_, "site_index");
  Index idx = 0;
  Index stride = 1;
  for (int i = 0; i < d_; ++i) {
    const int c = ((x[i] % L_) + L_) % L_;
    idx += c * stride;
    stride *= L_;
  }
  return idx;
}

Coord TorusLattice::coords(Index site) const {
  Coord x(d_);
  for (int i = 0; i < d_; ++i) {
    x[i] = static_cast<int>(site % L_);
    site /= L_;
  }
  return x;
}

Index TorusLattice::translate(Index site, std::span<const int> z) const {
  Coord x = coords(site);
  require_size(static_cast<Index>(z.size()), d_, "translate");
  for (int i = 0; i < d_; ++i) x[i] += z[i];
  return site_index(x);
}

double TorusLattice::torus_distance(std::span<const double> x, std::span<const double> y) const {
  double s = 0.0;
  for (int i = 0; i < d_; ++i) {
    double delta = std::fmod(std::abs(x[i] - y[i]), static_cast<double>(L_));
    delta = std::min(delta, L_ - delta);
    s += delta * delta;
  }
  return std::sqrt(s);
}

EdgeField constant_edge_field(const TorusLattice& lattice, std::span<const double> xi) {
  require_size(static_cast<Index>(xi.size()), lattice.dim(), "constant_edge_field");
  EdgeField g(lattice.num_edges());
  const int d = lattice.dim();
  for (Index x = 0; x < lattice.num_sites(); ++x) {
    for (int i = 0; i < d; ++i) g(x * d + i) = xi[i];
  }
  return g;
}

SiteField delta(const TorusLattice& lattice, Index site) {
  SiteField u = SiteField::Zero(lattice.num_sites());
  u(site) = 1.0;
  return u;
}

namespace {

void check_coefficients(const EdgeField& values, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw InvalidArgument("ellipticity constant lambda=" + std::to_string(lambda) +
                          " must lie in (0, 1]");
  }
  for (Index e = 0; e < values.size(); ++e) {
    const double v = values(e);
    if (!(v >= lambda && v <= 1.0)) {
      throw InvalidArgument("conductance a(" + std::to_string(e) + ")=" + std::to_string(v) +
                            " outside [lambda, 1] with lambda=" + std::to_string(lambda));
    }
  }
}

}  // namespace

CoefficientField::CoefficientField(TorusLattice lattice, EdgeField values, double lambda)
    : lattice_(std::move(lattice)), values_(std::move(values)), lambda_(lambda) {
  require_size(values_.size(), lattice_.num_edges(), "CoefficientField");
  check_coefficients(values_, lambda_);
}

CoefficientField CoefficientField::constant(const TorusLattice& lattice, double value) {
  return constant(lattice, value, value);
}

CoefficientField CoefficientField::constant(const TorusLattice& lattice, double value,
                                            double lambda) {
  return CoefficientField(lattice, EdgeField::Constant(lattice.num_edges(), value), lambda);
}

CoefficientField CoefficientField::with_edge(Index edge, double value) const {
  EdgeField v = values_;
  v(edge) = value;
  return CoefficientField(lattice_, std::move(v), lambda_);
}

}  // namespace lhom
