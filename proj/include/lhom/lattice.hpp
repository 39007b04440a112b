#ifndef LHOM_LATTICE_HPP
#define LHOM_LATTICE_HPP

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lhom/error.hpp"

namespace lhom {

using Index = Eigen::Index;

/// Dense site or edge field. Sites are row-major with axis 0 fastest; edges are
/// ordered by (site index, direction).
template <typename Scalar>
using FieldT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using SiteField = FieldT<double>;
using EdgeField = FieldT<double>;
using Coord = std::vector<int>;

/// The oriented edge [x, x + e_dir].
struct Edge {
  Index site = 0;
  int dir = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Periodic lattice Z_L^d with its edge set.
class TorusLattice {
 public:
  static constexpr int kMaxDim = 6;

  TorusLattice(int d, int L);

  int dim() const { return d_; }
  int side() const { return L_; }
  Index num_sites() const { return num_sites_; }
  Index num_edges() const { return num_sites_ * d_; }

  /// Site index of a coordinate tuple; components are reduced mod L.
  Index site_index(std::span<const int> x) const;
  Coord coords(Index site) const;

  /// Neighbor x + e_dir (forward) or x - e_dir (backward).
  Index forward(Index site, int dir) const { return fwd_[site * d_ + dir]; }
  Index backward(Index site, int dir) const { return bwd_[site * d_ + dir]; }

  /// Site x + z for an arbitrary offset z.
  Index translate(Index site, std::span<const int> z) const;

  Index edge_index(const Edge& e) const { return e.site * d_ + e.dir; }
  Edge edge(Index e) const { return {e / d_, static_cast<int>(e % d_)}; }
  Index head(const Edge& e) const { return forward(e.site, e.dir); }

  /// Euclidean distance on the torus between two points given in lattice units.
  double torus_distance(std::span<const double> x, std::span<const double> y) const;

  friend bool operator==(const TorusLattice& a, const TorusLattice& b) {
    return a.d_ == b.d_ && a.L_ == b.L_;
  }

 private:
  int d_;
  int L_;
  Index num_sites_;
  std::vector<Index> fwd_;
  std::vector<Index> bwd_;
};

inline void require_size(Index actual, Index expected, const char* what) {
  if (actual != expected) {
    throw SizeError(std::string(what) + ": expected " + std::to_string(expected) +
                    " entries, got " + std::to_string(actual));
  }
}

/// Edge field of the constant direction xi: value xi[dir] on every edge.
EdgeField constant_edge_field(const TorusLattice& lattice, std::span<const double> xi);

/// Unit spike at one site.
SiteField delta(const TorusLattice& lattice, Index site);

/// (grad u)([x, x+e_i]) = u(x+e_i) - u(x)
template <typename Derived>
FieldT<typename Derived::Scalar> gradient(const TorusLattice& lattice,
                                          const Eigen::MatrixBase<Derived>& u) {
  require_size(u.size(), lattice.num_sites(), "gradient");
  const int d = lattice.dim();
  FieldT<typename Derived::Scalar> g(lattice.num_edges());
  for (Index x = 0; x < lattice.num_sites(); ++x) {
    for (int i = 0; i < d; ++i) {
      g(x * d + i) = u(lattice.forward(x, i)) - u(x);
    }
  }
  return g;
}

/// Negative divergence: (grad* g)(x) = sum_i g([x-e_i, x]) - g([x, x+e_i]).
/// Adjoint of gradient under the plain l2 pairings.
template <typename Derived>
FieldT<typename Derived::Scalar> divergence_star(const TorusLattice& lattice,
                                                 const Eigen::MatrixBase<Derived>& g) {
  require_size(g.size(), lattice.num_edges(), "divergence_star");
  const int d = lattice.dim();
  FieldT<typename Derived::Scalar> out(lattice.num_sites());
  for (Index x = 0; x < lattice.num_sites(); ++x) {
    typename Derived::Scalar acc(0);
    for (int i = 0; i < d; ++i) {
      acc += g(lattice.backward(x, i) * d + i) - g(x * d + i);
    }
    out(x) = acc;
  }
  return out;
}

}  // namespace lhom

#endif  // LHOM_LATTICE_HPP
