#ifndef LHOM_COEFFICIENT_HPP
#define LHOM_COEFFICIENT_HPP

#include "lhom/lattice.hpp"

namespace lhom {

/// Scalar conductances on the edges of a torus, with lambda <= a(e) <= 1.
class CoefficientField {
 public:
  CoefficientField(TorusLattice lattice, EdgeField values, double lambda);

  /// Constant field a == value (lambda defaults to value).
  static CoefficientField constant(const TorusLattice& lattice, double value);
  static CoefficientField constant(const TorusLattice& lattice, double value, double lambda);

  const TorusLattice& lattice() const { return lattice_; }
  const EdgeField& values() const { return values_; }
  double lambda() const { return lambda_; }
  double operator()(Index edge) const { return values_(edge); }

  /// Copy with a(e) replaced; range checks are re-applied.
  CoefficientField with_edge(Index edge, double value) const;

 private:
  TorusLattice lattice_;
  EdgeField values_;
  double lambda_;
};

/// grad* (a grad u)
template <typename Derived>
FieldT<typename Derived::Scalar> apply_operator(const CoefficientField& a,
                                                const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  const TorusLattice& lat = a.lattice();
  require_size(u.size(), lat.num_sites(), "apply_operator");
  const int d = lat.dim();
  const EdgeField& c = a.values();
  FieldT<Scalar> out(lat.num_sites());
  for (Index x = 0; x < lat.num_sites(); ++x) {
    Scalar acc(0);
    const Scalar ux = u(x);
    for (int i = 0; i < d; ++i) {
      const Index fw = lat.forward(x, i);
      const Index bw = lat.backward(x, i);
      acc += Scalar(c(bw * d + i)) * (ux - u(bw)) - Scalar(c(x * d + i)) * (u(fw) - ux);
    }
    out(x) = acc;
  }
  return out;
}

/// sum_b a(b) g(b)^2
template <typename Derived>
typename Derived::Scalar dirichlet_energy(const CoefficientField& a,
                                          const Eigen::MatrixBase<Derived>& g) {
  require_size(g.size(), a.lattice().num_edges(), "dirichlet_energy");
  return (a.values().template cast<typename Derived::Scalar>().array() * g.array().square()).sum();
}

}  // namespace lhom

#endif  // LHOM_COEFFICIENT_HPP
