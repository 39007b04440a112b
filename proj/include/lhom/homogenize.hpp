#ifndef LHOM_HOMOGENIZE_HPP
#define LHOM_HOMOGENIZE_HPP

#include <Eigen/Dense>

#include "lhom/solver.hpp"

namespace lhom {

/// Effective conductivity of one periodic sample:
/// (A_hom)_{ji} = L^{-d} sum_x a([x, x+e_j]) (grad phi_i + e_i)([x, x+e_j]).
struct HomogenizedMatrix {
  Eigen::MatrixXd A;
  /// max residual of the d corrector solves
  double residual = 0.0;

  double quadratic(std::span<const double> xi) const;
  double bilinear(std::span<const double> e0, std::span<const double> e1) const;
};

HomogenizedMatrix homogenized_matrix(const CoefficientField& a, const SolveOptions& opts = {});

/// Averaged flux L^{-d} sum_b a(b) (grad phi + xi)(b) e_dir(b); equals A_hom xi.
Eigen::VectorXd averaged_flux(const CoefficientField& a, const Corrector& phi);

/// L^{-d} sum_b a(b) (grad phi + xi)(b)^2
double energy_density(const CoefficientField& a, const Corrector& phi);

/// Series and parallel bounds on e_i . A_hom e_i: harmonic and arithmetic means
/// of the conductances of direction-i edges.
struct AxisBounds {
  double harmonic = 0.0;
  double arithmetic = 0.0;
};

AxisBounds axis_bounds(const CoefficientField& a, int dir);

}  // namespace lhom

#endif  // LHOM_HOMOGENIZE_HPP
