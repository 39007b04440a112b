#ifndef LHOM_GREEN_HPP
#define LHOM_GREEN_HPP

#include <Eigen/Dense>

#include "lhom/solver.hpp"

namespace lhom {

/// Mean-free torus Green function: grad* a grad G(., y) = delta_y - L^{-d}.
struct GreenColumn {
  Index y = 0;
  SiteField G;
};

/// Mixed second difference of G for one source edge e = [y, y + e_i]:
/// values(b) = grad_b [G(., y + e_i) - G(., y)].
struct MixedGradientRow {
  Edge e;
  EdgeField values;
};

GreenColumn green_column(const CoefficientField& a, Index y, const SolveOptions& opts = {});

MixedGradientRow mixed_gradient_row(const CoefficientField& a, const Edge& e,
                                    const SolveOptions& opts = {});

/// Full table M(b, e) = grad grad G(a; b, e), rows indexed by b, columns by e.
/// One solve per site.
Eigen::MatrixXd mixed_gradient_table(const CoefficientField& a, const SolveOptions& opts = {},
                                     int threads = 1);

struct MixedBoundsReport {
  double bound = 0.0;           // lambda^{-2}
  double max_column_sum = 0.0;  // max_e sum_b M(b,e)^2
  double max_row_sum = 0.0;     // max_b sum_e M(b,e)^2
  Index argmax_column = 0;
  Index argmax_row = 0;
  double symmetry_defect = 0.0;  // max |M(b,e) - M(e,b)|
  /// max_e |sum_b M(b,e) a(b) M(b,e) - M(e,e)| / M(e,e)
  double energy_identity_defect = 0.0;
  double min_diagonal = 0.0;
  double max_diagonal = 0.0;
  bool column_bound_holds = false;
  bool row_bound_holds = false;
};

/// Checks sum_b M(b,e)^2 <= lambda^{-2} (1 + tolerance) for every e, and the
/// transposed sums likewise. Cost is L^d solves; meant for L <= 16.
MixedBoundsReport check_mixed_bounds(const CoefficientField& a, const SolveOptions& opts = {},
                                     double tolerance = 1e-6, int threads = 1);

/// -grad grad G(a; b, e) (grad phi + xi)(e): the derivative of (grad phi + xi)(b)
/// with respect to the conductance a(e).
double sensitivity_green(const CoefficientField& a, const Corrector& phi, const Edge& e,
                         const Edge& b, const SolveOptions& opts = {});

/// Difference quotient [(grad phi' + xi)(b) - (grad phi + xi)(b)] / delta where
/// phi' is the corrector of a + delta 1_e.
double finite_difference_sensitivity(const CoefficientField& a, std::span<const double> xi,
                                     const Edge& e, const Edge& b, double delta,
                                     const SolveOptions& opts = {});

}  // namespace lhom

#endif  // LHOM_GREEN_HPP
