#include "lhom/homogenize.hpp"

#include <algorithm>

namespace lhom {

double HomogenizedMatrix::quadratic(std::span<const double> xi) const { return bilinear(xi, xi); }

double HomogenizedMatrix::bilinear(std::span<const double> e0, std::span<const double> e1) const {
  require_size(static_cast<Index>(e0.size()), A.rows(), "HomogenizedMatrix::bilinear");
  require_size(static_cast<Index>(e1.size()), A.cols(), "HomogenizedMatrix::bilinear");
  const Eigen::Map<const Eigen::VectorXd> u(e0.data(), A.rows());
  const Eigen::Map<const Eigen::VectorXd> v(e1.data(), A.cols());
  return u.dot(A * v);
}

Eigen::VectorXd averaged_flux(const CoefficientField& a, const Corrector& phi) {
  const TorusLattice& lat = a.lattice();
  const int d = lat.dim();
  const EdgeField flux = a.values().cwiseProduct(corrected_gradient(a, phi));
  Eigen::VectorXd q = Eigen::VectorXd::Zero(d);
  for (Index e = 0; e < flux.size(); ++e) q(e % d) += flux(e);
  return q / static_cast<double>(lat.num_sites());
}

double energy_density(const CoefficientField& a, const Corrector& phi) {
  return dirichlet_energy(a, corrected_gradient(a, phi)) /
         static_cast<double>(a.lattice().num_sites());
}

HomogenizedMatrix homogenized_matrix(const CoefficientField& a, const SolveOptions& opts) {
  const int d = a.lattice().dim();
  HomogenizedMatrix h;
  h.A.resize(d, d);
  std::vector<double> unit(d, 0.0);
  for (int i = 0; i < d; ++i) {
    std::fill(unit.begin(), unit.end(), 0.0);
    unit[i] = 1.0;
    const Corrector c = solve_corrector(a, unit, opts);
    h.A.col(i) = averaged_flux(a, c);
    h.residual = std::max(h.residual, c.residual);
  }
  return h;
}

AxisBounds axis_bounds(const CoefficientField& a, int dir) {
  const int d = a.lattice().dim();
  double inv = 0.0;
  double sum = 0.0;
  for (Index x = 0; x < a.lattice().num_sites(); ++x) {
    const double v = a(x * d + dir);
    inv += 1.0 / v;
    sum += v;
  }
  const auto n = static_cast<double>(a.lattice().num_sites());
  return {n / inv, sum / n};
}

}  // namespace lhom
