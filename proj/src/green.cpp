#include "lhom/green.hpp"

#include <cmath>
#include <string>

#include "lhom/parallel.hpp"

namespace lhom {

namespace {

SiteField point_source(const TorusLattice& lat, Index y) {
  SiteField f = SiteField::Constant(lat.num_sites(), -1.0 / static_cast<double>(lat.num_sites()));
  f(y) += 1.0;
  return f;
}

}  // namespace

GreenColumn green_column(const CoefficientField& a, Index y, const SolveOptions& opts) {
  const TorusLattice& lat = a.lattice();
  if (y < 0 || y >= lat.num_sites()) throw InvalidArgument("green_column: source site out of range");
  return {y, solve_meanfree(a, point_source(lat, y), opts)};
}

MixedGradientRow mixed_gradient_row(const CoefficientField& a, const Edge& e,
                                    const SolveOptions& opts) {
  const TorusLattice& lat = a.lattice();
  const GreenColumn tail = green_column(a, e.site, opts);
  const GreenColumn head = green_column(a, lat.head(e), opts);
  return {e, gradient(lat, head.G - tail.G)};
}

Eigen::MatrixXd mixed_gradient_table(const CoefficientField& a, const SolveOptions& opts,
                                     int threads) {
  const TorusLattice& lat = a.lattice();
  const Index n = lat.num_sites();
  const int d = lat.dim();
  std::vector<SiteField> columns(static_cast<std::size_t>(n));
  parallel_for(columns.size(), threads, [&](std::size_t y) {
    columns[y] = green_column(a, static_cast<Index>(y), opts).G;
  });

  Eigen::MatrixXd table(lat.num_edges(), lat.num_edges());
  for (Index y = 0; y < n; ++y) {
    for (int i = 0; i < d; ++i) {
      const Index e = lat.edge_index({y, i});
      table.col(e) = gradient(lat, columns[lat.forward(y, i)] - columns[y]);
    }
  }
  return table;
}

MixedBoundsReport check_mixed_bounds(const CoefficientField& a, const SolveOptions& opts,
                                     double tolerance, int threads) {
  const Eigen::MatrixXd M = mixed_gradient_table(a, opts, threads);
  MixedBoundsReport r;
  r.bound = 1.0 / (a.lambda() * a.lambda());

  const Eigen::VectorXd col_sums = M.array().square().colwise().sum().transpose();
  const Eigen::VectorXd row_sums = M.array().square().rowwise().sum();
  r.max_column_sum = col_sums.maxCoeff(&r.argmax_column);
  r.max_row_sum = row_sums.maxCoeff(&r.argmax_row);
  r.symmetry_defect = (M - M.transpose()).cwiseAbs().maxCoeff();

  const Eigen::VectorXd weighted = (M.array().square().colwise() * a.values().array()).colwise().sum();
  const Eigen::VectorXd diag = M.diagonal();
  r.energy_identity_defect = ((weighted - diag).cwiseAbs().array() / diag.cwiseAbs().array()).maxCoeff();
  r.min_diagonal = diag.minCoeff();
  r.max_diagonal = diag.maxCoeff();

  r.column_bound_holds = r.max_column_sum <= r.bound * (1.0 + tolerance);
  r.row_bound_holds = r.max_row_sum <= r.bound * (1.0 + tolerance);
  return r;
}

double sensitivity_green(const CoefficientField& a, const Corrector& phi, const Edge& e,
                         const Edge& b, const SolveOptions& opts) {
  const TorusLattice& lat = a.lattice();
  require_size(phi.phi.size(), lat.num_sites(), "sensitivity_green");
  const MixedGradientRow row = mixed_gradient_row(a, e, opts);
  const double flux_factor = phi.phi(lat.head(e)) - phi.phi(e.site) + phi.xi[e.dir];
  return -row.values(lat.edge_index(b)) * flux_factor;
}

double finite_difference_sensitivity(const CoefficientField& a, std::span<const double> xi,
                                     const Edge& e, const Edge& b, double delta,
                                     const SolveOptions& opts) {
  const TorusLattice& lat = a.lattice();
  const Index ei = lat.edge_index(e);
  if (!(delta > 0.0)) throw InvalidArgument("finite_difference_sensitivity: delta must be > 0");
  if (!(a(ei) + delta <= 1.0)) {
    throw InvalidArgument("finite_difference_sensitivity: a(e) + delta = " +
                          std::to_string(a(ei) + delta) + " exceeds 1");
  }

  const Corrector base = solve_corrector(a, xi, opts);
  const double flux_factor = corrected_gradient(a, base)(ei);
  const CoefficientField perturbed = a.with_edge(ei, a(ei) + delta);

  // phi' - phi solves grad*(a' grad w) = -delta grad*(1_e (grad phi + xi)(e)) exactly,
  // so the quotient w / delta is obtained without subtracting two nearly equal solves.
  EdgeField g = EdgeField::Zero(lat.num_edges());
  g(ei) = -flux_factor;
  const SiteField w_over_delta = solve_meanfree(perturbed, divergence_star(lat, g), opts);
  return gradient(lat, w_over_delta)(lat.edge_index(b));
}

}  // namespace lhom
