#include "lhom/solver.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <string>

#include "lhom/ensembles.hpp"

namespace lhom {

void SolveOptions::check() const {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-6)) {
    throw InvalidArgument("rel_tol=" + std::to_string(rel_tol) + " must lie in (0, 1e-6]");
  }
  if (max_iter < 0) throw InvalidArgument("max_iter must be >= 1 (or 0 for automatic)");
}

int SolveOptions::iteration_cap(double lambda) const {
  if (max_iter > 0) return max_iter;
  return static_cast<int>(std::ceil(50.0 * std::sqrt(1.0 / lambda) * std::log(1.0 / rel_tol)));
}

struct LaplacianPreconditioner::Fft {
  Eigen::FFT<double> engine;
};

LaplacianPreconditioner::LaplacianPreconditioner(const TorusLattice& lattice)
    : lattice_(lattice),
      symbol_(static_cast<std::size_t>(lattice.num_sites())),
      data_(symbol_.size()),
      line_in_(static_cast<std::size_t>(lattice.side())),
      line_out_(line_in_.size()),
      fft_(std::make_unique<Fft>()) {
  const int L = lattice.side();
  std::vector<double> s1(static_cast<std::size_t>(L));
  for (int k = 0; k < L; ++k) {
    const double s = std::sin(std::numbers::pi * k / L);
    s1[k] = 4.0 * s * s;
  }
  for (Index x = 0; x < lattice.num_sites(); ++x) {
    const Coord k = lattice.coords(x);
    double sigma = 0.0;
    for (int c : k) sigma += s1[c];
    symbol_[x] = sigma;
  }
}

LaplacianPreconditioner::~LaplacianPreconditioner() = default;
LaplacianPreconditioner::LaplacianPreconditioner(LaplacianPreconditioner&&) noexcept = default;
LaplacianPreconditioner& LaplacianPreconditioner::operator=(LaplacianPreconditioner&&) noexcept =
    default;

void LaplacianPreconditioner::transform(bool inverse) {
  const int d = lattice_.dim();
  const Index L = lattice_.side();
  const Index n = lattice_.num_sites();
  Index stride = 1;
  for (int axis = 0; axis < d; ++axis) {
    // Each line along `axis` starts at a site whose axis coordinate is 0.
    for (Index start = 0; start < n; ++start) {
      if ((start / stride) % L != 0) continue;
      for (Index k = 0; k < L; ++k) line_in_[k] = data_[start + k * stride];
      if (inverse) {
        fft_->engine.inv(line_out_, line_in_);
      } else {
        fft_->engine.fwd(line_out_, line_in_);
      }
      for (Index k = 0; k < L; ++k) data_[start + k * stride] = line_out_[k];
    }
    stride *= L;
  }
}

void LaplacianPreconditioner::apply(const SiteField& r, SiteField& z) {
  const Index n = lattice_.num_sites();
  for (Index x = 0; x < n; ++x) data_[x] = r(x);
  transform(false);
  data_[0] = 0.0;
  for (Index x = 1; x < n; ++x) data_[x] /= symbol_[x];
  transform(true);
  z.resize(n);
  for (Index x = 0; x < n; ++x) z(x) = data_[x].real();
}

namespace {

void remove_mean(SiteField& v) { v.array() -= v.mean(); }

}  // namespace

SiteField solve_meanfree(const CoefficientField& a, const SiteField& f, const SolveOptions& opts,
                         SolveStats* stats) {
  opts.check();
  const TorusLattice& lat = a.lattice();
  require_size(f.size(), lat.num_sites(), "solve_meanfree");
  const double total = f.sum();
  const double scale = f.cwiseAbs().sum();
  if (std::abs(total) > 1e-10 * scale) {
    throw InvalidArgument("solve_meanfree: right-hand side is not mean-free (sum=" +
                          std::to_string(total) + ", sum|f|=" + std::to_string(scale) + ")");
  }

  SiteField rhs = f;
  remove_mean(rhs);
  const double rhs_norm = rhs.norm();
  SiteField u = SiteField::Zero(lat.num_sites());
  if (rhs_norm == 0.0) {
    if (stats) *stats = {0, 0.0};
    return u;
  }

  // Stop at half the requested tolerance so that later re-normalization
  // (pinning, mean removal) stays within rel_tol.
  const double target = 0.5 * opts.rel_tol * rhs_norm;
  const int cap = opts.iteration_cap(a.lambda());

  LaplacianPreconditioner precond(lat);
  SiteField r = rhs;
  SiteField z, p, Ap;
  precond.apply(r, z);
  p = z;
  double rz = r.dot(z);
  int it = 0;
  double res = r.norm();

  while (it < cap) {
    Ap = apply_operator(a, p);
    const double pAp = p.dot(Ap);
    if (!(pAp > 0.0)) break;
    const double step = rz / pAp;
    u.noalias() += step * p;
    r.noalias() -= step * Ap;
    ++it;
    if (it % 50 == 0) remove_mean(r);
    res = r.norm();
    if (res <= target) {
      // Confirm with the true residual; restart from it if recursion drifted.
      r = rhs - apply_operator(a, u);
      remove_mean(r);
      res = r.norm();
      if (res <= target) break;
      precond.apply(r, z);
      p = z;
      rz = r.dot(z);
      continue;
    }
    precond.apply(r, z);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }

  remove_mean(u);
  const double achieved = (rhs - apply_operator(a, u)).norm() / rhs_norm;
  if (stats) *stats = {it, achieved};
  if (!(achieved <= opts.rel_tol)) {
    throw SolveError("solve_meanfree: no convergence after " + std::to_string(it) +
                         " iterations (relative residual " + std::to_string(achieved) +
                         ", target " + std::to_string(opts.rel_tol) + ")",
                     achieved, it);
  }
  return u;
}

Corrector solve_corrector(const CoefficientField& a, std::span<const double> xi,
                          const SolveOptions& opts) {
  const TorusLattice& lat = a.lattice();
  require_size(static_cast<Index>(xi.size()), lat.dim(), "solve_corrector");
  double norm2 = 0.0;
  for (double v : xi) norm2 += v * v;
  if (!(norm2 <= 1.0 + 1e-14)) {
    throw InvalidArgument("solve_corrector: |xi| must be <= 1");
  }

  const EdgeField flux = a.values().cwiseProduct(constant_edge_field(lat, xi));
  const SiteField f = -divergence_star(lat, flux);

  Corrector c;
  c.xi.assign(xi.begin(), xi.end());
  SolveStats stats;
  c.phi = solve_meanfree(a, f, opts, &stats);
  c.phi.array() -= c.phi(0);
  c.iterations = stats.iterations;

  const double base = f.norm();
  if (base == 0.0) {
    c.phi.setZero();
    c.residual = 0.0;
  } else {
    c.residual = (f - apply_operator(a, c.phi)).norm() / base;
  }
  return c;
}

EdgeField corrected_gradient(const CoefficientField& a, const Corrector& c) {
  return gradient(a.lattice(), c.phi) + constant_edge_field(a.lattice(), c.xi);
}

SpectrumEstimate unit_laplacian_range(const TorusLattice& lattice) {
  const int L = lattice.side();
  double s_min = std::sin(std::numbers::pi / L);
  double s_max = std::sin(std::numbers::pi * (L / 2) / L);
  return {4.0 * s_min * s_min, 4.0 * lattice.dim() * s_max * s_max};
}

SpectrumEstimate operator_condition_probe(const CoefficientField& a, int power_iterations,
                                          int inverse_iterations) {
  const TorusLattice& lat = a.lattice();
  const Index n = lat.num_sites();
  const CounterRng rng({0x5eedULL, 0});
  SiteField start(n);
  for (Index x = 0; x < n; ++x) start(x) = rng.uniform(0, static_cast<std::uint64_t>(x)) - 0.5;
  remove_mean(start);
  start.normalize();

  auto rayleigh = [&](const SiteField& v) { return v.dot(apply_operator(a, v)) / v.squaredNorm(); };

  SpectrumEstimate est;
  SiteField v = start;
  for (int k = 0; k < power_iterations; ++k) {
    v = apply_operator(a, v);
    remove_mean(v);
    v.normalize();
  }
  est.lambda_max = rayleigh(v);

  v = start;
  SolveOptions opts;
  opts.rel_tol = 1e-10;
  for (int k = 0; k < inverse_iterations; ++k) {
    v = solve_meanfree(a, v, opts);
    v.normalize();
  }
  est.lambda_min = rayleigh(v);
  return est;
}

}  // namespace lhom
