#ifndef LHOM_SOLVER_HPP
#define LHOM_SOLVER_HPP

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "lhom/coefficient.hpp"

namespace lhom {

struct SolveOptions {
  double rel_tol = 1e-10;
  /// 0 selects ceil(50 sqrt(1/lambda) log(1/rel_tol)).
  int max_iter = 0;

  void check() const;
  int iteration_cap(double lambda) const;
};

/// Exact inverse of the unit-conductance Laplacian on mean-free fields,
/// applied in Fourier space. Not thread-safe; use one instance per thread.
class LaplacianPreconditioner {
 public:
  explicit LaplacianPreconditioner(const TorusLattice& lattice);
  ~LaplacianPreconditioner();
  LaplacianPreconditioner(LaplacianPreconditioner&&) noexcept;
  LaplacianPreconditioner& operator=(LaplacianPreconditioner&&) noexcept;

  /// z = Delta^{-1} r with the constant mode removed.
  void apply(const SiteField& r, SiteField& z);

  /// Fourier symbol sum_i 4 sin^2(pi k_i / L) of mode k (site-indexed).
  const std::vector<double>& symbol() const { return symbol_; }

 private:
  void transform(bool inverse);

  TorusLattice lattice_;
  std::vector<double> symbol_;
  std::vector<std::complex<double>> data_;
  std::vector<std::complex<double>> line_in_;
  std::vector<std::complex<double>> line_out_;
  struct Fft;
  std::unique_ptr<Fft> fft_;
};

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;  // achieved ||f - A u|| / ||f||
};

/// Mean-free u with grad*(a grad u) = f. Requires sum f = 0 within 1e-10 sum|f|.
SiteField solve_meanfree(const CoefficientField& a, const SiteField& f,
                         const SolveOptions& opts = {}, SolveStats* stats = nullptr);

struct Corrector {
  SiteField phi;  // pinned: phi(origin) == 0
  std::vector<double> xi;
  double residual = 0.0;
  int iterations = 0;
};

/// Solves grad*(a (grad phi + xi)) = 0 and pins phi at the origin.
Corrector solve_corrector(const CoefficientField& a, std::span<const double> xi,
                          const SolveOptions& opts = {});

/// grad phi + xi as an edge field.
EdgeField corrected_gradient(const CoefficientField& a, const Corrector& c);

struct SpectrumEstimate {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Extreme eigenvalues of grad* a grad on mean-free fields: power iteration for
/// the top, inverse iteration (through solve_meanfree) for the bottom.
SpectrumEstimate operator_condition_probe(const CoefficientField& a, int power_iterations = 400,
                                          int inverse_iterations = 40);

/// Smallest and largest nonzero eigenvalues of the unit Laplacian on the torus.
SpectrumEstimate unit_laplacian_range(const TorusLattice& lattice);

}  // namespace lhom

#endif  // LHOM_SOLVER_HPP
