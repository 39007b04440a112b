// Independent reference computations used only by the tests. Nothing here
// calls the solver or the lattice calculus under test.
#ifndef LHOM_TESTS_ORACLES_HPP
#define LHOM_TESTS_ORACLES_HPP

#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

/// Row-major site index with axis 0 fastest, coordinates reduced mod L.
inline long site(const std::vector<int>& x, int L) {
  long idx = 0, stride = 1;
  for (int c : x) {
    idx += (((c % L) + L) % L) * stride;
    stride *= L;
  }
  return idx;
}

inline std::vector<int> coords(long s, int d, int L) {
  std::vector<int> x(d);
  for (int i = 0; i < d; ++i) {
    x[i] = static_cast<int>(s % L);
    s /= L;
  }
  return x;
}

inline long power(int L, int d) {
  long n = 1;
  for (int i = 0; i < d; ++i) n *= L;
  return n;
}

/// Fourier symbol of the unit Laplacian.
inline double symbol(const std::vector<int>& k, int L) {
  double s = 0.0;
  for (int c : k) {
    const double v = std::sin(std::numbers::pi * c / L);
    s += 4.0 * v * v;
  }
  return s;
}

/// Mean-free Green function of the unit Laplacian by direct Fourier inversion:
/// G(x, y) = L^{-d} sum_{k != 0} cos(2 pi k.(x - y) / L) / sigma(k).
inline double green(const std::vector<int>& x, const std::vector<int>& y, int L) {
  const int d = static_cast<int>(x.size());
  const long n = power(L, d);
  double sum = 0.0;
  for (long m = 1; m < n; ++m) {
    const auto k = coords(m, d, L);
    double phase = 0.0;
    for (int i = 0; i < d; ++i) phase += k[i] * (x[i] - y[i]);
    sum += std::cos(2.0 * std::numbers::pi * phase / L) / symbol(k, L);
  }
  return sum / static_cast<double>(n);
}

/// grad_x grad_y G for edges b = [x, x+e_i], e = [y, y+e_j] of the unit Laplacian.
inline double mixed_green(const std::vector<int>& x, int i, const std::vector<int>& y, int j,
                          int L) {
  auto shift = [](std::vector<int> v, int dir) {
    v[dir] += 1;
    return v;
  };
  const auto xp = shift(x, i);
  const auto yp = shift(y, j);
  return green(xp, yp, L) - green(xp, y, L) - green(x, yp, L) + green(x, y, L);
}

inline double harmonic_mean(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s += 1.0 / v;
  return static_cast<double>(a.size()) / s;
}

}  // namespace oracle

#endif  // LHOM_TESTS_ORACLES_HPP
