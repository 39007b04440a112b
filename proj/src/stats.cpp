#include "lhom/stats.hpp"

#include <cmath>

#include "lhom/error.hpp"

namespace lhom::stats {

double mean(std::span<const double> x) {
  if (x.empty()) throw InvalidArgument("mean of empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  if (x.size() < 2) throw InvalidArgument("sample variance needs at least two values");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

double jackknife_se(std::span<const double> loo) {
  const auto n = static_cast<double>(loo.size());
  if (loo.size() < 2) return 0.0;
  const double m = mean(loo);
  double ss = 0.0;
  for (double v : loo) ss += (v - m) * (v - m);
  return std::sqrt((n - 1.0) / n * ss);
}

std::vector<double> leave_one_out_means(std::span<const double> x) {
  const auto n = static_cast<double>(x.size());
  double s = 0.0;
  for (double v : x) s += v;
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (s - x[i]) / (n - 1.0);
  return out;
}

std::vector<double> leave_one_out_variances(std::span<const double> x) {
  if (x.size() < 3) throw InvalidArgument("leave-one-out variance needs at least three values");
  const auto n = static_cast<double>(x.size());
  const double m = mean(x);
  double s1 = 0.0;
  double s2 = 0.0;
  for (double v : x) {
    s1 += v - m;
    s2 += (v - m) * (v - m);
  }
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double c = x[i] - m;
    const double t1 = s1 - c;
    const double t2 = s2 - c * c;
    out[i] = (t2 - t1 * t1 / (n - 1.0)) / (n - 2.0);
  }
  return out;
}

std::optional<LinearFit> weighted_line_fit(std::span<const double> x, std::span<const double> y,
                                           std::span<const double> w) {
  if (x.size() != y.size() || x.size() != w.size()) {
    throw SizeError("weighted_line_fit: mismatched input lengths");
  }
  double sw = 0.0, sx = 0.0, sy = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(w[i] > 0.0) || !std::isfinite(w[i]) || !std::isfinite(y[i])) continue;
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
    ++used;
  }
  if (used < 2) return std::nullopt;
  const double xm = sx / sw;
  const double ym = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(w[i] > 0.0) || !std::isfinite(w[i]) || !std::isfinite(y[i])) continue;
    sxx += w[i] * (x[i] - xm) * (x[i] - xm);
    sxy += w[i] * (x[i] - xm) * (y[i] - ym);
  }
  if (!(sxx > 0.0)) return std::nullopt;
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  fit.slope_se = 1.0 / std::sqrt(sxx);
  return fit;
}

}  // namespace lhom::stats
