#pragma once

// Independent reference computations shared by the tests.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "tlkit/polycore.hpp"

namespace oracle {

// a_k of a piecewise-linear target by exact integration over theta in [0, pi].
inline std::vector<double> cheb_coeffs_exact(const tlkit::PiecewiseRef& f, double w, int d) {
  const double pi = std::numbers::pi;
  std::vector<double> cuts{0.0, pi};
  for (double z : f.breakpoints())
    if (std::abs(z) < w) cuts.push_back(std::acos(z / w));
  std::sort(cuts.begin(), cuts.end());
  auto A = [](int j, double th) { return j == 0 ? th : std::sin(j * th) / j; };
  std::vector<double> a(static_cast<std::size_t>(d) + 1, 0.0);
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double t0 = cuts[s], t1 = cuts[s + 1];
    if (t1 - t0 < 1e-15) continue;
    // affine in z = w cos(theta) on this piece: f = p + q z
    const double za = w * std::cos(t0 + 0.25 * (t1 - t0));
    const double zb = w * std::cos(t0 + 0.75 * (t1 - t0));
    const double q = (f(za) - f(zb)) / (za - zb);
    const double p = f(za) - q * za;
    for (int k = 0; k <= d; ++k) {
      const double i0 = A(k, t1) - A(k, t0);
      const double i1 = 0.5 * ((A(std::abs(k - 1), t1) - A(std::abs(k - 1), t0)) + (A(k + 1, t1) - A(k + 1, t0)));
      a[static_cast<std::size_t>(k)] += (p * i0 + q * w * i1) * (k == 0 ? 1.0 : 2.0) / pi;
    }
  }
  return a;
}

inline double sup_error(const tlkit::PiecewiseRef& f, const tlkit::ChebSeries& s, double lo, double hi,
                        double step = 1e-3) {
  double e = 0.0;
  const auto steps = static_cast<long>(std::llround((hi - lo) / step));
  for (long i = 0; i <= steps; ++i) {
    const double x = lo + static_cast<double>(i) * step;
    e = std::max(e, std::abs(f(x) - tlkit::series_eval(s, x)));
  }
  return e;
}

// E|x|^p for x ~ N(0, 1)
inline double abs_moment(double p) {
  return std::pow(2.0, p / 2.0) * std::tgamma((p + 1.0) / 2.0) / std::sqrt(std::numbers::pi);
}

inline double binomial_cdf(int k, int n, double p) {
  double s = 0.0;
  for (int i = 0; i <= k; ++i)
    s += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) + i * std::log(p) +
                  (n - i) * std::log1p(-p));
  return s;
}

}  // namespace oracle
