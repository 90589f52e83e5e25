#include "dirwalk/numeric.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dirwalk/errors.hpp"

namespace dirwalk {

double harmonic(std::uint64_t n) {
  if (n <= 256) {
    double h = 0.0;
    for (std::uint64_t m = n; m >= 1; --m) h += 1.0 / static_cast<double>(m);
    return h;
  }
  // H_n = ln n + gamma + 1/(2n) - 1/(12n^2) + 1/(120n^4) + O(n^-6)
  const double x = static_cast<double>(n);
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return std::log(x) + std::numbers::egamma + 0.5 * inv -
         inv2 / 12.0 + inv2 * inv2 / 120.0;
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0);
}

double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  const double p = 2.0 * sum;
  return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
}

OlsFit ols(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 3) throw DomainError("ols: need >= 3 paired points");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("ols: degenerate abscissae");
  OlsFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.residuals.resize(n);
  double sse = 0;
  for (std::size_t i = 0; i < n; ++i) {
    fit.residuals[i] = y[i] - (fit.intercept + fit.slope * x[i]);
    sse += fit.residuals[i] * fit.residuals[i];
  }
  fit.slope_stderr =
      std::sqrt(sse / (static_cast<double>(n) - 2.0) / sxx);
  return fit;
}

}  // namespace dirwalk
