#ifndef DIRWALK_NUMERIC_HPP
#define DIRWALK_NUMERIC_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace dirwalk {

// H_n = sum_{m=1}^{n} 1/m; exact summation for small n, Euler-Maclaurin above
double harmonic(std::uint64_t n);

// standard normal CDF, relative error ~1e-15 (erfc based)
double normal_cdf(double x);

// P(K > lambda) for the asymptotic Kolmogorov distribution
double kolmogorov_tail(double lambda);

struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::vector<double> residuals;
};

OlsFit ols(std::span<const double> x, std::span<const double> y);

}  // namespace dirwalk

#endif
