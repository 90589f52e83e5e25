#ifndef DIRWALK_WALK_HPP
#define DIRWALK_WALK_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "dirwalk/characters.hpp"
#include "dirwalk/primes.hpp"

namespace dirwalk {

enum class WalkMode { Cosine, Sine, Complex };

struct WalkOptions {
  WalkMode mode = WalkMode::Cosine;
  std::uint64_t start = 1;  // 1-based prime index of the first step
  // absolute prime indices at which to record the partial sum; empty means
  // record only the endpoint
  std::vector<std::uint64_t> checkpoints;
};

struct WalkSeries {
  std::int64_t q = 0;
  std::int64_t j = 0;
  WalkMode mode = WalkMode::Cosine;
  std::uint64_t start = 1;
  std::uint64_t length = 0;
  std::vector<std::uint64_t> ns;  // recorded indices, ascending
  std::vector<std::complex<double>> values;  // C_n at each recorded index
  std::complex<double> final_value{0.0, 0.0};
};

// C_n = sum over the first n primes (from `start`) of chi evaluated at p,
// projected per `mode` (real part, imaginary part, or the full value)
WalkSeries walk(const Character& chi, std::uint64_t length,
                const WalkOptions& opts = {}, const SieveConfig& cfg = {});

// | sum_{n<=N} chi(p_n) p_n^{-sigma}
//   - (C_N p_N^{-sigma} + sigma * integral_2^{p_N} C(u) u^{-sigma-1} du) |
// where C(u) counts the complex walk up to u; the integral is evaluated
// exactly as a sum over the gaps between consecutive primes
double abel_identity_residual(const Character& chi, double sigma,
                              std::uint64_t length,
                              const SieveConfig& cfg = {});

enum class ScalingMethod { AbsRegress, EnsembleStd };

// parameters of the ensemble-based size estimate used by scaling_exponent
struct EnsembleStdPolicy {
  std::uint64_t n1 = 1'000'000;        // first block starts at this index
  std::uint64_t spacing = 10;          // fixed gap between blocks
  std::uint64_t index_budget = 21'000'000;  // caps M * (N + spacing)
  std::uint64_t m_min = 32;
  std::uint64_t m_max = 2000;
  std::uint64_t seed = 1;
};

struct ScalingFit {
  ScalingMethod method = ScalingMethod::AbsRegress;
  double alpha = 0.0;          // fitted exponent
  double ci_half_width = 0.0;  // ~95% half width (2 standard errors)
  double intercept = 0.0;
  std::vector<std::uint64_t> n_grid;
  std::vector<double> log_n;
  std::vector<double> log_y;
  std::vector<double> residuals;
};

// least-squares fit of log y ~ alpha * log n over an ascending grid of at
// least 8 points; the estimator shared by both scaling methods, exposed so
// externally produced size measurements (e.g. synthetic streams) can reuse it
ScalingFit fit_power_law(std::span<const std::uint64_t> n_grid,
                         std::span<const double> y, ScalingMethod method);

// fit log(size of C_N) ~ alpha * log N + c over the given ascending grid;
// AbsRegress measures windowed max |C_n|, EnsembleStd the std of block sums
ScalingFit scaling_exponent(const Character& chi,
                            std::span<const std::uint64_t> n_grid,
                            ScalingMethod method, const SieveConfig& cfg = {},
                            const EnsembleStdPolicy& policy = {});

}  // namespace dirwalk

#endif
