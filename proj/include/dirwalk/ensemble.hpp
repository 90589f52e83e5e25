#ifndef DIRWALK_ENSEMBLE_HPP
#define DIRWALK_ENSEMBLE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "dirwalk/characters.hpp"
#include "dirwalk/primes.hpp"

namespace dirwalk {

enum class SpacingKind { Fixed, RandomUniform };

struct Spacing {
  SpacingKind kind = SpacingKind::Fixed;
  std::uint64_t d = 10;               // Fixed: gap between consecutive blocks
  std::uint64_t lo = 1, hi = 1;       // RandomUniform: gap drawn from [lo, hi]
};

struct EnsembleSpec {
  std::uint64_t n1 = 1'000'000;   // prime index of the first block start
  std::uint64_t block_len = 10'000;  // N
  std::uint64_t blocks = 2000;       // M
  Spacing spacing;
  std::uint64_t seed = 1;  // drives the RandomUniform gap draws only
};

struct BlockEnsemble {
  std::int64_t q = 0;
  std::int64_t j = 0;
  EnsembleSpec spec;
  std::vector<std::uint64_t> starts;        // 1-based start indices
  std::vector<std::uint64_t> start_primes;  // prime at each start index
  std::vector<double> blocks;               // cosine block sums
  double p_first = 0.0;      // prime at the first start
  double log_p_drift = 0.0;  // log(p at last start) - log(p at first start)
};

BlockEnsemble build_ensemble(const Character& chi, const EnsembleSpec& spec,
                             const SieveConfig& cfg = {});

// same block layout for several characters mod the same q, one prime pass
std::vector<BlockEnsemble> build_ensembles(std::span<const Character> chis,
                                           const EnsembleSpec& spec,
                                           const SieveConfig& cfg = {});

struct Moments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

Moments moments(std::span<const double> xs);

// predicted variance of a cosine block sum of length N starting near prime p
struct VarianceTheory {
  double lambda = 0.0;
  double rho = 0.0;
  double b2 = 0.0;        // single-step cosine variance
  double variance = 0.0;  // b2 * (N * lambda + rho)
};

VarianceTheory theory_variance(const Character& chi, std::uint64_t block_len,
                               double p_start);

// each block divided by its own predicted standard deviation (using the
// prime at that block's start)
std::vector<double> normalized(const BlockEnsemble& ens, const Character& chi);

struct KsTest {
  double statistic = 0.0;
  double p_value = 0.0;
  std::uint64_t count = 0;
  double sample_mean = 0.0;
  double sample_std = 0.0;
};

// one-sample Kolmogorov-Smirnov test against the standard normal
KsTest normality_test(std::span<const double> xs);

}  // namespace dirwalk

#endif
