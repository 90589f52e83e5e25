#include "dirwalk/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dirwalk/errors.hpp"
#include "dirwalk/numeric.hpp"
#include "dirwalk/rng.hpp"
#include "dirwalk/summation.hpp"
#include "dirwalk/walk.hpp"

namespace dirwalk {

namespace {

void validate_spec(const EnsembleSpec& spec) {
  if (spec.n1 == 0) throw SpecInvalid("ensemble: n1 is a 1-based prime index");
  if (spec.block_len == 0) throw SpecInvalid("ensemble: block_len must be >= 1");
  if (spec.blocks == 0) throw SpecInvalid("ensemble: need at least one block");
  switch (spec.spacing.kind) {
    case SpacingKind::Fixed:
      if (spec.spacing.d == 0) {
        throw SpecInvalid("ensemble: fixed spacing must be >= 1");
      }
      break;
    case SpacingKind::RandomUniform:
      if (spec.spacing.lo == 0 || spec.spacing.lo > spec.spacing.hi) {
        throw SpecInvalid("ensemble: random spacing needs 1 <= lo <= hi");
      }
      break;
  }
}

std::vector<std::uint64_t> block_starts(const EnsembleSpec& spec) {
  std::vector<std::uint64_t> starts(spec.blocks);
  CounterRng rng(spec.seed, "spacing");
  std::uint64_t s = spec.n1;
  for (std::uint64_t i = 0; i < spec.blocks; ++i) {
    starts[i] = s;
    const std::uint64_t gap =
        spec.spacing.kind == SpacingKind::Fixed
            ? spec.spacing.d
            : rng.uniform_int(i, spec.spacing.lo, spec.spacing.hi);
    s += spec.block_len + gap;
  }
  return starts;
}

}  // namespace

std::vector<BlockEnsemble> build_ensembles(std::span<const Character> chis,
                                           const EnsembleSpec& spec,
                                           const SieveConfig& cfg) {
  if (chis.empty()) throw SpecInvalid("ensemble: need at least one character");
  const std::int64_t q = chis.front().q();
  for (const auto& chi : chis) {
    if (chi.q() != q) {
      throw SpecInvalid("ensemble: characters must share one modulus");
    }
  }
  validate_spec(spec);

  const auto starts = block_starts(spec);
  const std::uint64_t last_index = starts.back() + spec.block_len - 1;
  if (nth_prime_upper_bound(last_index) > cfg.max_bound) {
    throw BudgetExceeded("ensemble: block layout runs past the sieve budget");
  }

  std::vector<BlockEnsemble> out(chis.size());
  for (std::size_t c = 0; c < chis.size(); ++c) {
    out[c].q = q;
    out[c].j = chis[c].j();
    out[c].spec = spec;
    out[c].starts = starts;
    out[c].start_primes.assign(spec.blocks, 0);
    out[c].blocks.assign(spec.blocks, 0.0);
  }

  std::vector<Kahan<double>> sums(chis.size());
  std::uint64_t n = spec.n1;
  std::size_t b = 0;  // current block
  bool open = false;
  visit_angles(chis.front(), spec.n1, last_index - spec.n1 + 1, cfg,
               [&](std::uint64_t p, std::int64_t res) {
                 if (!open && b < starts.size() && n == starts[b]) {
                   open = true;
                   for (std::size_t c = 0; c < chis.size(); ++c) {
                     out[c].start_primes[b] = p;
                     sums[c] = {};
                   }
                 }
                 if (open) {
                   for (std::size_t c = 0; c < chis.size(); ++c) {
                     sums[c].add(chis[c].cos_at(res));
                   }
                   if (n == starts[b] + spec.block_len - 1) {
                     for (std::size_t c = 0; c < chis.size(); ++c) {
                       out[c].blocks[b] = sums[c].value();
                     }
                     open = false;
                     ++b;
                   }
                 }
                 ++n;
               });
  if (b != starts.size()) {
    throw Error("ensemble: prime stream ended before the last block closed");
  }

  for (auto& ens : out) {
    ens.p_first = static_cast<double>(ens.start_primes.front());
    ens.log_p_drift = std::log(static_cast<double>(ens.start_primes.back())) -
                      std::log(static_cast<double>(ens.start_primes.front()));
  }
  return out;
}

BlockEnsemble build_ensemble(const Character& chi, const EnsembleSpec& spec,
                             const SieveConfig& cfg) {
  const Character chis[] = {chi};
  return std::move(build_ensembles(chis, spec, cfg).front());
}

Moments moments(std::span<const double> xs) {
  if (xs.size() < 2) throw DomainError("moments: need at least two samples");
  const auto n = static_cast<double>(xs.size());
  Kahan<double> acc;
  for (double x : xs) acc.add(x);
  const double mean = acc.value() / n;

  Kahan<double> m2, m3, m4;
  for (double x : xs) {
    const double d = x - mean;
    m2.add(d * d);
    m3.add(d * d * d);
    m4.add(d * d * d * d);
  }
  const double v2 = m2.value() / n;  // population variance

  Moments out;
  out.count = xs.size();
  out.mean = mean;
  out.variance = m2.value() / (n - 1.0);
  if (v2 > 0.0) {
    out.skewness = (m3.value() / n) / std::pow(v2, 1.5);
    out.excess_kurtosis = (m4.value() / n) / (v2 * v2) - 3.0;
  }
  return out;
}

VarianceTheory theory_variance(const Character& chi, std::uint64_t block_len,
                               double p_start) {
  if (chi.is_principal()) {
    throw PrincipalNotSupported("theory_variance: principal blocks are deterministic");
  }
  if (block_len < 3) throw DomainError("theory_variance: block_len must be >= 3");
  if (!(p_start > std::numbers::e)) {
    throw DomainError("theory_variance: p_start must exceed e");
  }

  const double L = std::log(p_start);
  const double H = harmonic(block_len - 2);
  const double q = static_cast<double>(chi.q());
  const double lambda = 1.0 + (1.0 - H) / L - std::log(L) / L;
  const double rho =
      (std::log(q * L / (2.0 * std::numbers::pi * std::numbers::e * std::numbers::e)) + H) / L;

  VarianceTheory out;
  out.lambda = lambda;
  out.rho = rho;
  out.b2 = cos_variance(chi);
  out.variance = out.b2 * (static_cast<double>(block_len) * lambda + rho);
  return out;
}

std::vector<double> normalized(const BlockEnsemble& ens, const Character& chi) {
  if (chi.q() != ens.q || chi.j() != ens.j) {
    throw SpecInvalid("normalized: character does not match the ensemble");
  }
  std::vector<double> out(ens.blocks.size());
  for (std::size_t i = 0; i < ens.blocks.size(); ++i) {
    const auto th = theory_variance(chi, ens.spec.block_len,
                                    static_cast<double>(ens.start_primes[i]));
    if (!(th.variance > 0.0)) {
      throw DomainError("normalized: predicted variance is not positive");
    }
    out[i] = ens.blocks[i] / std::sqrt(th.variance);
  }
  return out;
}

KsTest normality_test(std::span<const double> xs) {
  if (xs.size() < 8) throw DomainError("normality_test: need at least 8 samples");
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());

  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = normal_cdf(sorted[i]);
    const double hi = static_cast<double>(i + 1) / n - cdf;
    const double lo = cdf - static_cast<double>(i) / n;
    d = std::max({d, hi, lo});
  }

  KsTest out;
  out.count = sorted.size();
  out.statistic = d;
  out.p_value = kolmogorov_tail(std::sqrt(n) * d);
  const auto mom = moments(sorted);
  out.sample_mean = mom.mean;
  out.sample_std = std::sqrt(mom.variance);
  return out;
}

ScalingFit fit_power_law(std::span<const std::uint64_t> n_grid,
                         std::span<const double> y, ScalingMethod method) {
  if (n_grid.size() < 8) {
    throw InsufficientGrid("fit_power_law: need at least 8 grid points");
  }
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 2 || (i > 0 && n_grid[i] <= n_grid[i - 1])) {
      throw SpecInvalid("fit_power_law: grid must be ascending with entries >= 2");
    }
  }
  if (y.size() != n_grid.size()) {
    throw SpecInvalid("fit_power_law: one size measurement per grid point");
  }
  constexpr double kFloor = 1e-9;

  ScalingFit fit;
  fit.method = method;
  fit.n_grid.assign(n_grid.begin(), n_grid.end());
  fit.log_n.reserve(n_grid.size());
  fit.log_y.reserve(n_grid.size());
  for (std::uint64_t g : n_grid) {
    fit.log_n.push_back(std::log(static_cast<double>(g)));
  }
  for (double v : y) fit.log_y.push_back(std::log(std::max(v, kFloor)));

  const auto fit_ols = ols(fit.log_n, fit.log_y);
  fit.alpha = fit_ols.slope;
  fit.intercept = fit_ols.intercept;
  fit.ci_half_width = 2.0 * fit_ols.slope_stderr;
  fit.residuals = fit_ols.residuals;
  return fit;
}

ScalingFit scaling_exponent(const Character& chi,
                            std::span<const std::uint64_t> n_grid,
                            ScalingMethod method, const SieveConfig& cfg,
                            const EnsembleStdPolicy& policy) {
  if (n_grid.size() < 8) {
    throw InsufficientGrid("scaling_exponent: need at least 8 grid points");
  }
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 2 || (i > 0 && n_grid[i] <= n_grid[i - 1])) {
      throw SpecInvalid("scaling_exponent: grid must be ascending with entries >= 2");
    }
  }
  std::vector<double> sizes(n_grid.size(), 0.0);

  if (method == ScalingMethod::AbsRegress) {
    // windowed max of |C_n| between consecutive grid points, one pass
    Kahan<std::complex<double>> sum;
    std::uint64_t n = 1;
    std::size_t w = 0;
    visit_angles(chi, 1, n_grid.back(), cfg,
                 [&](std::uint64_t /*p*/, std::int64_t res) {
                   sum.add(chi.value_at(res));
                   sizes[w] = std::max(sizes[w], std::abs(sum.value()));
                   if (n == n_grid[w] && w + 1 < n_grid.size()) ++w;
                   ++n;
                 });
  } else {
    if (chi.is_principal()) {
      throw PrincipalNotSupported("scaling_exponent: principal ensembles have zero spread");
    }
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
      const std::uint64_t g = n_grid[i];
      EnsembleSpec spec;
      spec.n1 = policy.n1;
      spec.block_len = g;
      spec.blocks = std::clamp(policy.index_budget / (g + policy.spacing),
                               policy.m_min, policy.m_max);
      spec.spacing = {SpacingKind::Fixed, policy.spacing, 1, 1};
      spec.seed = policy.seed;
      const auto ens = build_ensemble(chi, spec, cfg);
      sizes[i] = std::sqrt(moments(ens.blocks).variance);
    }
  }

  return fit_power_law(n_grid, sizes, method);
}

}  // namespace dirwalk
