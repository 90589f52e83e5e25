#include "dirwalk/residue_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dirwalk/errors.hpp"

namespace dirwalk {

FrequencyVector frequencies(const Character& chi, std::uint64_t x,
                            const SieveConfig& cfg) {
  if (x < 3) throw DomainError("frequencies: x must be at least 3");
  FrequencyVector out;
  out.q = chi.q();
  out.j = chi.j();
  out.r = chi.order();
  out.x = x;
  out.counts.assign(static_cast<std::size_t>(out.r), 0);

  const std::int64_t q = chi.q();
  const std::int64_t phi = chi.phi();
  // class of residue a: angle index t(a) scaled to the r-th roots actually hit
  std::vector<std::int64_t> class_of(static_cast<std::size_t>(q), -1);
  const std::int64_t step = phi / out.r;
  for (std::int64_t a = 1; a < q; ++a) {
    class_of[static_cast<std::size_t>(a)] = chi.t_at(a) / step;
  }

  std::uint64_t n_pi = 0;
  std::uint64_t zero_count = 0;
  visit_primes({0, x}, cfg, [&](std::uint64_t p) {
    ++n_pi;
    const auto res = static_cast<std::int64_t>(p % static_cast<std::uint64_t>(q));
    if (res == 0) {
      ++zero_count;
    } else {
      ++out.counts[static_cast<std::size_t>(class_of[static_cast<std::size_t>(res)])];
    }
  });
  if (n_pi == 0) throw DomainError("frequencies: no primes below x");

  out.n_pi = n_pi;
  out.zero_count = zero_count;
  out.freqs.resize(out.counts.size());
  const double target = 1.0 / static_cast<double>(out.r);
  double max_dev = 0.0;
  for (std::size_t i = 0; i < out.counts.size(); ++i) {
    out.freqs[i] = static_cast<double>(out.counts[i]) / static_cast<double>(n_pi);
    max_dev = std::max(max_dev, std::abs(out.freqs[i] - target));
  }
  out.max_abs_dev = max_dev;
  return out;
}

namespace {

void validate_pair_args(std::int64_t q, std::span<const int> ks,
                        std::uint64_t x) {
  if (!is_prime_u64(static_cast<std::uint64_t>(q)) || q < 3) {
    throw NotPrime("pair_counts: modulus must be an odd prime >= 3");
  }
  if (ks.empty()) throw SpecInvalid("pair_counts: need at least one lag");
  for (int k : ks) {
    if (k < 1) throw SpecInvalid("pair_counts: lags must be >= 1");
  }
  if (x < 5) throw DomainError("pair_counts: x must be at least 5");
}

}  // namespace

std::vector<PairCountMatrix> pair_counts_multi(std::int64_t q,
                                               std::span<const int> ks,
                                               std::uint64_t x,
                                               const SieveConfig& cfg) {
  validate_pair_args(q, ks, x);
  const int max_k = *std::max_element(ks.begin(), ks.end());

  std::vector<PairCountMatrix> out(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    out[i].q = q;
    out[i].k = ks[i];
    out[i].x = x;
    out[i].counts.assign(static_cast<std::size_t>((q - 1) * (q - 1)), 0);
  }

  // ring of the residues of the most recent max_k + 1 primes
  const std::size_t ring_size = static_cast<std::size_t>(max_k) + 1;
  std::vector<std::int64_t> ring(ring_size, -1);

  std::uint64_t m = 0;        // primes seen so far (1-based index of the last)
  std::uint64_t n_below = 0;  // primes strictly below x among them
  bool crossed = false;       // saw the first prime >= x
  bool done = false;

  auto consume = [&](std::uint64_t p) {
    if (done) return;
    ++m;
    if (p < x) {
      ++n_below;
    } else {
      crossed = true;
    }
    const auto res = static_cast<std::int64_t>(p % static_cast<std::uint64_t>(q));
    ring[m % ring_size] = res;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const auto k = static_cast<std::uint64_t>(ks[i]);
      if (m <= k) continue;
      const std::uint64_t first = m - k;
      if (first > n_below) continue;  // p_first >= x: out of scope
      const std::int64_t a = ring[first % ring_size];
      if (a == 0 || res == 0) {
        ++out[i].dropped;
      } else {
        ++out[i].counts[static_cast<std::size_t>((a - 1) * (q - 1) + (res - 1))];
      }
    }
    if (crossed && m >= n_below + static_cast<std::uint64_t>(max_k)) done = true;
  };

  // stream past x far enough that every pair with first member below x closes
  std::uint64_t lo = 0;
  std::uint64_t hi = x + 4096 + 64 * static_cast<std::uint64_t>(max_k) *
                                  static_cast<std::uint64_t>(std::log(static_cast<double>(x)) + 2.0);
  while (!done) {
    visit_primes({lo, hi}, cfg, consume);
    if (done) break;
    lo = hi;
    hi += hi / 4 + 65536;
    if (hi > cfg.max_bound) {
      throw BudgetExceeded("pair_counts: ran past the sieve budget before closing all pairs");
    }
  }

  for (auto& mat : out) mat.n_pi = n_below;
  return out;
}

PairCountMatrix pair_counts(std::int64_t q, int k, std::uint64_t x,
                            const SieveConfig& cfg) {
  const int ks[] = {k};
  return pair_counts_multi(q, ks, x, cfg)[0];
}

LosPrediction los_predicted(std::int64_t q, int k, double x) {
  if (!is_prime_u64(static_cast<std::uint64_t>(q)) || q < 3) {
    throw NotPrime("los_predicted: modulus must be an odd prime >= 3");
  }
  if (k < 1) throw DomainError("los_predicted: lag must be >= 1");
  if (!(x >= 1000.0)) {
    throw DomainError("los_predicted: prediction needs x >= 1000");
  }

  const double phi = static_cast<double>(q - 1);
  const double inv2 = 1.0 / (phi * phi);
  const double L = std::log(x);
  const double LL = std::log(L);
  const double logq2pi = std::log(static_cast<double>(q) / (2.0 * std::numbers::pi));

  LosPrediction out;
  out.q = q;
  out.k = k;
  out.x = x;
  out.uniform_diag = inv2;
  out.uniform_sym_offdiag = 2.0 * inv2;
  if (k == 1) {
    out.diag = inv2 * (1.0 - 0.5 * (phi - 1.0) * LL / L + (phi - 1.0) * logq2pi / (2.0 * L));
    out.sym_offdiag = 2.0 * inv2 * (1.0 + 0.5 * LL / L - logq2pi / (2.0 * L));
    out.offdiag = std::numeric_limits<double>::quiet_NaN();
  } else {
    const double c = 1.0 / (2.0 * static_cast<double>(k - 1) * L);
    out.diag = inv2 * (1.0 - (phi - 1.0) * c);
    out.offdiag = inv2 * (1.0 + c);
    out.sym_offdiag = 2.0 * out.offdiag;
  }
  return out;
}

BiasReport bias_report(std::int64_t q, std::uint64_t x, int k_max,
                       const SieveConfig& cfg) {
  if (k_max < 1) throw SpecInvalid("bias_report: k_max must be >= 1");
  std::vector<int> ks(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) ks[static_cast<std::size_t>(k - 1)] = k;
  auto mats = pair_counts_multi(q, ks, x, cfg);

  BiasReport rep;
  rep.q = q;
  rep.x = x;
  rep.n_pi = mats[0].n_pi;
  const auto phi = static_cast<double>(q - 1);
  for (auto& mat : mats) {
    BiasRow row;
    row.k = mat.k;
    double diag_sum = 0.0;
    double sym_sum = 0.0;
    for (std::int64_t a = 1; a < q; ++a) {
      diag_sum += mat.freq(a, a);
      for (std::int64_t b = a + 1; b < q; ++b) {
        sym_sum += mat.freq(a, b) + mat.freq(b, a);
      }
    }
    row.emp_diag = diag_sum / phi;
    row.emp_sym_offdiag = sym_sum / (phi * (phi - 1.0) / 2.0);
    const auto los = los_predicted(q, mat.k, static_cast<double>(x));
    row.los_diag = los.diag;
    row.los_sym_offdiag = los.sym_offdiag;
    row.uniform_diag = los.uniform_diag;
    row.uniform_sym_offdiag = los.uniform_sym_offdiag;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace dirwalk
