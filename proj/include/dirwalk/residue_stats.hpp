#ifndef DIRWALK_RESIDUE_STATS_HPP
#define DIRWALK_RESIDUE_STATS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "dirwalk/characters.hpp"
#include "dirwalk/primes.hpp"

namespace dirwalk {

// empirical distribution of character angles over primes p <= x
struct FrequencyVector {
  std::int64_t q = 0;
  std::int64_t j = 0;
  std::int64_t r = 0;  // number of angle classes (order of the character)
  std::uint64_t x = 0;
  std::uint64_t n_pi = 0;        // pi(x), the denominator
  std::uint64_t zero_count = 0;  // primes hitting residue 0 (0 or 1)
  std::vector<std::uint64_t> counts;  // per angle class k: angle 2*pi*k/r
  std::vector<double> freqs;
  double max_abs_dev = 0.0;  // max_k |freqs[k] - 1/r|
};

FrequencyVector frequencies(const Character& chi, std::uint64_t x,
                            const SieveConfig& cfg = {});

// joint residue counts of (p_n mod q, p_{n+k} mod q) over n with p_n < x;
// pairs touching residue 0 are dropped (and tallied), the second member may
// lie beyond x (one-sided cutoff)
struct PairCountMatrix {
  std::int64_t q = 0;
  int k = 0;
  std::uint64_t x = 0;
  std::uint64_t n_pi = 0;
  std::uint64_t dropped = 0;
  std::vector<std::uint64_t> counts;  // (q-1)^2, row-major, residues 1..q-1

  std::uint64_t at(std::int64_t a, std::int64_t b) const {
    return counts[static_cast<std::size_t>((a - 1) * (q - 1) + (b - 1))];
  }
  double freq(std::int64_t a, std::int64_t b) const {
    return static_cast<double>(at(a, b)) / static_cast<double>(n_pi);
  }
};

PairCountMatrix pair_counts(std::int64_t q, int k, std::uint64_t x,
                            const SieveConfig& cfg = {});

// several lags in one pass over the primes
std::vector<PairCountMatrix> pair_counts_multi(std::int64_t q,
                                               std::span<const int> ks,
                                               std::uint64_t x,
                                               const SieveConfig& cfg = {});

// predicted pair frequencies at cutoff x (normalized by pi(x)); the k = 1
// prediction constrains only f_aa and the symmetrized sum f_ab + f_ba
struct LosPrediction {
  std::int64_t q = 0;
  int k = 0;
  double x = 0.0;
  double diag = 0.0;         // f_aa
  double sym_offdiag = 0.0;  // f_ab + f_ba for a != b
  double offdiag = 0.0;      // f_ab for a != b (k >= 2 only; NaN at k = 1)
  double uniform_diag = 0.0;     // 1/phi^2
  double uniform_sym_offdiag = 0.0;  // 2/phi^2
};

LosPrediction los_predicted(std::int64_t q, int k, double x);

struct BiasRow {
  int k = 0;
  double emp_diag = 0.0;         // mean over a of f_aa
  double emp_sym_offdiag = 0.0;  // mean over unordered a != b of f_ab + f_ba
  double los_diag = 0.0;
  double los_sym_offdiag = 0.0;
  double uniform_diag = 0.0;
  double uniform_sym_offdiag = 0.0;
};

struct BiasReport {
  std::int64_t q = 0;
  std::uint64_t x = 0;
  std::uint64_t n_pi = 0;
  std::vector<BiasRow> rows;  // k = 1..k_max
};

BiasReport bias_report(std::int64_t q, std::uint64_t x, int k_max,
                       const SieveConfig& cfg = {});

}  // namespace dirwalk

#endif
