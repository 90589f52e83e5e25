#ifndef DIRWALK_PRIMES_HPP
#define DIRWALK_PRIMES_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dirwalk/characters.hpp"
#include "dirwalk/errors.hpp"

namespace dirwalk {

struct SieveConfig {
  std::uint64_t segment_size = std::uint64_t{1} << 22;  // candidates/segment
  std::uint64_t max_segment_bytes = std::uint64_t{1} << 26;
  std::uint64_t max_bound = std::uint64_t{1} << 34;  // sieve budget on hi
  int threads = 1;
  bool use_cache = true;        // effective only with a cache dir (below)
  std::string cache_dir;        // empty -> $DIRWALK_CACHE_DIR
};

struct PrimeRange {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;  // half-open [lo, hi)
};

// Visit every prime in [r.lo, r.hi) in increasing order, delivered as spans
// of consecutive primes (one span per sieve segment or cache chunk).
void visit_prime_spans(
    PrimeRange r, const SieveConfig& cfg,
    const std::function<void(std::span<const std::uint64_t>)>& f);

template <class F>
void visit_primes(PrimeRange r, const SieveConfig& cfg, F&& f) {
  visit_prime_spans(r, cfg, [&](std::span<const std::uint64_t> ps) {
    for (const std::uint64_t p : ps) f(p);
  });
}

std::vector<std::uint64_t> primes_in(PrimeRange r, const SieveConfig& cfg = {});

// #{p prime : p < x}
std::uint64_t prime_pi(std::uint64_t x, const SieveConfig& cfg = {});

// p_1 = 2, p_2 = 3, ...
std::uint64_t nth_prime(std::uint64_t n, const SieveConfig& cfg = {});

// integral from 2 to x of dt/log t; DomainError for x < 2
double li(double x);

// Rosser-type upper bound for p_n (exact small-n table below 6)
std::uint64_t nth_prime_upper_bound(std::uint64_t n);

// Stream (p_n, p_n mod q) for n in [start, start + count), 1-based indices.
// Stops early if the sieve budget is exhausted (throws BudgetExceeded).
template <class F>
void visit_angles(const Character& chi, std::uint64_t start,
                  std::uint64_t count, const SieveConfig& cfg, F&& f) {
  if (start < 1) throw DomainError("prime indices are 1-based");
  if (count == 0) return;
  const std::uint64_t q = static_cast<std::uint64_t>(chi.q());
  std::uint64_t n = 0;
  const std::uint64_t last = start + count - 1;
  std::uint64_t bound = nth_prime_upper_bound(last);
  if (bound > cfg.max_bound)
    throw BudgetExceeded("angle stream would sieve past the configured bound");
  std::uint64_t lo = 0;
  for (;;) {
    bool done = false;
    visit_prime_spans({lo, bound}, cfg, [&](std::span<const std::uint64_t> ps) {
      if (done || n + ps.size() < start) {
        n += ps.size();
        return;
      }
      for (const std::uint64_t p : ps) {
        ++n;
        if (n < start) continue;
        f(p, static_cast<std::int64_t>(p % q));
        if (n == last) {
          done = true;
          return;
        }
      }
    });
    if (done || n >= last) return;
    lo = bound;
    bound += bound / 4 + 1024;  // estimate fell short; extend
    if (bound > cfg.max_bound)
      throw BudgetExceeded("angle stream would sieve past the configured bound");
  }
}

struct AngleStream {
  std::int64_t q = 0;
  std::int64_t j = 0;
  std::uint64_t start = 0;
  std::vector<std::uint64_t> primes;
  std::vector<UnitValue> values;
};

AngleStream angle_stream(const Character& chi, std::uint64_t start,
                         std::uint64_t count, const SieveConfig& cfg = {});

}  // namespace dirwalk

#endif
