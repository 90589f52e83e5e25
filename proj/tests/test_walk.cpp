#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "dirwalk/ensemble.hpp"
#include "dirwalk/errors.hpp"
#include "dirwalk/rng.hpp"
#include "dirwalk/walk.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace dirwalk;

namespace {

SieveConfig no_cache_config() {
  SieveConfig cfg;
  cfg.use_cache = false;
  return cfg;
}

}  // namespace

TEST_CASE("quadratic walk over the first five primes sums to zero") {
  // chi values at primes 2,3,5,7,11 are +1,-1,-1,0,+1
  const Character chi = CharacterTable(7).character(3);
  const auto w = walk(chi, 5, {}, no_cache_config());
  CHECK(w.final_value.real() == 0.0);
  CHECK(w.final_value.imag() == 0.0);
}

TEST_CASE("principal walk counts unramified primes") {
  const auto cfg = no_cache_config();
  const Character chi = CharacterTable(7).character(0);
  // 7 itself is the 4th prime, the only dropout
  for (const std::uint64_t n : {4, 10, 100, 1000}) {
    const auto w = walk(chi, n, {}, cfg);
    CHECK(w.final_value.real() == static_cast<double>(n - 1));
    CHECK(w.final_value.imag() == 0.0);
  }
  const auto w3 = walk(chi, 3, {}, cfg);
  CHECK(w3.final_value.real() == 3.0);
}

TEST_CASE("conjugate characters mirror the walk") {
  const auto cfg = no_cache_config();
  const CharacterTable t(7);
  WalkOptions cos_opts;
  cos_opts.mode = WalkMode::Cosine;
  WalkOptions sin_opts;
  sin_opts.mode = WalkMode::Sine;
  for (std::int64_t j : {1, 2}) {
    const Character chi = t.character(j);
    const Character bar = chi.conjugate();
    const auto c1 = walk(chi, 500, cos_opts, cfg);
    const auto c2 = walk(bar, 500, cos_opts, cfg);
    CHECK(c1.final_value.real() == c2.final_value.real());  // bitwise
    const auto s1 = walk(chi, 500, sin_opts, cfg);
    const auto s2 = walk(bar, 500, sin_opts, cfg);
    CHECK(s1.final_value.real() == -s2.final_value.real());
  }
}

TEST_CASE("complex walk decomposes into cosine and sine walks") {
  const auto cfg = no_cache_config();
  const Character chi = CharacterTable(7).character(1);
  WalkOptions o;
  o.mode = WalkMode::Complex;
  const auto both = walk(chi, 777, o, cfg);
  o.mode = WalkMode::Cosine;
  const auto c = walk(chi, 777, o, cfg);
  o.mode = WalkMode::Sine;
  const auto s = walk(chi, 777, o, cfg);
  CHECK(both.final_value.real() == c.final_value.real());
  CHECK(both.final_value.imag() == s.final_value.real());
}

TEST_CASE("walk values agree with a naive accumulation") {
  const auto cfg = no_cache_config();
  const Character chi = CharacterTable(11).character(3);
  WalkOptions o;
  o.mode = WalkMode::Complex;
  o.checkpoints = {1, 7, 100, 250};
  const auto w = walk(chi, 250, o, cfg);
  REQUIRE(w.ns == std::vector<std::uint64_t>{1, 7, 100, 250});

  const auto ps = oracles::naive_primes_below(2000);
  std::complex<double> acc{0.0, 0.0};
  std::size_t cp = 0;
  for (std::size_t n = 1; n <= 250; ++n) {
    acc += chi.value(static_cast<std::int64_t>(ps[n - 1]));
    if (cp < w.ns.size() && n == w.ns[cp]) {
      CHECK(std::abs(w.values[cp] - acc) < 1e-11);
      ++cp;
    }
  }
  CHECK(cp == 4);
  CHECK(std::abs(w.final_value - acc) < 1e-11);
}

TEST_CASE("walk magnitude is bounded by its length") {
  const auto cfg = no_cache_config();
  const CharacterTable t(7);
  WalkOptions o;
  o.mode = WalkMode::Complex;
  for (std::int64_t j = 0; j < 6; ++j) {
    const auto w = walk(t.character(j), 2'000, o, cfg);
    CHECK(std::abs(w.final_value) <= 2'000.0);
  }
}

TEST_CASE("restarting mid-stream matches the difference of prefixes") {
  const auto cfg = no_cache_config();
  const Character chi = CharacterTable(7).character(2);
  WalkOptions o;
  o.mode = WalkMode::Complex;
  const auto whole = walk(chi, 500, o, cfg);
  const auto head = walk(chi, 100, o, cfg);
  WalkOptions tail_opts;
  tail_opts.mode = WalkMode::Complex;
  tail_opts.start = 101;
  const auto tail = walk(chi, 400, tail_opts, cfg);
  CHECK(std::abs(whole.final_value - (head.final_value + tail.final_value)) <
        1e-12);
}

TEST_CASE("walk of length zero is an empty series") {
  const auto cfg = no_cache_config();
  const Character chi = CharacterTable(7).character(1);
  const WalkSeries s = walk(chi, 0, {}, cfg);
  CHECK(s.length == 0);
  CHECK(s.ns.empty());
  CHECK(s.values.empty());
  CHECK(s.final_value == std::complex<double>(0.0, 0.0));
  WalkOptions with_cp;
  with_cp.checkpoints = {1};
  CHECK_THROWS_AS(walk(chi, 0, with_cp, cfg), SpecInvalid);
}

TEST_CASE("walk argument validation") {
  const auto cfg = no_cache_config();
  const Character chi = CharacterTable(7).character(1);
  WalkOptions bad_start;
  bad_start.start = 0;
  CHECK_THROWS_AS(walk(chi, 10, bad_start, cfg), SpecInvalid);
  WalkOptions bad_cp;
  bad_cp.checkpoints = {11};
  CHECK_THROWS_AS(walk(chi, 10, bad_cp, cfg), SpecInvalid);
  WalkOptions low_cp;
  low_cp.start = 5;
  low_cp.checkpoints = {4};
  CHECK_THROWS_AS(walk(chi, 10, low_cp, cfg), SpecInvalid);
}

TEST_CASE("abel identity closes to machine precision") {
  const auto cfg = no_cache_config();
  const CharacterTable t(7);
  for (const double sigma : {0.6, 1.5}) {
    for (std::int64_t j = 1; j <= 5; ++j) {
      CHECK(abel_identity_residual(t.character(j), sigma, 10'000, cfg) < 1e-9);
    }
  }
  // holds for the principal character too
  CHECK(abel_identity_residual(t.character(0), 1.1, 10'000, cfg) < 1e-9);
}

TEST_CASE("scaling fit on the deterministic principal walk") {
  const auto cfg = no_cache_config();
  const Character chi = CharacterTable(7).character(0);
  const std::uint64_t grid[] = {100,  215,  464,   1000, 2154,
                                4642, 10000, 21544, 46416, 100000};
  const auto fit =
      scaling_exponent(chi, grid, ScalingMethod::AbsRegress, cfg, {});
  CHECK(fit.alpha > 0.99);
  CHECK(fit.alpha < 1.01);
  CHECK(fit.log_n.size() == 10);
  CHECK(fit.residuals.size() == 10);
}

TEST_CASE("scaling grid validation") {
  const auto cfg = no_cache_config();
  const Character chi = CharacterTable(7).character(1);
  const std::uint64_t short_grid[] = {10, 20, 30, 40, 50, 60, 70};
  CHECK_THROWS_AS(
      scaling_exponent(chi, short_grid, ScalingMethod::AbsRegress, cfg, {}),
      InsufficientGrid);
  const std::uint64_t bad_grid[] = {10, 20, 30, 40, 50, 60, 70, 70};
  CHECK_THROWS_AS(
      scaling_exponent(chi, bad_grid, ScalingMethod::AbsRegress, cfg, {}),
      SpecInvalid);
  const Character principal = CharacterTable(7).character(0);
  const std::uint64_t grid[] = {10, 20, 30, 40, 50, 60, 70, 80};
  CHECK_THROWS_AS(
      scaling_exponent(principal, grid, ScalingMethod::EnsembleStd, cfg, {}),
      PrincipalNotSupported);
}

TEST_CASE("ensemble-based scaling on a short synthetic-friendly grid") {
  // small grid keeps this a unit test; the full banded check lives in the
  // acceptance battery
  const auto cfg = no_cache_config();
  const Character chi = CharacterTable(7).character(3);
  const std::uint64_t grid[] = {16, 32, 64, 128, 256, 512, 1024, 2048};
  EnsembleStdPolicy policy;
  policy.n1 = 1000;
  policy.index_budget = 400'000;
  policy.m_min = 32;
  policy.m_max = 200;
  const auto fit =
      scaling_exponent(chi, grid, ScalingMethod::EnsembleStd, cfg, policy);
  // diffusive ballpark; wide band because the ensembles are small
  CHECK(fit.alpha > 0.3);
  CHECK(fit.alpha < 0.7);
  CHECK(fit.ci_half_width > 0.0);
}

TEST_CASE("synthetic coin-flip stream recovers the diffusive exponent") {
  // i.i.d. +/-1 increments stand in for character values; the std of block
  // sums over independent blocks of length N concentrates at sqrt(N), so the
  // fitted slope must land close to 1/2.
  const std::uint64_t grid[] = {100,   215,   464,    1000,  2154,
                                4642,  10000, 21544,  46416, 100000};
  const CounterRng rng(99, "coin-flips");
  std::uint64_t index = 0;
  std::vector<double> sds;
  for (const std::uint64_t n : grid) {
    constexpr std::uint64_t kBlocks = 200;
    std::vector<double> sums(kBlocks, 0.0);
    for (auto& s : sums) {
      for (std::uint64_t i = 0; i < n; ++i) {
        s += rng.uniform_int(index++, 0, 1) == 0 ? -1.0 : 1.0;
      }
    }
    sds.push_back(std::sqrt(moments(sums).variance));
  }
  const auto fit = fit_power_law(grid, sds, ScalingMethod::EnsembleStd);
  CHECK(fit.alpha > 0.47);
  CHECK(fit.alpha < 0.53);
}
