#include <cmath>
#include <complex>
#include <numbers>

#include "dirwalk/errors.hpp"
#include "dirwalk/lfunc.hpp"
#include "doctest.h"

using namespace dirwalk;

namespace {

using cplx = std::complex<double>;

SieveConfig no_cache_config() {
  SieveConfig cfg;
  cfg.use_cache = false;
  return cfg;
}

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("gamma function") {
  CHECK(std::abs(gamma({0.5, 0.0}) - cplx{1.772453850905516027298, 0.0}) < 1e-13);
  CHECK(std::abs(gamma({1.0, 0.0}) - cplx{1.0, 0.0}) < 1e-14);
  CHECK(std::abs(gamma({5.0, 0.0}) - cplx{24.0, 0.0}) < 1e-12);
  // reflection side
  CHECK(std::abs(gamma({-2.5, 0.0}) - cplx{-0.9453087204829418812257, 0.0}) < 1e-12);
  // far up the imaginary axis the value is tiny; relative accuracy matters
  const cplx want{-3.430784159145481753193676e-14, 4.542880357463343363542189e-14};
  const cplx got = gamma({0.5, 20.0});
  CHECK(std::abs(got - want) / std::abs(want) < 1e-10);
  // poles
  CHECK_THROWS_AS(gamma({0.0, 0.0}), GammaPole);
  CHECK_THROWS_AS(gamma({-3.0, 0.0}), GammaPole);
  CHECK_NOTHROW(gamma({-3.0, 0.5}));
}

TEST_CASE("hurwitz zeta spot values") {
  SUBCASE("reduces to the riemann zeta at a = 1") {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    CHECK(std::abs(hurwitz_zeta({2.0, 0.0}, 1.0) - cplx{pi2 / 6.0, 0.0}) <
          1e-10);
    CHECK(std::abs(hurwitz_zeta({4.0, 0.0}, 1.0) - cplx{pi2 * pi2 / 90.0, 0.0}) <
          1e-10);
  }
  SUBCASE("half-argument identity zeta(s, 1/2) = (2^s - 1) zeta(s)") {
    const cplx lhs = hurwitz_zeta({3.0, 0.0}, 0.5);
    const cplx rhs = 7.0 * hurwitz_zeta({3.0, 0.0}, 1.0);
    CHECK(close(lhs, rhs, 1e-12));
  }
  SUBCASE("linear value at s = 0 is 1/2 - a") {
    for (const double a : {0.25, 0.3, 0.75, 1.0}) {
      CHECK(std::abs(hurwitz_zeta({0.0, 0.0}, a) - cplx{0.5 - a, 0.0}) < 1e-12);
    }
  }
  SUBCASE("frozen complex value") {
    const cplx want{1.23896515212464516664152414144, -1.58818528825863634228534843211};
    CHECK(close(hurwitz_zeta({0.5, 30.0}, 0.3), want, 1e-10));
  }
  SUBCASE("domain guards") {
    CHECK_THROWS_AS(hurwitz_zeta({2.0, 0.0}, 0.0), DomainError);
    CHECK_THROWS_AS(hurwitz_zeta({2.0, 0.0}, -0.5), DomainError);
    CHECK_THROWS_AS(hurwitz_zeta({2.0, 51.0}, 0.5), DomainError);
    CHECK_THROWS_AS(hurwitz_zeta({-2.5, 0.0}, 0.5), DomainError);
    CHECK_THROWS_AS(hurwitz_zeta({1.0 + 1e-10, 0.0}, 0.5), PoleAt1);
  }
}

TEST_CASE("deflated hurwitz zeta") {
  SUBCASE("agrees with the plain version away from the pole") {
    for (const double a : {0.2, 0.5, 1.0}) {
      const cplx s{2.5, 1.5};
      const cplx lhs = hurwitz_zeta_deflated(s, a);
      const cplx rhs = hurwitz_zeta(s, a) - 1.0 / (s - 1.0);
      CHECK(close(lhs, rhs, 1e-11));
    }
  }
  SUBCASE("value at s = 1 is -digamma(a)") {
    CHECK(std::abs(hurwitz_zeta_deflated({1.0, 0.0}, 1.0) -
                   cplx{0.5772156649015328606, 0.0}) < 1e-12);
    CHECK(std::abs(hurwitz_zeta_deflated({1.0, 0.0}, 0.5) -
                   cplx{1.963510026021423479, 0.0}) < 1e-12);
  }
}

TEST_CASE("dirichlet L values") {
  const CharacterTable t7(7);
  const CharacterTable t3(3);
  SUBCASE("quadratic character mod 3 at s = 1") {
    const cplx want{std::numbers::pi / (3.0 * std::sqrt(3.0)), 0.0};
    CHECK(close(l_eval(t3.character(1), {1.0, 0.0}), want, 1e-13));
  }
  SUBCASE("quadratic character mod 3 at s = 0") {
    CHECK(close(l_eval(t3.character(1), {0.0, 0.0}), {1.0 / 3.0, 0.0}, 1e-13));
  }
  SUBCASE("frozen values mod 7") {
    CHECK(close(l_eval(t7.character(1), {2.0, 0.0}),
                {0.902247025301256861496362, 0.232548981277894995329852}, 1e-12));
    CHECK(close(l_eval(t7.character(3), {0.5, 0.0}),
                {1.14658566690370833367713, 0.0}, 1e-12));
    CHECK(close(l_eval(t7.character(2), {3.0, 0.0}),
                {0.9124052208551546979187, -0.0697636290170945579942}, 1e-12));
    CHECK(close(l_eval(t7.character(4), {0.75, 10.0}),
                {1.756538499421341083969, -0.075090124715033478751}, 1e-10));
  }
  SUBCASE("non-principal values at s = 1 via the deflated path") {
    CHECK(close(l_eval(t7.character(1), {1.0, 0.0}),
                {0.804205729386780644536, 0.398666698818873090127}, 1e-12));
    CHECK(close(l_eval(t7.character(3), {1.0, 0.0}),
                {1.187410411723725948785, 0.0}, 1e-12));
    CHECK(close(l_eval(t7.character(5), {1.0, 0.0}),
                {0.804205729386780644536, -0.398666698818873090127}, 1e-12));
  }
  SUBCASE("principal character factors out of the riemann zeta") {
    // L(2, principal mod 3) = zeta(2) * (1 - 3^-2)
    CHECK(close(l_eval(t3.character(0), {2.0, 0.0}),
                {1.462163614976201276864, 0.0}, 1e-13));
    CHECK_THROWS_AS(l_eval(t3.character(0), {1.0, 0.0}), PoleAt1);
    CHECK_NOTHROW(l_eval(t3.character(0), {1.001, 0.0}));
  }
  SUBCASE("dirichlet series cross-check at s = 3") {
    const Character chi = t7.character(2);
    cplx acc{0.0, 0.0};
    for (std::int64_t n = 1; n <= 200'000; ++n) {
      const cplx v = chi.value(n);
      acc += v / (static_cast<double>(n) * static_cast<double>(n) *
                  static_cast<double>(n));
    }
    CHECK(close(l_eval(chi, {3.0, 0.0}), acc, 1e-9));
  }
  SUBCASE("dirichlet series cross-check, quadratic character mod 3") {
    // The alternating-sign tail after N terms is bounded by N^-sigma, so a
    // partial sum over 10^5 terms pins s = 2, 3, 4 well below 1e-8.
    const Character chi = t3.character(1);
    for (const double sigma : {2.0, 3.0, 4.0}) {
      cplx acc{0.0, 0.0};
      for (std::int64_t n = 100'000; n >= 1; --n) {
        acc += chi.value(n) * std::pow(static_cast<double>(n), -sigma);
      }
      CHECK(std::abs(l_eval(chi, {sigma, 0.0}) - acc) < 1e-8);
    }
  }
}

TEST_CASE("branch-tracked logarithm") {
  const CharacterTable t7(7);
  const Character chi = t7.character(1);
  SUBCASE("frozen values") {
    CHECK(close(log_l_tracked(chi, {2.0, 0.0}),
                {-0.0707076382585101704830, 0.2522539818584788615853}, 1e-11));
    CHECK(close(log_l_tracked(chi, {0.8, 0.0}),
                {-0.1215588839801125774127, 0.5100393450932694725917}, 1e-10));
  }
  SUBCASE("exponentiates back to the L value") {
    for (const cplx s : {cplx{1.5, 3.0}, cplx{0.9, -2.0}, cplx{3.5, 0.0}}) {
      const cplx lg = log_l_tracked(chi, s);
      CHECK(close(std::exp(lg), l_eval(chi, s), 1e-10));
    }
  }
  SUBCASE("principal logarithm cannot cross the pole") {
    const Character principal = t7.character(0);
    CHECK_THROWS_AS(log_l_tracked(principal, {0.8, 0.0}), Error);
  }
}

TEST_CASE("euler product split") {
  const auto cfg = no_cache_config();
  const CharacterTable t7(7);
  const Character chi = t7.character(1);
  SUBCASE("remainder series matches a direct complex logarithm") {
    const auto split = euler_split(chi, {1.2, 0.7}, 100, cfg);
    // recompute with std::log over the same primes
    cplx direct{0.0, 0.0};
    const auto stream = angle_stream(chi, 1, 100, cfg);
    for (std::size_t i = 0; i < stream.primes.size(); ++i) {
      if (stream.values[i].is_zero()) continue;
      const double p = static_cast<double>(stream.primes[i]);
      const cplx z = stream.values[i].value() *
                     std::exp(cplx{-1.2 * std::log(p), -0.7 * std::log(p)});
      direct += -std::log(1.0 - z) - z;
    }
    CHECK(close(split.r_sum, direct, 1e-12));
  }
  SUBCASE("partial sums approach the tracked logarithm") {
    const auto split = euler_split(chi, {2.0, 0.0}, 100'000, cfg);
    CHECK(split.residual < 1e-6);
    CHECK(std::abs(split.x_sum + split.r_sum - split.log_l) == split.residual);
  }
  SUBCASE("residual stays under the prime tail bound") {
    // Truncating the Euler product after the first N primes discards factors
    // whose logs are bounded (for real sigma > 1) by
    //   sum over p > p_N of 2 p^-sigma  <  2 p_N^(1-sigma) / (sigma - 1),
    // comparing against the integral of 2 t^-sigma from p_N.
    const std::uint64_t n = 1000;
    const std::uint64_t p_n = nth_prime(n, cfg);
    for (const double sigma : {2.0, 2.5, 3.0, 3.5, 4.0}) {
      const auto split = euler_split(chi, {sigma, 0.0}, n, cfg);
      const double bound =
          2.0 * std::pow(static_cast<double>(p_n), 1.0 - sigma) / (sigma - 1.0);
      CHECK(split.residual < bound);
    }
  }
  SUBCASE("domain guard") {
    CHECK_THROWS_AS(euler_split(chi, {0.4, 0.0}, 100, cfg), DomainError);
    CHECK_THROWS_AS(euler_split(chi, {1.0, 0.0}, 0, cfg), SpecInvalid);
  }
}

TEST_CASE("functional equation residual") {
  const CharacterTable t7(7);
  const CharacterTable t3(3);
  SUBCASE("tiny on the critical line and inside the strip") {
    for (std::int64_t j = 1; j <= 5; ++j) {
      CHECK(functional_equation_residual(t7.character(j), {0.5, 0.0}) < 1e-10);
      CHECK(functional_equation_residual(t7.character(j), {0.3, 4.0}) < 1e-10);
    }
    CHECK(functional_equation_residual(t3.character(1), {0.25, -11.0}) < 1e-9);
  }
  SUBCASE("principal is rejected") {
    CHECK_THROWS_AS(functional_equation_residual(t7.character(0), {0.5, 0.0}),
                    PrincipalNotSupported);
  }
}

TEST_CASE("residue of L at s = 1") {
  const CharacterTable t7(7);
  const cplx principal = residue_at_one(t7.character(0));
  CHECK(std::abs(principal - cplx{6.0 / 7.0, 0.0}) < 1e-7);
  CHECK(std::abs(residue_at_one(CharacterTable(3).character(0)) -
                 cplx{2.0 / 3.0, 0.0}) < 1e-6);
  for (std::int64_t j = 1; j <= 5; ++j) {
    CHECK(std::abs(residue_at_one(t7.character(j))) < 1e-7);
  }
}
