#ifndef DIRWALK_LFUNC_HPP
#define DIRWALK_LFUNC_HPP

#include <complex>
#include <cstdint>

#include "dirwalk/characters.hpp"
#include "dirwalk/primes.hpp"

namespace dirwalk {

// complex gamma function (Lanczos approximation with reflection);
// throws GammaPole at non-positive integers
std::complex<double> gamma(std::complex<double> z);

// zeta(s, a) = sum_{n>=0} (n+a)^{-s} continued via Euler-Maclaurin;
// supported for Re s >= -2, |Im s| <= 50, a > 0; throws PoleAt1 near s = 1
std::complex<double> hurwitz_zeta(std::complex<double> s, double a,
                                  double tol = 1e-12);

// zeta(s, a) - 1/(s-1): entire in s, defined at s = 1 (equals -digamma(a))
std::complex<double> hurwitz_zeta_deflated(std::complex<double> s, double a,
                                           double tol = 1e-12);

// L(s, chi) as a q-term combination of Hurwitz zetas; non-principal
// characters use the deflated form so s = 1 is allowed, the principal
// character throws PoleAt1 near s = 1
std::complex<double> l_eval(const Character& chi, std::complex<double> s,
                            double tol = 1e-12);

// log L(s, chi) continued from Re s = 3 along fixed Im s, keeping the
// imaginary part continuous; throws BranchAmbiguity if a zero blocks the path
std::complex<double> log_l_tracked(const Character& chi,
                                   std::complex<double> s, double tol = 1e-12);

// split of log L over the first `length` primes: the character sum
// X = sum chi(p) p^{-s} plus the higher prime-power remainder
// R = sum (-log(1 - chi(p) p^{-s}) - chi(p) p^{-s}); requires Re s > 1/2
struct EulerSplit {
  std::complex<double> x_sum{0.0, 0.0};
  std::complex<double> r_sum{0.0, 0.0};
  std::complex<double> log_l{0.0, 0.0};  // branch-tracked reference
  double residual = 0.0;                 // |x_sum + r_sum - log_l|
};

EulerSplit euler_split(const Character& chi, std::complex<double> s,
                       std::uint64_t length, const SieveConfig& cfg = {},
                       double tol = 1e-12);

// |L(1-s, chi) - i^{-a} q^{s-1} (2pi)^{-s} Gamma(s) G(chi)
//   * 2 {cos,sin}(pi s / 2) L(s, conj chi)|
// with cos for even characters, sin for odd ones; non-principal only
double functional_equation_residual(const Character& chi,
                                    std::complex<double> s,
                                    double tol = 1e-12);

// lim_{s->1} (s-1) L(s, chi) by Richardson extrapolation of h * L(1+h);
// phi(q)/q for the principal character, ~0 otherwise
std::complex<double> residue_at_one(const Character& chi, double tol = 1e-12);

}  // namespace dirwalk

#endif
