#include "dirwalk/lfunc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dirwalk/errors.hpp"
#include "dirwalk/summation.hpp"

namespace dirwalk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxImag = 50.0;
constexpr double kMinReal = -2.0;

bool near_nonpositive_integer(std::complex<double> z) {
  if (std::abs(z.imag()) > 1e-12) return false;
  const double r = std::round(z.real());
  return r <= 0.0 && std::abs(z.real() - r) < 1e-12;
}

// (n + a)^{-s-shift} for real n + a > 0
std::complex<double> neg_pow(double base, std::complex<double> s, double shift) {
  const double lg = std::log(base);
  if (s.imag() == 0.0) {
    return {std::exp(-(s.real() + shift) * lg), 0.0};
  }
  return std::exp(-(s + shift) * lg);
}

// (e^w - 1) / w, accurate near 0
std::complex<double> phi1(std::complex<double> w) {
  if (std::abs(w) >= 0.5) return (std::exp(w) - 1.0) / w;
  std::complex<double> term{1.0, 0.0};
  std::complex<double> acc{1.0, 0.0};
  for (int k = 1; k < 32; ++k) {
    term *= w / static_cast<double>(k + 1);
    acc += term;
    if (std::abs(term) < 1e-20) break;
  }
  return acc;
}

void check_strip(std::complex<double> s, const char* who) {
  if (std::abs(s.imag()) > kMaxImag) {
    throw DomainError(std::string(who) + ": |Im s| <= 50 is the supported strip");
  }
  if (s.real() < kMinReal) {
    throw DomainError(std::string(who) + ": Re s >= -2 is the supported strip");
  }
}

// B_{2j} / (2j)! for j = 1..8
constexpr double kBernFac[8] = {
    8.3333333333333333e-2,   // 1/12
    -1.3888888888888889e-3,  // -1/720
    3.3068783068783069e-5,   // 1/30240
    -8.2671957671957672e-7,  // -1/1209600
    2.0876756987868099e-8,   // 1/47900160
    -5.2841901386874932e-10, // -691/1307674368000
    1.3382536530684679e-11,  // 1/74724249600
    -3.3896802963225829e-13, // -3617/10670622842880000
};

std::complex<double> hurwitz_em(std::complex<double> s, double a, double tol,
                                bool deflated) {
  std::uint64_t K = std::max<std::uint64_t>(
      16, static_cast<std::uint64_t>(std::ceil(std::abs(s))));
  for (;; K *= 2) {
    if (K > (1u << 24)) {
      throw Error("hurwitz_zeta: Euler-Maclaurin tail failed to converge");
    }
    Kahan<std::complex<double>> head;
    for (std::uint64_t n = 0; n < K; ++n) {
      head.add(neg_pow(static_cast<double>(n) + a, s, 0.0));
    }
    const double edge = static_cast<double>(K) + a;
    const double log_edge = std::log(edge);

    // integral term: edge^{1-s}/(s-1), or its deflation by 1/(s-1)
    std::complex<double> pole_term;
    if (deflated) {
      pole_term = -log_edge * phi1((1.0 - s) * log_edge);
    } else {
      pole_term = neg_pow(edge, s, -1.0) / (s - 1.0);
    }

    std::complex<double> total =
        head.value() + pole_term + 0.5 * neg_pow(edge, s, 0.0);

    // correction sum: B_{2j}/(2j)! * s(s+1)...(s+2j-2) * edge^{-s-2j+1}
    std::complex<double> poch{1.0, 0.0};
    std::complex<double> last{0.0, 0.0};
    for (int j = 1; j <= 8; ++j) {
      poch *= (s + static_cast<double>(2 * j - 2));
      if (j > 1) poch *= (s + static_cast<double>(2 * j - 3));
      last = kBernFac[j - 1] * poch * neg_pow(edge, s, static_cast<double>(2 * j - 1));
      total += last;
    }
    if (std::abs(last) * 2.0 <= tol * std::max(1.0, std::abs(total))) {
      return total;
    }
  }
}

}  // namespace

std::complex<double> gamma(std::complex<double> z) {
  // Lanczos, g = 7, 9 coefficients
  static constexpr double kCoef[9] = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
  };
  if (near_nonpositive_integer(z)) {
    throw GammaPole("gamma: pole at a non-positive integer");
  }
  if (z.real() < 0.5) {
    return kPi / (std::sin(kPi * z) * gamma(1.0 - z));
  }
  const std::complex<double> w = z - 1.0;
  std::complex<double> x{kCoef[0], 0.0};
  for (int i = 1; i < 9; ++i) {
    x += kCoef[i] / (w + static_cast<double>(i));
  }
  const std::complex<double> t = w + 7.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, w + 0.5) * std::exp(-t) * x;
}

std::complex<double> hurwitz_zeta(std::complex<double> s, double a, double tol) {
  check_strip(s, "hurwitz_zeta");
  if (!(a > 0.0)) throw DomainError("hurwitz_zeta: a must be positive");
  if (std::abs(s - 1.0) < 1e-8) throw PoleAt1("hurwitz_zeta: pole at s = 1");
  return hurwitz_em(s, a, tol, false);
}

std::complex<double> hurwitz_zeta_deflated(std::complex<double> s, double a,
                                           double tol) {
  check_strip(s, "hurwitz_zeta");
  if (!(a > 0.0)) throw DomainError("hurwitz_zeta: a must be positive");
  return hurwitz_em(s, a, tol, true);
}

std::complex<double> l_eval(const Character& chi, std::complex<double> s,
                            double tol) {
  check_strip(s, "l_eval");
  const std::int64_t q = chi.q();
  const double term_tol = tol / static_cast<double>(q);
  if (chi.is_principal()) {
    if (std::abs(s - 1.0) < 1e-8) throw PoleAt1("l_eval: principal L has a pole at s = 1");
    Kahan<std::complex<double>> acc;
    for (std::int64_t r = 1; r < q; ++r) {
      acc.add(hurwitz_em(s, static_cast<double>(r) / static_cast<double>(q),
                         term_tol, false));
    }
    return neg_pow(static_cast<double>(q), s, 0.0) * acc.value();
  }
  // sum_r chi(r) = 0, so the deflation terms cancel exactly and s = 1 is fine
  Kahan<std::complex<double>> acc;
  for (std::int64_t r = 1; r < q; ++r) {
    const std::complex<double> c = chi.value_at(r);
    acc.add(c * hurwitz_em(s, static_cast<double>(r) / static_cast<double>(q),
                           term_tol, true));
  }
  return neg_pow(static_cast<double>(q), s, 0.0) * acc.value();
}

std::complex<double> log_l_tracked(const Character& chi,
                                   std::complex<double> s, double tol) {
  check_strip(s, "log_l_tracked");
  constexpr double kAnchor = 3.0;
  if (s.real() >= kAnchor) {
    // Dirichlet series dominated by 1, value stays in the right half plane
    return std::log(l_eval(chi, s, tol));
  }
  const double t = s.imag();
  std::complex<double> cur_log =
      std::log(l_eval(chi, {kAnchor, t}, tol));
  double pos = kAnchor;
  const double target = s.real();
  double step = (kAnchor - target) / 24.0;
  int calm = 0;
  const double init_step = step;
  while (pos > target + 1e-15) {
    const double next = std::max(target, pos - step);
    const std::complex<double> val = l_eval(chi, {next, t}, tol);
    if (val == std::complex<double>{0.0, 0.0}) {
      throw BranchAmbiguity("log_l_tracked: hit a zero of L on the path");
    }
    std::complex<double> lg = std::log(val);
    const double wind =
        std::round((cur_log.imag() - lg.imag()) / (2.0 * kPi));
    lg += std::complex<double>{0.0, 2.0 * kPi * wind};
    if (std::abs(lg.imag() - cur_log.imag()) > kPi / 2.0) {
      step /= 2.0;
      calm = 0;
      if (step < 1e-9) {
        throw BranchAmbiguity(
            "log_l_tracked: step underflow, a zero is too close to the path");
      }
      continue;
    }
    cur_log = lg;
    pos = next;
    if (++calm >= 4 && step < init_step) {
      step = std::min(init_step, step * 2.0);
      calm = 0;
    }
  }
  return cur_log;
}

EulerSplit euler_split(const Character& chi, std::complex<double> s,
                       std::uint64_t length, const SieveConfig& cfg,
                       double tol) {
  check_strip(s, "euler_split");
  if (!(s.real() > 0.5)) {
    throw DomainError("euler_split: supported for Re s > 1/2");
  }
  if (length == 0) throw SpecInvalid("euler_split: length must be >= 1");

  Kahan<std::complex<double>> x_sum;
  Kahan<std::complex<double>> r_sum;
  const double sigma = s.real();
  const double t = s.imag();
  visit_angles(chi, 1, length, cfg,
               [&](std::uint64_t p, std::int64_t res) {
                 if (res == 0) return;  // chi vanishes there
                 const double pd = static_cast<double>(p);
                 const double r = std::pow(pd, -sigma);
                 std::complex<double> z = chi.value_at(res) * r;
                 if (t != 0.0) {
                   const double th = -t * std::log(pd);
                   z *= std::complex<double>{std::cos(th), std::sin(th)};
                 }
                 x_sum.add(z);
                 // -log(1-z) - z = sum_{m>=2} z^m / m, |z| < 2^{-1/2}
                 std::complex<double> zp = z * z;
                 Kahan<std::complex<double>> w;
                 for (int m = 2; m < 512; ++m) {
                   const std::complex<double> term = zp / static_cast<double>(m);
                   w.add(term);
                   if (std::abs(term) < 1e-19) break;
                   zp *= z;
                 }
                 r_sum.add(w.value());
               });

  EulerSplit out;
  out.x_sum = x_sum.value();
  out.r_sum = r_sum.value();
  out.log_l = log_l_tracked(chi, s, tol);
  out.residual = std::abs(out.x_sum + out.r_sum - out.log_l);
  return out;
}

double functional_equation_residual(const Character& chi,
                                    std::complex<double> s, double tol) {
  if (chi.is_principal()) {
    throw PrincipalNotSupported("functional_equation_residual: primitive characters only");
  }
  check_strip(s, "functional_equation_residual");
  check_strip(1.0 - s, "functional_equation_residual");

  const double q = static_cast<double>(chi.q());
  const std::complex<double> lhs = l_eval(chi, 1.0 - s, tol);

  const std::complex<double> ipow =
      chi.parity() == 0 ? std::complex<double>{1.0, 0.0}
                        : std::complex<double>{0.0, -1.0};  // i^{-a}
  const std::complex<double> trig =
      chi.parity() == 0 ? std::cos(kPi * s / 2.0) : std::sin(kPi * s / 2.0);
  const std::complex<double> rhs =
      ipow * std::exp((s - 1.0) * std::log(q)) * gamma(s) *
      std::exp(-s * std::log(2.0 * kPi)) * gauss_sum(chi) * 2.0 * trig *
      l_eval(chi.conjugate(), s, tol);
  return std::abs(lhs - rhs);
}

std::complex<double> residue_at_one(const Character& chi, double tol) {
  const double hs[3] = {1e-2, 1e-3, 1e-4};
  std::complex<double> f[3];
  for (int i = 0; i < 3; ++i) {
    f[i] = hs[i] * l_eval(chi, {1.0 + hs[i], 0.0}, tol);
  }
  // quadratic extrapolation to h = 0
  std::complex<double> out{0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    double w = 1.0;
    for (int k = 0; k < 3; ++k) {
      if (k != i) w *= (0.0 - hs[k]) / (hs[i] - hs[k]);
    }
    out += w * f[i];
  }
  return out;
}

}  // namespace dirwalk
