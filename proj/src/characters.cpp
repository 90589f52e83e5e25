#include "dirwalk/characters.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "dirwalk/errors.hpp"
#include "dirwalk/summation.hpp"

namespace dirwalk {
namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

std::vector<std::int64_t> distinct_prime_factors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// cos/sin of 2*pi*t/denom (denom even), reduced to the first quadrant so
// that value(denom - t) == conj(value(t)) and value(t + denom/2) ==
// -value(t) hold bitwise; cardinal angles are exact
void unit_cos_sin(std::int64_t t, std::int64_t denom, double& c, double& s) {
  t %= denom;
  if (t < 0) t += denom;
  double sign_s = 1.0;
  if (2 * t > denom) {  // angle above pi: conjugate of denom - t
    t = denom - t;
    sign_s = -1.0;
  }
  double sign_c = 1.0;
  if (4 * t > denom) {  // second quadrant: cos(pi - x) = -cos x
    t = denom / 2 - t;
    sign_c = -1.0;
  }
  if (t == 0) {
    c = sign_c;
    s = 0.0 * sign_s;
    return;
  }
  if (4 * t == denom) {
    c = sign_c * 0.0;
    s = sign_s;
    return;
  }
  const double x = 2.0 * std::numbers::pi * static_cast<double>(t) /
                   static_cast<double>(denom);
  c = sign_c * std::cos(x);
  s = sign_s * std::sin(x);
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 0; i < r - 1; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

double UnitValue::angle() const {
  if (is_zero()) throw DomainError("UnitValue::angle on a zero value");
  return 2.0 * std::numbers::pi * static_cast<double>(t) /
         static_cast<double>(denom);
}

std::complex<double> UnitValue::value() const {
  if (is_zero()) return {0.0, 0.0};
  double c, s;
  unit_cos_sin(t, denom, c, s);
  return {c, s};
}

CharacterTable::CharacterTable(std::int64_t q) : q_(q) {
  if (q < 3 || q % 2 == 0 || !is_prime_u64(static_cast<std::uint64_t>(q)))
    throw NotPrime("modulus must be an odd prime, got " + std::to_string(q));
  if (q > (std::int64_t{1} << 31))
    throw BudgetExceeded("character table needs O(q) memory; q too large");

  auto data = std::make_shared<Data>();
  data->q = q;
  const std::int64_t phi = q - 1;
  const auto factors = distinct_prime_factors(phi);

  std::int64_t g = 0;
  for (std::int64_t cand = 2; cand < q; ++cand) {
    bool primitive = true;
    for (const std::int64_t f : factors) {
      if (powmod(static_cast<std::uint64_t>(cand),
                 static_cast<std::uint64_t>(phi / f),
                 static_cast<std::uint64_t>(q)) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      g = cand;
      break;
    }
  }
  data->g = g;

  data->index.assign(static_cast<std::size_t>(q), -1);
  std::int64_t x = 1;
  for (std::int64_t k = 0; k < phi; ++k) {
    data->index[static_cast<std::size_t>(x)] = static_cast<std::int32_t>(k);
    x = static_cast<std::int64_t>(
        mulmod(static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(g),
               static_cast<std::uint64_t>(q)));
  }

  data->cos_t.resize(static_cast<std::size_t>(phi));
  data->sin_t.resize(static_cast<std::size_t>(phi));
  for (std::int64_t t = 0; t < phi; ++t) {
    unit_cos_sin(t, phi, data->cos_t[static_cast<std::size_t>(t)],
                 data->sin_t[static_cast<std::size_t>(t)]);
  }

  g_ = g;
  data_ = std::move(data);
}

std::int64_t CharacterTable::index_of(std::int64_t m) const {
  m %= q_;
  if (m < 0) m += q_;
  if (m == 0) throw DomainError("index_of: argument divisible by the modulus");
  return data_->index[static_cast<std::size_t>(m)];
}

Character CharacterTable::character(std::int64_t j) const {
  if (j < 0 || j >= phi())
    throw DomainError("character label j must lie in [0, phi)");
  return Character(data_, j);
}

Character::Character(std::shared_ptr<const CharacterTable::Data> data,
                     std::int64_t j)
    : data_(std::move(data)), j_(j) {
  const std::int64_t q = data_->q;
  const std::int64_t phi = q - 1;
  t_res_.assign(static_cast<std::size_t>(q), UnitValue::kZero);
  cos_res_.assign(static_cast<std::size_t>(q), 0.0);
  sin_res_.assign(static_cast<std::size_t>(q), 0.0);
  for (std::int64_t m = 1; m < q; ++m) {
    const std::int64_t t =
        (j_ * data_->index[static_cast<std::size_t>(m)]) % phi;
    t_res_[static_cast<std::size_t>(m)] = t;
    cos_res_[static_cast<std::size_t>(m)] =
        data_->cos_t[static_cast<std::size_t>(t)];
    sin_res_[static_cast<std::size_t>(m)] =
        data_->sin_t[static_cast<std::size_t>(t)];
  }
}

std::int64_t Character::order() const {
  return phi() / std::gcd(j_, phi());
}

int Character::parity() const {
  // chi(-1) = exp(pi*i*j) since ind(q-1) = phi/2
  return static_cast<int>(j_ & 1);
}

Character Character::conjugate() const {
  return Character(data_, j_ == 0 ? 0 : phi() - j_);
}

UnitValue Character::eval(std::int64_t m) const {
  const std::int64_t q = data_->q;
  m %= q;
  if (m < 0) m += q;
  return {t_res_[static_cast<std::size_t>(m)], phi()};
}

std::complex<double> Character::value(std::int64_t m) const {
  const std::int64_t q = data_->q;
  m %= q;
  if (m < 0) m += q;
  return value_at(m);
}

std::complex<double> gauss_sum(const Character& chi) {
  const std::int64_t q = chi.q();
  const std::int64_t phi = chi.phi();
  const std::int64_t denom = q * phi;
  Kahan<std::complex<double>> acc;
  for (std::int64_t m = 1; m < q; ++m) {
    const std::int64_t t = chi.t_at(m);
    if (t == UnitValue::kZero) continue;
    // chi(m) e^{2 pi i m / q} = exp(2 pi i (t q + m phi) / (q phi))
    const std::int64_t a = (t * q + m * phi) % denom;
    double c, s;
    unit_cos_sin(a, denom, c, s);
    acc.add({c, s});
  }
  return acc.value();
}

double CharacterTable::orthogonality_max_residual() const {
  const std::int64_t q = q_;
  const std::int64_t phi = q - 1;
  std::vector<Character> chars;
  chars.reserve(static_cast<std::size_t>(phi));
  for (std::int64_t j = 0; j < phi; ++j) chars.push_back(character(j));

  double worst = 0.0;
  // sum over characters: sum_j chi_j(k) conj(chi_j(l)) = phi * [k == l]
  for (std::int64_t k = 1; k < q; ++k) {
    for (std::int64_t l = 1; l < q; ++l) {
      Kahan<std::complex<double>> acc;
      for (const auto& chi : chars)
        acc.add(chi.value_at(k) * std::conj(chi.value_at(l)));
      const std::complex<double> expect{k == l ? static_cast<double>(phi) : 0.0,
                                        0.0};
      worst = std::max(worst, std::abs(acc.value() - expect));
    }
  }
  // sum over residues: sum_m chi_r(m) conj(chi_s(m)) = phi * [r == s]
  for (std::int64_t r = 0; r < phi; ++r) {
    for (std::int64_t s = 0; s < phi; ++s) {
      Kahan<std::complex<double>> acc;
      for (std::int64_t m = 1; m < q; ++m)
        acc.add(chars[static_cast<std::size_t>(r)].value_at(m) *
                std::conj(chars[static_cast<std::size_t>(s)].value_at(m)));
      const std::complex<double> expect{r == s ? static_cast<double>(phi) : 0.0,
                                        0.0};
      worst = std::max(worst, std::abs(acc.value() - expect));
    }
  }
  return worst;
}

double cos_variance(const Character& chi) {
  if (chi.is_principal())
    throw PrincipalNotSupported("cos_variance undefined for j = 0");
  const std::int64_t r = chi.order();
  const std::int64_t phi = chi.phi();
  // the image is exactly the group of r-th roots of unity: t = k*(phi/r)
  Kahan<double> acc;
  for (std::int64_t k = 0; k < r; ++k) {
    double c, s;
    unit_cos_sin(k * (phi / r), phi, c, s);
    acc.add(c * c);
  }
  return acc.value() / static_cast<double>(r);
}

}  // namespace dirwalk
