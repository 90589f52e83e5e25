#ifndef DIRWALK_CHARACTERS_HPP
#define DIRWALK_CHARACTERS_HPP

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

namespace dirwalk {

// A character value: either zero (argument shares a factor with q) or a root
// of unity exp(2*pi*i*t/denom) held as the exact angle index t.
struct UnitValue {
  static constexpr std::int64_t kZero = -1;

  std::int64_t t = kZero;
  std::int64_t denom = 1;

  bool is_zero() const { return t == kZero; }
  double angle() const;  // 2*pi*t/denom; DomainError on zero values
  std::complex<double> value() const;

  friend bool operator==(const UnitValue&, const UnitValue&) = default;
};

class Character;

// Dirichlet characters mod an odd prime q, labelled by the exponent j of the
// image of the smallest primitive root g: chi_j(g^k) = exp(2*pi*i*j*k/(q-1)).
class CharacterTable {
 public:
  explicit CharacterTable(std::int64_t q);  // throws NotPrime

  std::int64_t q() const { return q_; }
  std::int64_t phi() const { return q_ - 1; }
  std::int64_t generator() const { return g_; }

  // discrete log base g of m (m not divisible by q)
  std::int64_t index_of(std::int64_t m) const;

  Character character(std::int64_t j) const;  // DomainError unless 0 <= j < phi

  // max |residual| over both orthogonality relations:
  // sum_j chi_j(k) conj(chi_j(l)) and sum_m chi_r(m) conj(chi_s(m))
  double orthogonality_max_residual() const;

 private:
  friend class Character;
  struct Data {
    std::int64_t q = 0;
    std::int64_t g = 0;
    std::vector<std::int32_t> index;  // index[m] = dlog_g(m), m in [1, q)
    std::vector<double> cos_t;        // cos(2*pi*t/phi), cardinal-snapped
    std::vector<double> sin_t;
  };
  std::int64_t q_ = 0;
  std::int64_t g_ = 0;
  std::shared_ptr<const Data> data_;
};

class Character {
 public:
  Character() = default;

  std::int64_t q() const { return data_->q; }
  std::int64_t phi() const { return data_->q - 1; }
  std::int64_t j() const { return j_; }

  bool is_principal() const { return j_ == 0; }
  // order r = phi / gcd(j, phi)
  std::int64_t order() const;
  // real iff the image lies in {+-1}, i.e. r <= 2
  bool is_real() const { return order() <= 2; }
  // 0 if chi(-1) = +1, 1 if chi(-1) = -1
  int parity() const;

  Character conjugate() const;

  UnitValue eval(std::int64_t m) const;  // m may be any integer
  std::complex<double> value(std::int64_t m) const;

  // cos/sin of the value at a residue in [0, q); zero residue gives 0
  double cos_at(std::int64_t residue) const {
    return cos_res_[static_cast<std::size_t>(residue)];
  }
  double sin_at(std::int64_t residue) const {
    return sin_res_[static_cast<std::size_t>(residue)];
  }
  std::complex<double> value_at(std::int64_t residue) const {
    return {cos_at(residue), sin_at(residue)};
  }
  // angle index at a residue (kZero for residue 0)
  std::int64_t t_at(std::int64_t residue) const {
    return t_res_[static_cast<std::size_t>(residue)];
  }

 private:
  friend class CharacterTable;
  Character(std::shared_ptr<const CharacterTable::Data> data, std::int64_t j);

  std::shared_ptr<const CharacterTable::Data> data_;
  std::int64_t j_ = 0;
  std::vector<std::int64_t> t_res_;  // residue -> angle index
  std::vector<double> cos_res_;
  std::vector<double> sin_res_;
};

// G(chi) = sum_{m=1}^{q-1} chi(m) e^{2*pi*i*m/q}; each term's angle is
// accumulated exactly as an index mod q*phi before the single float rounding
std::complex<double> gauss_sum(const Character& chi);

// b^2 = (1/r) sum over the r distinct values of cos^2 of their angles
// (1 for real non-principal, 1/2 for complex); PrincipalNotSupported on j=0
double cos_variance(const Character& chi);

// deterministic Miller-Rabin, valid for all 64-bit inputs
bool is_prime_u64(std::uint64_t n);

}  // namespace dirwalk

#endif
