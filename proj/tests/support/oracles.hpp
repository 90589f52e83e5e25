#ifndef DIRWALK_TESTS_ORACLES_HPP
#define DIRWALK_TESTS_ORACLES_HPP

// Independent reference implementations used only by tests. Deliberately
// naive: different algorithms than the library so agreement is evidence.

#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracles {

// plain unsegmented odd-free sieve of Eratosthenes
inline std::vector<std::uint64_t> naive_primes_below(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  if (n <= 2) return out;
  std::vector<bool> comp(n, false);
  for (std::uint64_t i = 2; i < n; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (std::uint64_t m = i * i; m < n; m += i) comp[m] = true;
  }
  return out;
}

// every completely multiplicative map (Z/qZ)* -> C with values in roots of
// unity, enumerated by brute force over the value at a fixed generator
inline std::vector<std::vector<std::complex<double>>> brute_characters(
    std::int64_t q, std::int64_t g) {
  const std::int64_t phi = q - 1;
  std::vector<std::vector<std::complex<double>>> rows;
  for (std::int64_t j = 0; j < phi; ++j) {
    std::vector<std::complex<double>> row(static_cast<std::size_t>(q));
    std::int64_t x = 1;
    for (std::int64_t k = 0; k < phi; ++k) {
      row[static_cast<std::size_t>(x)] =
          std::polar(1.0, 2.0 * std::numbers::pi *
                              static_cast<double>(j * k % phi) /
                              static_cast<double>(phi));
      x = x * g % q;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// composite Simpson on [2, x] for 1/log t with a fixed fine grid
inline double simpson_li(double x, int n = 200000) {
  if (n % 2) ++n;
  const double h = (x - 2.0) / n;
  double acc = 1.0 / std::log(2.0) + 1.0 / std::log(x);
  for (int i = 1; i < n; ++i)
    acc += (i % 2 ? 4.0 : 2.0) / std::log(2.0 + h * i);
  return acc * h / 3.0;
}

}  // namespace oracles

#endif
