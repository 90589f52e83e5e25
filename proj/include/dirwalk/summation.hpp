#ifndef DIRWALK_SUMMATION_HPP
#define DIRWALK_SUMMATION_HPP

#include <complex>

namespace dirwalk {

// Neumaier-compensated accumulator. Unlike plain Kahan it stays exact when a
// new term is larger than the running sum, which happens constantly in walks
// whose partial sums cross zero.
template <typename Value>
struct Kahan {
  Value sum{};
  Value comp{};

  void add(Value v) {
    const Value t = sum + v;
    if (abs_ge(sum, v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }

  Value value() const { return sum + comp; }

 private:
  static bool abs_ge(double a, double b) {
    return (a < 0 ? -a : a) >= (b < 0 ? -b : b);
  }
};

template <>
struct Kahan<std::complex<double>> {
  Kahan<double> re;
  Kahan<double> im;

  void add(std::complex<double> v) {
    re.add(v.real());
    im.add(v.imag());
  }

  std::complex<double> value() const { return {re.value(), im.value()}; }
};

}  // namespace dirwalk

#endif
