#include "dirwalk/walk.hpp"

#include <algorithm>
#include <cmath>

#include "dirwalk/errors.hpp"
#include "dirwalk/summation.hpp"

namespace dirwalk {

WalkSeries walk(const Character& chi, std::uint64_t length,
                const WalkOptions& opts, const SieveConfig& cfg) {
  if (opts.start == 0) throw SpecInvalid("walk: start index is 1-based");

  WalkSeries out;
  out.q = chi.q();
  out.j = chi.j();
  out.mode = opts.mode;
  out.start = opts.start;
  out.length = length;
  if (length == 0) {
    if (!opts.checkpoints.empty()) {
      throw SpecInvalid("walk: checkpoints given for an empty series");
    }
    return out;
  }

  std::vector<std::uint64_t> cps = opts.checkpoints;
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  const std::uint64_t last = opts.start + length - 1;
  for (std::uint64_t cp : cps) {
    if (cp < opts.start || cp > last) {
      throw SpecInvalid("walk: checkpoint outside [start, start+length-1]");
    }
  }
  out.ns.reserve(cps.empty() ? 1 : cps.size());
  out.values.reserve(out.ns.capacity());

  Kahan<std::complex<double>> sum;
  std::uint64_t n = opts.start;
  std::size_t cp_idx = 0;
  visit_angles(chi, opts.start, length, cfg,
               [&](std::uint64_t /*p*/, std::int64_t res) {
                 switch (opts.mode) {
                   case WalkMode::Cosine:
                     sum.add({chi.cos_at(res), 0.0});
                     break;
                   case WalkMode::Sine:
                     sum.add({chi.sin_at(res), 0.0});
                     break;
                   case WalkMode::Complex:
                     sum.add(chi.value_at(res));
                     break;
                 }
                 if (cp_idx < cps.size() && n == cps[cp_idx]) {
                   out.ns.push_back(n);
                   out.values.push_back(sum.value());
                   ++cp_idx;
                 }
                 ++n;
               });
  out.final_value = sum.value();
  if (cps.empty()) {
    out.ns.push_back(last);
    out.values.push_back(out.final_value);
  }
  return out;
}

double abel_identity_residual(const Character& chi, double sigma,
                              std::uint64_t length, const SieveConfig& cfg) {
  if (length == 0) throw SpecInvalid("abel_identity_residual: length must be >= 1");

  Kahan<std::complex<double>> direct;    // sum chi(p_n) p_n^{-sigma}
  Kahan<std::complex<double>> walk_sum;  // C_n
  Kahan<std::complex<double>> integral;  // sum C_n (p_n^{-s} - p_{n+1}^{-s})
  double prev_weight = 0.0;
  std::complex<double> prev_c{0.0, 0.0};
  bool have_prev = false;

  visit_angles(chi, 1, length, cfg,
               [&](std::uint64_t p, std::int64_t res) {
                 const double w = std::pow(static_cast<double>(p), -sigma);
                 const std::complex<double> z = chi.value_at(res);
                 direct.add(z * w);
                 if (have_prev) {
                   integral.add(prev_c * (prev_weight - w));
                 }
                 walk_sum.add(z);
                 prev_c = walk_sum.value();
                 prev_weight = w;
                 have_prev = true;
               });

  const std::complex<double> rhs = prev_c * prev_weight + integral.value();
  return std::abs(direct.value() - rhs);
}

}  // namespace dirwalk
