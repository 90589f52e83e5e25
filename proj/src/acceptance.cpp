#include "dirwalk/acceptance.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <ostream>
#include <vector>

#include "dirwalk/characters.hpp"
#include "dirwalk/ensemble.hpp"
#include "dirwalk/errors.hpp"
#include "dirwalk/lfunc.hpp"
#include "dirwalk/primes.hpp"
#include "dirwalk/residue_stats.hpp"
#include "dirwalk/rng.hpp"
#include "dirwalk/walk.hpp"

namespace dirwalk {

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kSeed = 20260814;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// cache directory that cleans up after itself when we created it
struct CacheDirGuard {
  fs::path path;
  bool owned = false;

  explicit CacheDirGuard(const std::string& requested) {
    if (!requested.empty()) {
      path = requested;
      return;
    }
    if (const char* env = std::getenv("DIRWALK_CACHE_DIR"); env && *env) {
      path = env;
      return;
    }
    path = fs::temp_directory_path() /
           ("dirwalk-check-" + std::to_string(::getpid()));
    fs::create_directories(path);
    owned = true;
  }
  ~CacheDirGuard() {
    if (owned) {
      std::error_code ec;
      fs::remove_all(path, ec);
    }
  }
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;  // 0: no runtime requirement
  std::function<bool(std::string&)> body;
};

}  // namespace

int count_failures(const std::vector<CriterionResult>& results) {
  int n = 0;
  for (const auto& r : results) n += r.pass ? 0 : 1;
  return n;
}

std::vector<CriterionResult> run_desk_acceptance(const AcceptanceOptions& opts,
                                                 std::ostream& out) {
  CacheDirGuard cache(opts.cache_dir);
  SieveConfig cfg;
  cfg.threads = opts.threads;
  cfg.cache_dir = cache.path.string();

  const CharacterTable t7(7);
  const CharacterTable t3(3);

  // shared between the two pair-statistics criteria (one heavy pass)
  std::vector<PairCountMatrix> q3_pairs;  // k = 1, 2, 10 at x = 1e8
  PairCountMatrix q7_pairs;               // k = 1 at x = 1e8

  std::vector<Criterion> criteria;

  criteria.push_back({1, "character-table-mod7", 1e-3, [&](std::string& d) {
    // angle-index vectors over n = 1..7 (phi = 6; -1 marks the zero at n = 7)
    static constexpr std::int64_t expect[6][7] = {
        {0, 0, 0, 0, 0, 0, -1}, {0, 2, 1, 4, 5, 3, -1},
        {0, 4, 2, 2, 4, 0, -1}, {0, 0, 3, 0, 3, 3, -1},
        {0, 2, 4, 4, 2, 0, -1}, {0, 4, 5, 2, 1, 3, -1},
    };
    bool ok = true;
    const double t0 = now_seconds();
    const CharacterTable table(7);
    for (std::int64_t j = 0; j < 6 && ok; ++j) {
      const Character chi = table.character(j);
      for (std::int64_t n = 1; n <= 7; ++n) {
        const UnitValue v = chi.eval(n);
        const std::int64_t got = v.is_zero() ? -1 : v.t;
        if (got != expect[j][n - 1] || (!v.is_zero() && v.denom != 6)) {
          ok = false;
          break;
        }
      }
    }
    const double dt = now_seconds() - t0;
    d = fmt("all six angle-index rows exact, table build+compare %.3g s", dt);
    return ok;
  }});

  criteria.push_back({2, "orthogonality-relations", 1.0, [&](std::string& d) {
    double worst = 0.0;
    for (std::int64_t q : {3, 5, 7, 11, 13}) {
      worst = std::max(worst, CharacterTable(q).orthogonality_max_residual());
    }
    d = fmt("max residual %.3g (bound 1e-12)", worst);
    return worst < 1e-12;
  }});

  criteria.push_back({3, "gauss-sum-modulus", 0.0, [&](std::string& d) {
    double worst = 0.0;
    for (std::int64_t q : {3, 5, 7, 11, 13}) {
      const CharacterTable table(q);
      for (std::int64_t j = 1; j < q - 1; ++j) {
        const std::complex<double> g = gauss_sum(table.character(j));
        worst = std::max(worst, std::abs(std::norm(g) - static_cast<double>(q)));
      }
    }
    d = fmt("max ||G|^2 - q| = %.3g (bound 1e-10)", worst);
    return worst < 1e-10;
  }});

  criteria.push_back({4, "angle-equidistribution", 30.0, [&](std::string& d) {
    double worst = 0.0;
    double bound = 0.0;
    for (std::int64_t j = 1; j <= 5; ++j) {
      const auto f = frequencies(t7.character(j), 10'000'000, cfg);
      bound = 5.0 / std::sqrt(static_cast<double>(f.n_pi));
      worst = std::max(worst, f.max_abs_dev);
    }
    d = fmt("max |f_i - 1/r| = %.3g (bound %.3g)", worst, bound);
    return worst < bound;
  }});

  criteria.push_back({5, "pair-bias-direction", 600.0, [&](std::string& d) {
    const int ks3[] = {1, 2, 10};
    q3_pairs = pair_counts_multi(3, ks3, 100'000'000, cfg);
    q7_pairs = pair_counts(7, 1, 100'000'000, cfg);

    bool ok = true;
    std::string parts;
    for (const PairCountMatrix* mat : {&q3_pairs[0], &q7_pairs}) {
      const std::int64_t q = mat->q;
      const double phi = static_cast<double>(q - 1);
      double diag = 0.0, sym = 0.0;
      for (std::int64_t a = 1; a < q; ++a) {
        diag += mat->freq(a, a);
        for (std::int64_t b = a + 1; b < q; ++b) {
          sym += mat->freq(a, b) + mat->freq(b, a);
        }
      }
      diag /= phi;
      sym /= phi * (phi - 1.0) / 2.0;
      const auto los = los_predicted(q, 1, 1e8);
      const bool below = diag < los.uniform_diag;
      const bool above = sym > los.uniform_sym_offdiag;
      const bool closer =
          std::abs(diag - los.diag) < std::abs(diag - los.uniform_diag);
      ok = ok && below && above && closer;
      parts += fmt("q=%lld diag %.5f %s %.5f, sym %.5f %s %.5f, closer=%s; ",
                   static_cast<long long>(q), diag, below ? "<" : ">=",
                   los.uniform_diag, sym, above ? ">" : "<=",
                   los.uniform_sym_offdiag, closer ? "yes" : "no");
    }
    d = parts;
    return ok;
  }});

  criteria.push_back({6, "pair-bias-lag-decay", 0.0, [&](std::string& d) {
    if (q3_pairs.size() != 3) {
      d = "pair matrices unavailable (previous criterion failed to run)";
      return false;
    }
    auto deficit = [](const PairCountMatrix& m) {
      const double phi = static_cast<double>(m.q - 1);
      double diag = 0.0;
      for (std::int64_t a = 1; a < m.q; ++a) diag += m.freq(a, a);
      diag /= phi;
      return std::abs(diag - 1.0 / (phi * phi));
    };
    const double d2 = deficit(q3_pairs[1]);
    const double d10 = deficit(q3_pairs[2]);
    d = fmt("diagonal deficit k=2: %.4g, k=10: %.4g", d2, d10);
    return d2 > d10;
  }});

  criteria.push_back({7, "block-ensemble-normality", 300.0, [&](std::string& d) {
    const Character chi = t7.character(1);
    EnsembleSpec spec;
    spec.n1 = 1'000'000;
    spec.block_len = 10'000;
    spec.blocks = 2000;
    spec.spacing = {SpacingKind::Fixed, 10, 1, 1};
    spec.seed = kSeed;
    const auto ens = build_ensemble(chi, spec, cfg);
    const auto z = normalized(ens, chi);
    const auto ks = normality_test(z);
    const auto mom = moments(z);
    const double sd = std::sqrt(mom.variance);
    d = fmt("KS p=%.3f, mean=%.4f, std=%.4f", ks.p_value, mom.mean, sd);
    return ks.p_value > 0.01 && std::abs(mom.mean) < 0.05 && sd >= 0.9 &&
           sd <= 1.1;
  }});

  criteria.push_back({8, "block-variance-prediction", 600.0, [&](std::string& d) {
    const Character chis[] = {t7.character(1), t7.character(3)};
    bool ok = true;
    std::string parts;
    for (std::uint64_t n : {100ull, 1000ull, 10000ull}) {
      EnsembleSpec spec;
      spec.n1 = 1'000'000;
      spec.block_len = n;
      spec.blocks = 2000;
      spec.spacing = {SpacingKind::Fixed, 10, 1, 1};
      spec.seed = kSeed;
      const auto ens = build_ensembles(chis, spec, cfg);
      for (std::size_t c = 0; c < 2; ++c) {
        const double ratio = moments(normalized(ens[c], chis[c])).variance;
        ok = ok && ratio >= 0.9 && ratio <= 1.1;
        parts += fmt("j=%lld N=%llu: %.3f; ",
                     static_cast<long long>(chis[c].j()),
                     static_cast<unsigned long long>(n), ratio);
      }
    }
    d = parts + "(band [0.9, 1.1])";
    return ok;
  }});

  criteria.push_back({9, "diffusive-exponent", 0.0, [&](std::string& d) {
    const std::uint64_t grid[] = {100,   215,   464,   1000,  2154,
                                  4642,  10000, 21544, 46416, 100000};
    EnsembleStdPolicy policy;
    policy.seed = kSeed;
    bool ok = true;
    std::string parts;
    for (std::int64_t j = 1; j <= 5; ++j) {
      const auto fit = scaling_exponent(t7.character(j), grid,
                                        ScalingMethod::EnsembleStd, cfg, policy);
      ok = ok && fit.alpha >= 0.4 && fit.alpha <= 0.6;
      parts += fmt("j=%lld a=%.3f; ", static_cast<long long>(j), fit.alpha);
    }
    const auto pfit = scaling_exponent(t7.character(0), grid,
                                       ScalingMethod::AbsRegress, cfg, policy);
    ok = ok && pfit.alpha >= 0.99 && pfit.alpha <= 1.01;
    parts += fmt("principal a=%.4f", pfit.alpha);
    d = parts + " (bands [0.4, 0.6] / [0.99, 1.01])";
    return ok;
  }});

  criteria.push_back({10, "abel-identity", 10.0, [&](std::string& d) {
    double worst = 0.0;
    for (const double sigma : {0.6, 1.5}) {
      for (std::int64_t j = 1; j <= 5; ++j) {
        worst = std::max(
            worst, abel_identity_residual(t7.character(j), sigma, 100'000, cfg));
      }
    }
    d = fmt("max residual %.3g (bound 1e-8)", worst);
    return worst < 1e-8;
  }});

  criteria.push_back({11, "functional-equation", 30.0, [&](std::string& d) {
    const CounterRng rng(kSeed, "fe-points");
    std::vector<Character> chis;
    for (std::int64_t j = 1; j <= 5; ++j) chis.push_back(t7.character(j));
    chis.push_back(t3.character(1));
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 20; ++i) {
      const double sigma = 0.05 + 0.9 * rng.uniform(2 * i);
      const double t = -20.0 + 40.0 * rng.uniform(2 * i + 1);
      for (const auto& chi : chis) {
        worst = std::max(worst,
                         functional_equation_residual(chi, {sigma, t}));
      }
    }
    d = fmt("max residual %.3g over 120 evaluations (bound 1e-8)", worst);
    return worst < 1e-8;
  }});

  criteria.push_back({12, "residue-at-one", 0.0, [&](std::string& d) {
    const std::complex<double> principal = residue_at_one(t7.character(0));
    const double err0 = std::abs(principal - std::complex<double>{6.0 / 7.0, 0.0});
    double worst = 0.0;
    for (std::int64_t j = 1; j <= 5; ++j) {
      worst = std::max(worst, std::abs(residue_at_one(t7.character(j))));
    }
    d = fmt("principal |res - 6/7| = %.3g, max non-principal |res| = %.3g "
            "(bounds 1e-6)", err0, worst);
    return err0 < 1e-6 && worst < 1e-6;
  }});

  criteria.push_back({13, "euler-split-consistency", 300.0, [&](std::string& d) {
    const Character chi = t7.character(1);
    const auto at2 = euler_split(chi, {2.0, 0.0}, 100'000, cfg);
    double r[3];
    int i = 0;
    for (const std::uint64_t n : {100'000ull, 1'000'000ull, 10'000'000ull}) {
      r[i++] = euler_split(chi, {0.8, 0.0}, n, cfg).residual;
    }
    d = fmt("sigma=2 residual %.3g (bound 1e-6); sigma=0.8 residuals "
            "%.4g >= %.4g >= %.4g", at2.residual, r[0], r[1], r[2]);
    return at2.residual < 1e-6 && r[0] >= r[1] && r[1] >= r[2];
  }});

  std::vector<CriterionResult> results;
  for (auto& c : criteria) {
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    const double t0 = now_seconds();
    try {
      r.pass = c.body(r.detail);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("threw: ") + e.what();
    }
    r.seconds = now_seconds() - t0;
    if (c.budget_seconds > 0.0) {
      if (r.seconds >= c.budget_seconds) r.pass = false;
      r.detail += fmt(" [%.3f s, budget %.3g s]", r.seconds, c.budget_seconds);
    } else {
      r.detail += fmt(" [%.3f s]", r.seconds);
    }
    out << (r.pass ? "[PASS] " : "[FAIL] ") << fmt("%02d ", r.id) << r.name
        << " — " << r.detail << "\n";
    out.flush();
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace dirwalk
