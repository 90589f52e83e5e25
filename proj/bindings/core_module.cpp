// python bindings for the core library: character tables, prime streams,
// residue statistics, walks, block ensembles, and L-function evaluation
#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <cstdint>
#include <iostream>
#include <vector>

#include "dirwalk/acceptance.hpp"
#include "dirwalk/characters.hpp"
#include "dirwalk/ensemble.hpp"
#include "dirwalk/errors.hpp"
#include "dirwalk/lfunc.hpp"
#include "dirwalk/primes.hpp"
#include "dirwalk/residue_stats.hpp"
#include "dirwalk/version.hpp"
#include "dirwalk/walk.hpp"

namespace py = pybind11;
using namespace dirwalk;

PYBIND11_MODULE(_core, m) {
  m.doc() = "prime-indexed dirichlet character walks";
  m.attr("__version__") = kVersion;

  py::register_exception<Error>(m, "DirwalkError");

  py::class_<SieveConfig>(m, "SieveConfig")
      .def(py::init<>())
      .def_readwrite("segment_size", &SieveConfig::segment_size)
      .def_readwrite("max_segment_bytes", &SieveConfig::max_segment_bytes)
      .def_readwrite("max_bound", &SieveConfig::max_bound)
      .def_readwrite("threads", &SieveConfig::threads)
      .def_readwrite("use_cache", &SieveConfig::use_cache)
      .def_readwrite("cache_dir", &SieveConfig::cache_dir);

  py::class_<Character>(m, "Character")
      .def_property_readonly("q", &Character::q)
      .def_property_readonly("phi", &Character::phi)
      .def_property_readonly("j", &Character::j)
      .def_property_readonly("order", &Character::order)
      .def_property_readonly("parity", &Character::parity)
      .def_property_readonly("is_principal", &Character::is_principal)
      .def_property_readonly("is_real", &Character::is_real)
      .def("value", &Character::value, py::arg("n"),
           "chi(n) as a complex number")
      .def(
          "angle_index",
          [](const Character& chi, std::int64_t n) -> py::object {
            const auto u = chi.eval(n);
            if (u.is_zero()) return py::none();
            return py::int_(u.t);
          },
          py::arg("n"),
          "t with chi(n) = exp(2 pi i t / phi), or None where chi vanishes")
      .def("conjugate", &Character::conjugate);

  py::class_<CharacterTable>(m, "CharacterTable")
      .def(py::init<std::int64_t>(), py::arg("q"))
      .def_property_readonly("q", &CharacterTable::q)
      .def_property_readonly("phi", &CharacterTable::phi)
      .def_property_readonly("generator", &CharacterTable::generator)
      .def("character", &CharacterTable::character, py::arg("j"))
      .def("orthogonality_max_residual",
           &CharacterTable::orthogonality_max_residual);

  m.def("gauss_sum", &gauss_sum, py::arg("chi"));
  m.def("cos_variance", &cos_variance, py::arg("chi"));

  m.def(
      "prime_pi",
      [](std::uint64_t x, const SieveConfig& cfg) { return prime_pi(x, cfg); },
      py::arg("x"), py::arg("cfg") = SieveConfig{},
      "number of primes strictly below x");
  m.def(
      "nth_prime",
      [](std::uint64_t n, const SieveConfig& cfg) { return nth_prime(n, cfg); },
      py::arg("n"), py::arg("cfg") = SieveConfig{});
  m.def(
      "primes_in",
      [](std::uint64_t lo, std::uint64_t hi, const SieveConfig& cfg) {
        return primes_in({lo, hi}, cfg);
      },
      py::arg("lo"), py::arg("hi"), py::arg("cfg") = SieveConfig{});

  py::class_<FrequencyVector>(m, "FrequencyVector")
      .def_readonly("q", &FrequencyVector::q)
      .def_readonly("j", &FrequencyVector::j)
      .def_readonly("r", &FrequencyVector::r)
      .def_readonly("x", &FrequencyVector::x)
      .def_readonly("n_pi", &FrequencyVector::n_pi)
      .def_readonly("zero_count", &FrequencyVector::zero_count)
      .def_readonly("counts", &FrequencyVector::counts)
      .def_readonly("freqs", &FrequencyVector::freqs)
      .def_readonly("max_abs_dev", &FrequencyVector::max_abs_dev);
  m.def(
      "frequencies",
      [](const Character& chi, std::uint64_t x, const SieveConfig& cfg) {
        return frequencies(chi, x, cfg);
      },
      py::arg("chi"), py::arg("x"), py::arg("cfg") = SieveConfig{});

  py::class_<PairCountMatrix>(m, "PairCountMatrix")
      .def_readonly("q", &PairCountMatrix::q)
      .def_readonly("k", &PairCountMatrix::k)
      .def_readonly("x", &PairCountMatrix::x)
      .def_readonly("n_pi", &PairCountMatrix::n_pi)
      .def_readonly("dropped", &PairCountMatrix::dropped)
      .def_readonly("counts", &PairCountMatrix::counts)
      .def("at", &PairCountMatrix::at, py::arg("a"), py::arg("b"))
      .def("freq", &PairCountMatrix::freq, py::arg("a"), py::arg("b"));
  m.def(
      "pair_counts",
      [](std::int64_t q, int k, std::uint64_t x, const SieveConfig& cfg) {
        return pair_counts(q, k, x, cfg);
      },
      py::arg("q"), py::arg("k"), py::arg("x"), py::arg("cfg") = SieveConfig{});
  m.def(
      "pair_counts_multi",
      [](std::int64_t q, std::vector<int> ks, std::uint64_t x,
         const SieveConfig& cfg) { return pair_counts_multi(q, ks, x, cfg); },
      py::arg("q"), py::arg("ks"), py::arg("x"), py::arg("cfg") = SieveConfig{});

  py::class_<LosPrediction>(m, "LosPrediction")
      .def_readonly("q", &LosPrediction::q)
      .def_readonly("k", &LosPrediction::k)
      .def_readonly("x", &LosPrediction::x)
      .def_readonly("diag", &LosPrediction::diag)
      .def_readonly("sym_offdiag", &LosPrediction::sym_offdiag)
      .def_readonly("offdiag", &LosPrediction::offdiag)
      .def_readonly("uniform_diag", &LosPrediction::uniform_diag)
      .def_readonly("uniform_sym_offdiag", &LosPrediction::uniform_sym_offdiag);
  m.def("los_predicted", &los_predicted, py::arg("q"), py::arg("k"),
        py::arg("x"));

  py::class_<BiasRow>(m, "BiasRow")
      .def_readonly("k", &BiasRow::k)
      .def_readonly("emp_diag", &BiasRow::emp_diag)
      .def_readonly("emp_sym_offdiag", &BiasRow::emp_sym_offdiag)
      .def_readonly("los_diag", &BiasRow::los_diag)
      .def_readonly("los_sym_offdiag", &BiasRow::los_sym_offdiag)
      .def_readonly("uniform_diag", &BiasRow::uniform_diag)
      .def_readonly("uniform_sym_offdiag", &BiasRow::uniform_sym_offdiag);
  py::class_<BiasReport>(m, "BiasReport")
      .def_readonly("q", &BiasReport::q)
      .def_readonly("x", &BiasReport::x)
      .def_readonly("n_pi", &BiasReport::n_pi)
      .def_readonly("rows", &BiasReport::rows);
  m.def(
      "bias_report",
      [](std::int64_t q, std::uint64_t x, int k_max, const SieveConfig& cfg) {
        return bias_report(q, x, k_max, cfg);
      },
      py::arg("q"), py::arg("x"), py::arg("k_max"),
      py::arg("cfg") = SieveConfig{});

  py::enum_<WalkMode>(m, "WalkMode")
      .value("Cosine", WalkMode::Cosine)
      .value("Sine", WalkMode::Sine)
      .value("Complex", WalkMode::Complex);
  py::class_<WalkSeries>(m, "WalkSeries")
      .def_readonly("q", &WalkSeries::q)
      .def_readonly("j", &WalkSeries::j)
      .def_readonly("mode", &WalkSeries::mode)
      .def_readonly("start", &WalkSeries::start)
      .def_readonly("length", &WalkSeries::length)
      .def_readonly("ns", &WalkSeries::ns)
      .def_readonly("values", &WalkSeries::values)
      .def_readonly("final_value", &WalkSeries::final_value);
  m.def(
      "walk",
      [](const Character& chi, std::uint64_t n, std::uint64_t start,
         WalkMode mode, std::vector<std::uint64_t> checkpoints,
         const SieveConfig& cfg) {
        WalkOptions opts;
        opts.start = start;
        opts.mode = mode;
        opts.checkpoints = std::move(checkpoints);
        return walk(chi, n, opts, cfg);
      },
      py::arg("chi"), py::arg("n"), py::arg("start") = 1,
      py::arg("mode") = WalkMode::Cosine,
      py::arg("checkpoints") = std::vector<std::uint64_t>{},
      py::arg("cfg") = SieveConfig{});
  m.def(
      "abel_identity_residual",
      [](const Character& chi, double sigma, std::uint64_t n,
         const SieveConfig& cfg) {
        return abel_identity_residual(chi, sigma, n, cfg);
      },
      py::arg("chi"), py::arg("sigma"), py::arg("n"),
      py::arg("cfg") = SieveConfig{});

  py::enum_<SpacingKind>(m, "SpacingKind")
      .value("Fixed", SpacingKind::Fixed)
      .value("RandomUniform", SpacingKind::RandomUniform);
  py::class_<Spacing>(m, "Spacing")
      .def(py::init<>())
      .def_readwrite("kind", &Spacing::kind)
      .def_readwrite("d", &Spacing::d)
      .def_readwrite("lo", &Spacing::lo)
      .def_readwrite("hi", &Spacing::hi);
  py::class_<EnsembleSpec>(m, "EnsembleSpec")
      .def(py::init<>())
      .def_readwrite("n1", &EnsembleSpec::n1)
      .def_readwrite("block_len", &EnsembleSpec::block_len)
      .def_readwrite("blocks", &EnsembleSpec::blocks)
      .def_readwrite("spacing", &EnsembleSpec::spacing)
      .def_readwrite("seed", &EnsembleSpec::seed);
  py::class_<BlockEnsemble>(m, "BlockEnsemble")
      .def_readonly("q", &BlockEnsemble::q)
      .def_readonly("j", &BlockEnsemble::j)
      .def_readonly("spec", &BlockEnsemble::spec)
      .def_readonly("starts", &BlockEnsemble::starts)
      .def_readonly("start_primes", &BlockEnsemble::start_primes)
      .def_readonly("blocks", &BlockEnsemble::blocks)
      .def_readonly("p_first", &BlockEnsemble::p_first)
      .def_readonly("log_p_drift", &BlockEnsemble::log_p_drift);
  m.def(
      "build_ensemble",
      [](const Character& chi, const EnsembleSpec& spec,
         const SieveConfig& cfg) { return build_ensemble(chi, spec, cfg); },
      py::arg("chi"), py::arg("spec"), py::arg("cfg") = SieveConfig{});
  m.def(
      "build_ensembles",
      [](std::vector<Character> chis, const EnsembleSpec& spec,
         const SieveConfig& cfg) { return build_ensembles(chis, spec, cfg); },
      py::arg("chis"), py::arg("spec"), py::arg("cfg") = SieveConfig{});

  py::class_<Moments>(m, "Moments")
      .def_readonly("count", &Moments::count)
      .def_readonly("mean", &Moments::mean)
      .def_readonly("variance", &Moments::variance)
      .def_readonly("skewness", &Moments::skewness)
      .def_readonly("excess_kurtosis", &Moments::excess_kurtosis);
  m.def(
      "moments",
      [](std::vector<double> xs) { return moments(xs); }, py::arg("xs"));

  py::class_<VarianceTheory>(m, "VarianceTheory")
      .def_readonly("lambda_", &VarianceTheory::lambda)
      .def_readonly("rho", &VarianceTheory::rho)
      .def_readonly("b2", &VarianceTheory::b2)
      .def_readonly("variance", &VarianceTheory::variance);
  m.def("theory_variance", &theory_variance, py::arg("chi"),
        py::arg("block_len"), py::arg("p_start"));
  m.def("normalized", &normalized, py::arg("ensemble"), py::arg("chi"));

  py::class_<KsTest>(m, "KsTest")
      .def_readonly("statistic", &KsTest::statistic)
      .def_readonly("p_value", &KsTest::p_value)
      .def_readonly("count", &KsTest::count)
      .def_readonly("sample_mean", &KsTest::sample_mean)
      .def_readonly("sample_std", &KsTest::sample_std);
  m.def(
      "normality_test",
      [](std::vector<double> xs) { return normality_test(xs); },
      py::arg("xs"));

  py::enum_<ScalingMethod>(m, "ScalingMethod")
      .value("AbsRegress", ScalingMethod::AbsRegress)
      .value("EnsembleStd", ScalingMethod::EnsembleStd);
  py::class_<EnsembleStdPolicy>(m, "EnsembleStdPolicy")
      .def(py::init<>())
      .def_readwrite("n1", &EnsembleStdPolicy::n1)
      .def_readwrite("spacing", &EnsembleStdPolicy::spacing)
      .def_readwrite("index_budget", &EnsembleStdPolicy::index_budget)
      .def_readwrite("m_min", &EnsembleStdPolicy::m_min)
      .def_readwrite("m_max", &EnsembleStdPolicy::m_max)
      .def_readwrite("seed", &EnsembleStdPolicy::seed);
  py::class_<ScalingFit>(m, "ScalingFit")
      .def_readonly("method", &ScalingFit::method)
      .def_readonly("alpha", &ScalingFit::alpha)
      .def_readonly("ci_half_width", &ScalingFit::ci_half_width)
      .def_readonly("intercept", &ScalingFit::intercept)
      .def_readonly("n_grid", &ScalingFit::n_grid)
      .def_readonly("log_n", &ScalingFit::log_n)
      .def_readonly("log_y", &ScalingFit::log_y)
      .def_readonly("residuals", &ScalingFit::residuals);
  m.def(
      "fit_power_law",
      [](std::vector<std::uint64_t> n_grid, std::vector<double> y,
         ScalingMethod method) { return fit_power_law(n_grid, y, method); },
      py::arg("n_grid"), py::arg("y"),
      py::arg("method") = ScalingMethod::EnsembleStd);
  m.def(
      "scaling_exponent",
      [](const Character& chi, std::vector<std::uint64_t> n_grid,
         ScalingMethod method, const SieveConfig& cfg,
         const EnsembleStdPolicy& policy) {
        return scaling_exponent(chi, n_grid, method, cfg, policy);
      },
      py::arg("chi"), py::arg("n_grid"), py::arg("method"),
      py::arg("cfg") = SieveConfig{},
      py::arg("policy") = EnsembleStdPolicy{});

  m.def("gamma", &dirwalk::gamma, py::arg("z"));
  m.def("hurwitz_zeta", &hurwitz_zeta, py::arg("s"), py::arg("a"),
        py::arg("tol") = 1e-12);
  m.def("hurwitz_zeta_deflated", &hurwitz_zeta_deflated, py::arg("s"),
        py::arg("a"), py::arg("tol") = 1e-12);
  m.def("l_eval", &l_eval, py::arg("chi"), py::arg("s"),
        py::arg("tol") = 1e-12);
  m.def("log_l_tracked", &log_l_tracked, py::arg("chi"), py::arg("s"),
        py::arg("tol") = 1e-12);
  py::class_<EulerSplit>(m, "EulerSplit")
      .def_readonly("x_sum", &EulerSplit::x_sum)
      .def_readonly("r_sum", &EulerSplit::r_sum)
      .def_readonly("log_l", &EulerSplit::log_l)
      .def_readonly("residual", &EulerSplit::residual);
  m.def(
      "euler_split",
      [](const Character& chi, std::complex<double> s, std::uint64_t n,
         const SieveConfig& cfg, double tol) {
        return euler_split(chi, s, n, cfg, tol);
      },
      py::arg("chi"), py::arg("s"), py::arg("n"),
      py::arg("cfg") = SieveConfig{}, py::arg("tol") = 1e-12);
  m.def("functional_equation_residual", &functional_equation_residual,
        py::arg("chi"), py::arg("s"), py::arg("tol") = 1e-12);
  m.def("residue_at_one", &residue_at_one, py::arg("chi"),
        py::arg("tol") = 1e-12);

  py::class_<CriterionResult>(m, "CriterionResult")
      .def_readonly("id", &CriterionResult::id)
      .def_readonly("name", &CriterionResult::name)
      .def_readonly("pass_", &CriterionResult::pass)
      .def_readonly("seconds", &CriterionResult::seconds)
      .def_readonly("detail", &CriterionResult::detail);
  m.def(
      "run_desk_acceptance",
      [](int threads, const std::string& cache_dir) {
        AcceptanceOptions opts;
        opts.threads = threads;
        opts.cache_dir = cache_dir;
        return run_desk_acceptance(opts, std::cout);
      },
      py::arg("threads") = 1, py::arg("cache_dir") = std::string{},
      "run the acceptance battery, printing one line per criterion");
}
