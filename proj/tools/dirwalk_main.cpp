// dirwalk: one binary exposing the library as reproducible subcommands.
//
// Conventions shared by every subcommand:
//   - a `meta` JSON record (tool, version, parsed config, wall time) goes to
//     stdout alongside the results
//   - tabular results are RFC-4180 CSV (CRLF, '.' decimal separator, floats
//     with 17 significant digits) written to --csv FILE, or to stdout when
//     the flag is absent or FILE is '-'
//   - exit 0 on success, 2 on flag errors (with usage text), 1 on runtime
//     or acceptance failures
#include <unistd.h>

#include <chrono>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dirwalk/acceptance.hpp"
#include "dirwalk/characters.hpp"
#include "dirwalk/ensemble.hpp"
#include "dirwalk/errors.hpp"
#include "dirwalk/lfunc.hpp"
#include "dirwalk/primes.hpp"
#include "dirwalk/residue_stats.hpp"
#include "dirwalk/version.hpp"
#include "dirwalk/walk.hpp"
#include "json.hpp"

namespace {

using dirwalk::Character;
using dirwalk::CharacterTable;
using dirwalk::SieveConfig;
using ordered_json = nlohmann::ordered_json;

struct CommonOpts {
  int threads = 1;
  bool no_cache = false;
};

SieveConfig make_cfg(const CommonOpts& common) {
  SieveConfig cfg;
  cfg.threads = common.threads;
  cfg.use_cache = !common.no_cache;
  return cfg;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_u64(std::uint64_t v) { return std::to_string(v); }

// RFC-4180: quote fields containing separators, quotes, or line breaks
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

// Rows go to a file in binary mode (exact CRLF endings) or to stdout.
class CsvSink {
 public:
  explicit CsvSink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw dirwalk::Error("cannot open csv output: " + path);
      out_ = &file_;
    } else {
      out_ = &std::cout;
    }
  }
  void row(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) line += ',';
      line += csv_field(fields[i]);
    }
    line += "\r\n";
    out_->write(line.data(), static_cast<std::streamsize>(line.size()));
  }

 private:
  std::ofstream file_;
  std::ostream* out_ = nullptr;
};

std::string iso_utc_now() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class WallClock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

ordered_json meta_record(const std::string& subcommand, ordered_json config,
                         const CommonOpts& common, double wall_seconds) {
  config["threads"] = common.threads;
  config["no_cache"] = common.no_cache;
  ordered_json meta;
  meta["tool"] = "dirwalk";
  meta["version"] = dirwalk::kVersion;
  meta["subcommand"] = subcommand;
  meta["config"] = std::move(config);
  meta["timestamp_utc"] = iso_utc_now();
  meta["wall_seconds"] = wall_seconds;
  return meta;
}

void emit_meta_line(const std::string& subcommand, ordered_json config,
                    const CommonOpts& common, double wall_seconds) {
  ordered_json doc;
  doc["meta"] = meta_record(subcommand, std::move(config), common, wall_seconds);
  std::cout << doc.dump() << "\n";
}

void emit_doc(const std::string& subcommand, ordered_json config,
              const CommonOpts& common, double wall_seconds,
              ordered_json result) {
  ordered_json doc;
  doc["meta"] = meta_record(subcommand, std::move(config), common, wall_seconds);
  doc["result"] = std::move(result);
  std::cout << doc.dump() << "\n";
}

ordered_json complex_json(std::complex<double> z) {
  return ordered_json{{"re", z.real()}, {"im", z.imag()}};
}

const char* kind_of(const Character& chi) {
  if (chi.is_principal()) return "principal";
  return chi.is_real() ? "real" : "complex";
}

// value vector over n = 1..q as angle numerators t (chi(n) = e^{2 pi i t/phi}),
// null where chi vanishes
ordered_json value_vector_json(const Character& chi) {
  ordered_json values = ordered_json::array();
  for (std::int64_t n = 1; n <= chi.q(); ++n) {
    const auto u = chi.eval(n);
    if (u.is_zero()) {
      values.push_back(nullptr);
    } else {
      values.push_back(u.t);
    }
  }
  return values;
}

std::string value_vector_text(const Character& chi) {
  std::string out;
  for (std::int64_t n = 1; n <= chi.q(); ++n) {
    if (n > 1) out += ' ';
    const auto u = chi.eval(n);
    out += u.is_zero() ? std::string("z") : std::to_string(u.t);
  }
  return out;
}

// ---------------------------------------------------------------- chars ----

struct CharsOpts {
  std::int64_t q = 0;
  bool as_json = false;
  std::string csv_path;
};

void run_chars(const CharsOpts& o, const CommonOpts& common) {
  const WallClock clock;
  const CharacterTable table(o.q);

  ordered_json config{{"q", o.q}};
  if (o.as_json) {
    ordered_json chars = ordered_json::array();
    for (std::int64_t j = 0; j < table.phi(); ++j) {
      const Character chi = table.character(j);
      ordered_json rec;
      rec["j"] = j;
      rec["order"] = chi.order();
      rec["parity"] = chi.parity();
      rec["kind"] = kind_of(chi);
      rec["angle_denominator"] = chi.phi();
      rec["values"] = value_vector_json(chi);
      rec["gauss_sum"] = complex_json(dirwalk::gauss_sum(chi));
      chars.push_back(std::move(rec));
    }
    ordered_json result;
    result["q"] = table.q();
    result["phi"] = table.phi();
    result["generator"] = table.generator();
    result["orthogonality_max_residual"] = table.orthogonality_max_residual();
    result["characters"] = std::move(chars);
    emit_doc("chars", std::move(config), common, clock.seconds(),
             std::move(result));
    return;
  }

  if (!o.csv_path.empty()) {
    CsvSink csv(o.csv_path);
    csv.row({"j", "order", "parity", "kind", "values"});
    for (std::int64_t j = 0; j < table.phi(); ++j) {
      const Character chi = table.character(j);
      csv.row({std::to_string(j), std::to_string(chi.order()),
               std::to_string(chi.parity()), kind_of(chi),
               value_vector_text(chi)});
    }
    emit_meta_line("chars", std::move(config), common, clock.seconds());
    return;
  }

  std::printf("characters mod %lld (generator %lld, phi = %lld)\n",
              static_cast<long long>(table.q()),
              static_cast<long long>(table.generator()),
              static_cast<long long>(table.phi()));
  for (std::int64_t j = 0; j < table.phi(); ++j) {
    const Character chi = table.character(j);
    std::printf("  j=%lld  order=%lld  parity=%d  %-9s  values: %s\n",
                static_cast<long long>(j),
                static_cast<long long>(chi.order()), chi.parity(),
                kind_of(chi), value_vector_text(chi).c_str());
  }
  std::printf("orthogonality max residual: %.3e\n",
              table.orthogonality_max_residual());
  emit_meta_line("chars", std::move(config), common, clock.seconds());
}

// --------------------------------------------------------------- primes ----

struct PrimesOpts {
  double upto = 0.0;
  std::uint64_t nth = 0;
  bool has_upto = false;
  bool has_nth = false;
  bool count_only = false;
  std::string csv_path;
};

void run_primes(const PrimesOpts& o, const CommonOpts& common) {
  const WallClock clock;
  const SieveConfig cfg = make_cfg(common);
  const auto x = static_cast<std::uint64_t>(o.upto);

  ordered_json config;
  if (o.has_upto) config["upto"] = x;
  if (o.has_nth) config["nth"] = o.nth;
  config["count_only"] = o.count_only;

  if (o.has_nth) {
    const std::uint64_t p = dirwalk::nth_prime(o.nth, cfg);
    emit_doc("primes", std::move(config), common, clock.seconds(),
             ordered_json{{"n", o.nth}, {"prime", p}});
    return;
  }
  if (o.count_only) {
    const std::uint64_t n = dirwalk::prime_pi(x, cfg);
    emit_doc("primes", std::move(config), common, clock.seconds(),
             ordered_json{{"x", x}, {"count", n}});
    return;
  }
  // stream (index, prime) rows below the cutoff
  std::uint64_t n = 0;
  CsvSink csv(o.csv_path);
  csv.row({"n", "p"});
  dirwalk::visit_primes({0, x}, cfg, [&](std::uint64_t p) {
    ++n;
    csv.row({fmt_u64(n), fmt_u64(p)});
  });
  config["csv"] = o.csv_path.empty() ? "-" : o.csv_path;
  emit_doc("primes", std::move(config), common, clock.seconds(),
           ordered_json{{"x", x}, {"count", n}});
}

// ---------------------------------------------------------------- pairs ----

struct PairsOpts {
  std::int64_t q = 0;
  int k = 1;
  double upto = 0.0;
  bool los = false;
  std::string csv_path;
};

void run_pairs(const PairsOpts& o, const CommonOpts& common) {
  const WallClock clock;
  const SieveConfig cfg = make_cfg(common);
  const auto x = static_cast<std::uint64_t>(o.upto);

  const auto m = dirwalk::pair_counts(o.q, o.k, x, cfg);
  std::optional<dirwalk::LosPrediction> pred;
  if (o.los) pred = dirwalk::los_predicted(o.q, o.k, static_cast<double>(x));

  CsvSink csv(o.csv_path);
  csv.row({"a", "b", "count", "f_emp", "f_los", "residual"});
  for (std::int64_t a = 1; a < o.q; ++a) {
    for (std::int64_t b = 1; b < o.q; ++b) {
      const double emp = m.freq(a, b);
      std::string f_los, residual;
      if (pred) {
        const double p = a == b ? pred->diag
                         : o.k == 1 ? pred->sym_offdiag / 2.0
                                    : pred->offdiag;
        f_los = fmt17(p);
        residual = fmt17(emp - p);
      }
      csv.row({std::to_string(a), std::to_string(b), fmt_u64(m.at(a, b)),
               fmt17(emp), f_los, residual});
    }
  }

  ordered_json config{{"q", o.q}, {"k", o.k}, {"upto", x}, {"los", o.los}};
  std::uint64_t counted = 0;
  for (const auto c : m.counts) counted += c;
  ordered_json result{{"q", o.q},
                      {"k", o.k},
                      {"x", x},
                      {"n_pi", m.n_pi},
                      {"counted_pairs", counted},
                      {"dropped_pairs", m.dropped}};
  if (pred) {
    ordered_json p{{"diag", pred->diag},
                   {"sym_offdiag", pred->sym_offdiag},
                   {"uniform_diag", pred->uniform_diag},
                   {"uniform_sym_offdiag", pred->uniform_sym_offdiag}};
    if (o.k >= 2) p["offdiag"] = pred->offdiag;
    result["prediction"] = std::move(p);
  }
  emit_doc("pairs", std::move(config), common, clock.seconds(),
           std::move(result));
}

// ----------------------------------------------------------------- freq ----

struct FreqOpts {
  std::int64_t q = 0;
  std::int64_t j = 0;
  double upto = 0.0;
  std::string csv_path;
};

void run_freq(const FreqOpts& o, const CommonOpts& common) {
  const WallClock clock;
  const SieveConfig cfg = make_cfg(common);
  const Character chi = CharacterTable(o.q).character(o.j);
  const auto x = static_cast<std::uint64_t>(o.upto);
  const auto f = dirwalk::frequencies(chi, x, cfg);

  CsvSink csv(o.csv_path);
  csv.row({"class_index", "count", "freq", "deviation"});
  const double uniform = 1.0 / static_cast<double>(f.r);
  for (std::size_t i = 0; i < f.counts.size(); ++i) {
    csv.row({std::to_string(i), fmt_u64(f.counts[i]), fmt17(f.freqs[i]),
             fmt17(f.freqs[i] - uniform)});
  }

  ordered_json config{{"q", o.q}, {"char", o.j}, {"upto", x}};
  emit_doc("freq", std::move(config), common, clock.seconds(),
           ordered_json{{"q", o.q},
                        {"j", o.j},
                        {"order", f.r},
                        {"x", x},
                        {"n_pi", f.n_pi},
                        {"zero_count", f.zero_count},
                        {"max_abs_dev", f.max_abs_dev}});
}

// ----------------------------------------------------------------- walk ----

struct WalkOpts {
  std::int64_t q = 0;
  std::int64_t j = 0;
  std::uint64_t n = 0;
  std::uint64_t start = 1;
  std::string mode = "cos";
  std::vector<std::uint64_t> checkpoints;
  std::string csv_path;
};

void run_walk(const WalkOpts& o, const CommonOpts& common) {
  const WallClock clock;
  const SieveConfig cfg = make_cfg(common);
  const Character chi = CharacterTable(o.q).character(o.j);

  dirwalk::WalkOptions opts;
  opts.start = o.start;
  opts.mode = o.mode == "cos"   ? dirwalk::WalkMode::Cosine
              : o.mode == "sin" ? dirwalk::WalkMode::Sine
                                : dirwalk::WalkMode::Complex;
  if (!o.checkpoints.empty()) {
    opts.checkpoints = o.checkpoints;
  } else if (o.n > 0) {
    // default to the full series for plotting
    opts.checkpoints.resize(o.n);
    for (std::uint64_t i = 0; i < o.n; ++i) opts.checkpoints[i] = o.start + i;
  }
  const auto w = dirwalk::walk(chi, o.n, opts, cfg);

  const bool complex_mode = opts.mode == dirwalk::WalkMode::Complex;
  CsvSink csv(o.csv_path);
  if (complex_mode) {
    csv.row({"n", "c_re", "c_im"});
  } else {
    csv.row({"n", "c"});
  }
  for (std::size_t i = 0; i < w.ns.size(); ++i) {
    if (complex_mode) {
      csv.row({fmt_u64(w.ns[i]), fmt17(w.values[i].real()),
               fmt17(w.values[i].imag())});
    } else {
      csv.row({fmt_u64(w.ns[i]), fmt17(w.values[i].real())});
    }
  }

  ordered_json config{{"q", o.q},     {"char", o.j},
                      {"n", o.n},     {"start", o.start},
                      {"mode", o.mode}};
  if (!o.checkpoints.empty()) config["checkpoints"] = o.checkpoints;
  ordered_json result{{"q", o.q},
                      {"j", o.j},
                      {"n", o.n},
                      {"rows", w.ns.size()},
                      {"final", complex_json(w.final_value)}};
  emit_doc("walk", std::move(config), common, clock.seconds(),
           std::move(result));
}

// ------------------------------------------------------------- ensemble ----

struct EnsembleOpts {
  std::int64_t q = 0;
  std::int64_t j = 0;
  std::uint64_t n1 = 1'000'000;
  std::uint64_t block_len = 0;
  std::uint64_t blocks = 0;
  std::string spacing = "fixed:10";
  std::uint64_t seed = 1;
  int hist_bins = 0;
  std::string csv_path;
  std::string char_file;
};

dirwalk::Spacing parse_spacing(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  try {
    if (parts.size() == 2 && parts[0] == "fixed") {
      return {dirwalk::SpacingKind::Fixed, std::stoull(parts[1]), 1, 1};
    }
    if (parts.size() == 3 && parts[0] == "rand") {
      return {dirwalk::SpacingKind::RandomUniform, 0, std::stoull(parts[1]),
              std::stoull(parts[2])};
    }
  } catch (const std::exception&) {
    // fall through to the validation error
  }
  throw CLI::ValidationError(
      "--spacing", "expected fixed:<D> or rand:<lo>:<hi>, got '" + text + "'");
}

// Validate a `chars --json` record against the freshly built table; the
// ensemble then runs on the (identical) in-memory character.
void check_char_file(const std::string& path, const Character& chi) {
  std::ifstream in(path);
  if (!in) throw dirwalk::Error("cannot read char file: " + path);
  ordered_json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw dirwalk::SpecInvalid(std::string("char file is not valid json: ") +
                               e.what());
  }
  const ordered_json& result = doc.contains("result") ? doc["result"] : doc;
  if (!result.contains("q") || result["q"].get<std::int64_t>() != chi.q()) {
    throw dirwalk::SpecInvalid("char file modulus does not match --q");
  }
  for (const auto& rec : result["characters"]) {
    if (rec["j"].get<std::int64_t>() != chi.j()) continue;
    if (rec["order"].get<std::int64_t>() != chi.order() ||
        rec["parity"].get<int>() != chi.parity()) {
      throw dirwalk::SpecInvalid("char file record disagrees with the table");
    }
    const auto& values = rec["values"];
    if (static_cast<std::int64_t>(values.size()) != chi.q()) {
      throw dirwalk::SpecInvalid("char file value vector has the wrong size");
    }
    for (std::int64_t n = 1; n <= chi.q(); ++n) {
      const auto u = chi.eval(n);
      const auto& cell = values[static_cast<std::size_t>(n - 1)];
      const bool match =
          u.is_zero() ? cell.is_null()
                      : cell.is_number_integer() &&
                            cell.get<std::int64_t>() == u.t;
      if (!match) {
        throw dirwalk::SpecInvalid("char file value vector disagrees with "
                                   "the table");
      }
    }
    return;
  }
  throw dirwalk::SpecInvalid("char file has no record for the requested j");
}

void run_ensemble(const EnsembleOpts& o, const CommonOpts& common) {
  const WallClock clock;
  const SieveConfig cfg = make_cfg(common);
  const Character chi = CharacterTable(o.q).character(o.j);
  if (!o.char_file.empty()) check_char_file(o.char_file, chi);

  dirwalk::EnsembleSpec spec;
  spec.n1 = o.n1;
  spec.block_len = o.block_len;
  spec.blocks = o.blocks;
  spec.spacing = parse_spacing(o.spacing);
  spec.seed = o.seed;
  const auto ens = dirwalk::build_ensemble(chi, spec, cfg);

  std::vector<double> norm;
  if (!chi.is_principal()) norm = dirwalk::normalized(ens, chi);

  CsvSink csv(o.csv_path);
  csv.row({"block_index", "start", "C_N", "normalized"});
  for (std::size_t i = 0; i < ens.blocks.size(); ++i) {
    csv.row({std::to_string(i), fmt_u64(ens.starts[i]), fmt17(ens.blocks[i]),
             norm.empty() ? std::string() : fmt17(norm[i])});
  }

  ordered_json config{{"q", o.q},           {"char", o.j},
                      {"n1", o.n1},         {"N", o.block_len},
                      {"M", o.blocks},      {"spacing", o.spacing},
                      {"seed", o.seed}};
  if (o.hist_bins > 0) config["hist_bins"] = o.hist_bins;
  if (!o.char_file.empty()) config["char_file"] = o.char_file;

  const auto mom = dirwalk::moments(ens.blocks);
  ordered_json result{{"q", o.q},
                      {"j", o.j},
                      {"blocks", ens.blocks.size()},
                      {"p_first", ens.p_first},
                      {"log_p_drift", ens.log_p_drift},
                      {"moments",
                       {{"mean", mom.mean},
                        {"variance", mom.variance},
                        {"skewness", mom.skewness},
                        {"excess_kurtosis", mom.excess_kurtosis}}}};
  if (!chi.is_principal()) {
    const auto th = dirwalk::theory_variance(
        chi, spec.block_len, static_cast<double>(ens.start_primes.front()));
    result["theory_first_block"] = {{"lambda", th.lambda},
                                    {"rho", th.rho},
                                    {"b2", th.b2},
                                    {"variance", th.variance}};
    const auto ks = dirwalk::normality_test(norm);
    result["normalized"] = {{"ks_statistic", ks.statistic},
                            {"ks_p_value", ks.p_value},
                            {"mean", ks.sample_mean},
                            {"std", ks.sample_std}};
  }

  if (o.hist_bins > 0) {
    if (chi.is_principal()) {
      throw dirwalk::SpecInvalid(
          "histogram output needs a non-principal character");
    }
    // fixed [-5, 5] range; end bins absorb anything outside
    const int bins = o.hist_bins;
    const double lo = -5.0, hi = 5.0;
    const double width = (hi - lo) / bins;
    std::vector<std::uint64_t> count(static_cast<std::size_t>(bins), 0);
    for (const double v : norm) {
      int idx = static_cast<int>(std::floor((v - lo) / width));
      idx = std::min(std::max(idx, 0), bins - 1);
      ++count[static_cast<std::size_t>(idx)];
    }
    CsvSink hist(o.csv_path + ".hist.csv");
    hist.row({"bin_center", "count", "normal_pdf_reference"});
    const double scale = static_cast<double>(norm.size()) * width;
    for (int i = 0; i < bins; ++i) {
      const double center = lo + (i + 0.5) * width;
      const double pdf = std::exp(-0.5 * center * center) /
                         std::sqrt(2.0 * std::numbers::pi);
      hist.row({fmt17(center), fmt_u64(count[static_cast<std::size_t>(i)]),
                fmt17(scale * pdf)});
    }
    result["histogram_csv"] = o.csv_path + ".hist.csv";
  }

  emit_doc("ensemble", std::move(config), common, clock.seconds(),
           std::move(result));
}

// ---------------------------------------------------------------- lfunc ----

struct LfuncOpts {
  std::int64_t q = 0;
  std::int64_t j = 0;
  std::string s_text;
  std::uint64_t euler_n = 0;
  bool fe_check = false;
  bool residue = false;
};

std::complex<double> parse_s(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) {
      return {std::stod(text), 0.0};
    }
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--s",
                               "expected <sigma>,<t>, got '" + text + "'");
  }
}

void run_lfunc(const LfuncOpts& o, const CommonOpts& common) {
  const WallClock clock;
  const SieveConfig cfg = make_cfg(common);
  const Character chi = CharacterTable(o.q).character(o.j);
  const std::complex<double> s = parse_s(o.s_text);

  ordered_json config{{"q", o.q},
                      {"char", o.j},
                      {"s", {{"sigma", s.real()}, {"t", s.imag()}}},
                      {"fe_check", o.fe_check},
                      {"residue", o.residue}};
  if (o.euler_n > 0) config["euler_n"] = o.euler_n;

  ordered_json result;
  result["q"] = o.q;
  result["j"] = o.j;
  result["s"] = {{"sigma", s.real()}, {"t", s.imag()}};
  try {
    result["value"] = complex_json(dirwalk::l_eval(chi, s));
    result["error_estimate"] = 1e-12;
  } catch (const dirwalk::PoleAt1&) {
    if (!o.residue) throw;
    result["value"] = nullptr;
    result["pole_at_1"] = true;
  }
  if (o.euler_n > 0) {
    const auto split = dirwalk::euler_split(chi, s, o.euler_n, cfg);
    result["euler"] = {{"n", o.euler_n},
                       {"x_sum", complex_json(split.x_sum)},
                       {"r_sum", complex_json(split.r_sum)},
                       {"log_l", complex_json(split.log_l)},
                       {"residual", split.residual}};
  }
  if (o.fe_check) {
    result["fe_residual"] = dirwalk::functional_equation_residual(chi, s);
  }
  if (o.residue) {
    result["residue_at_1"] = complex_json(dirwalk::residue_at_one(chi));
  }
  emit_doc("lfunc", std::move(config), common, clock.seconds(),
           std::move(result));
}

// ---------------------------------------------------------------- check ----

struct CheckOpts {
  std::string level = "desk";
};

int run_check(const CheckOpts& o, const CommonOpts& common) {
  const WallClock clock;
  dirwalk::AcceptanceOptions opts;
  opts.threads = common.threads;
  std::filesystem::path scratch;
  if (common.no_cache) {
    // a throwaway directory ignores any configured persistent cache
    scratch = std::filesystem::temp_directory_path() /
              ("dirwalk-nocache-" + std::to_string(::getpid()));
    opts.cache_dir = scratch.string();
  }
  const auto results = dirwalk::run_desk_acceptance(opts, std::cout);
  if (!scratch.empty()) {
    std::error_code ec;
    std::filesystem::remove_all(scratch, ec);
  }
  const int failures = dirwalk::count_failures(results);
  emit_meta_line("check", ordered_json{{"level", o.level}}, common,
                 clock.seconds());
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prime-indexed character walks: tables, pair bias, ensembles, "
               "and L-function checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", dirwalk::kVersion);

  CommonOpts common;
  app.add_option("--threads", common.threads, "worker threads for sieving")
      ->check(CLI::PositiveNumber);
  app.add_flag("--no-cache", common.no_cache,
               "do not read or write the prime segment cache");

  int exit_code = 0;

  CharsOpts chars;
  auto* sc_chars =
      app.add_subcommand("chars", "character table of a prime modulus");
  sc_chars->add_option("--q", chars.q, "prime modulus")->required();
  auto* chars_json =
      sc_chars->add_flag("--json", chars.as_json, "emit the table as json");
  auto* chars_csv = sc_chars->add_option("--csv", chars.csv_path,
                                         "write table rows to a csv file");
  chars_json->excludes(chars_csv);
  sc_chars->callback([&] { run_chars(chars, common); });

  PrimesOpts primes;
  auto* sc_primes =
      app.add_subcommand("primes", "sieve primes, count them, or index them");
  auto* opt_upto =
      sc_primes->add_option("--upto", primes.upto, "strict upper bound x");
  auto* opt_nth =
      sc_primes->add_option("--nth", primes.nth, "1-based prime index");
  auto* opt_count = sc_primes->add_flag("--count-only", primes.count_only,
                                        "print pi(x) instead of a prime list");
  sc_primes->add_option("--csv", primes.csv_path, "prime list output file");
  opt_upto->excludes(opt_nth);
  opt_count->needs(opt_upto);
  sc_primes->callback([&] {
    primes.has_upto = opt_upto->count() > 0;
    primes.has_nth = opt_nth->count() > 0;
    if (!primes.has_upto && !primes.has_nth) {
      throw CLI::ValidationError("primes",
                                 "exactly one of --upto/--nth is required");
    }
    run_primes(primes, common);
  });

  PairsOpts pairs;
  auto* sc_pairs = app.add_subcommand(
      "pairs", "joint residue counts of prime pairs at a fixed lag");
  sc_pairs->add_option("--q", pairs.q, "prime modulus")->required();
  sc_pairs->add_option("--k", pairs.k, "index lag")
      ->required()
      ->check(CLI::PositiveNumber);
  sc_pairs->add_option("--upto", pairs.upto, "cutoff x on the first member")
      ->required();
  sc_pairs->add_flag("--los", pairs.los,
                     "add predicted frequencies and residuals");
  sc_pairs->add_option("--csv", pairs.csv_path, "matrix output file");
  sc_pairs->callback([&] { run_pairs(pairs, common); });

  FreqOpts freq;
  auto* sc_freq = app.add_subcommand(
      "freq", "empirical distribution of character angles over primes");
  sc_freq->add_option("--q", freq.q, "prime modulus")->required();
  sc_freq->add_option("--char", freq.j, "character index j")->required();
  sc_freq->add_option("--upto", freq.upto, "prime cutoff x")->required();
  sc_freq->add_option("--csv", freq.csv_path, "class table output file");
  sc_freq->callback([&] { run_freq(freq, common); });

  WalkOpts walk;
  auto* sc_walk =
      app.add_subcommand("walk", "prefix sums of character values over primes");
  sc_walk->add_option("--q", walk.q, "prime modulus")->required();
  sc_walk->add_option("--char", walk.j, "character index j")->required();
  sc_walk->add_option("--n", walk.n, "number of steps")->required();
  sc_walk->add_option("--start", walk.start, "1-based start index");
  sc_walk->add_option("--mode", walk.mode, "projection of the steps")
      ->check(CLI::IsMember({"cos", "sin", "complex"}));
  sc_walk->add_option("--checkpoints", walk.checkpoints,
                      "comma-separated indices to record")
      ->delimiter(',');
  sc_walk->add_option("--csv", walk.csv_path, "series output file");
  sc_walk->callback([&] {
    if (walk.checkpoints.empty() && walk.n > (std::uint64_t{1} << 24)) {
      throw CLI::ValidationError(
          "--checkpoints", "required for walks longer than 2^24 steps");
    }
    run_walk(walk, common);
  });

  EnsembleOpts ens;
  auto* sc_ens = app.add_subcommand(
      "ensemble", "block sums over windows of consecutive primes");
  sc_ens->add_option("--q", ens.q, "prime modulus")->required();
  sc_ens->add_option("--char", ens.j, "character index j")->required();
  sc_ens->add_option("--n1", ens.n1, "prime index of the first block");
  sc_ens->add_option("--N", ens.block_len, "block length")->required();
  sc_ens->add_option("--M", ens.blocks, "number of blocks")->required();
  sc_ens->add_option("--spacing", ens.spacing,
                     "gap between blocks, fixed:<D> or rand:<lo>:<hi>");
  sc_ens->add_option("--seed", ens.seed, "seed for randomized spacing");
  auto* opt_hist = sc_ens->add_option(
      "--hist-bins", ens.hist_bins, "also write a histogram of the "
      "normalized sums over [-5, 5]");
  opt_hist->check(CLI::PositiveNumber);
  auto* opt_ens_csv =
      sc_ens->add_option("--csv", ens.csv_path, "block table output file");
  opt_hist->needs(opt_ens_csv);
  sc_ens->add_option("--char-file", ens.char_file,
                     "validate the character against a `chars --json` dump");
  sc_ens->callback([&] {
    if (ens.hist_bins > 0 && (ens.csv_path.empty() || ens.csv_path == "-")) {
      throw CLI::ValidationError("--hist-bins", "needs --csv FILE");
    }
    run_ensemble(ens, common);
  });

  LfuncOpts lf;
  auto* sc_lfunc = app.add_subcommand(
      "lfunc", "evaluate the character L-function and its diagnostics");
  sc_lfunc->add_option("--q", lf.q, "prime modulus")->required();
  sc_lfunc->add_option("--char", lf.j, "character index j")->required();
  sc_lfunc->add_option("--s", lf.s_text, "evaluation point <sigma>,<t>")
      ->required();
  sc_lfunc->add_option("--euler-n", lf.euler_n,
                       "split log L over the first N primes")
      ->check(CLI::PositiveNumber);
  sc_lfunc->add_flag("--fe-check", lf.fe_check,
                     "report the functional-equation residual");
  sc_lfunc->add_flag("--residue", lf.residue,
                     "report the numerical residue at s = 1");
  sc_lfunc->callback([&] { run_lfunc(lf, common); });

  CheckOpts check;
  auto* sc_check =
      app.add_subcommand("check", "run the acceptance battery");
  sc_check->add_option("--level", check.level, "battery to run")
      ->check(CLI::IsMember({"desk"}));
  sc_check->callback([&] { exit_code = run_check(check, common); });

  // --threads / --no-cache live on the root; let them appear after the
  // subcommand name as well
  for (CLI::App* sc : {sc_chars, sc_primes, sc_pairs, sc_freq, sc_walk,
                       sc_ens, sc_lfunc, sc_check}) {
    sc->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help / --version
    }
    std::cerr << "error: " << e.what() << "\n\n" << app.help() << std::flush;
    return 2;
  } catch (const dirwalk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
