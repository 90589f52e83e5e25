#include "dirwalk/primes.hpp"

#include <unistd.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <deque>
#include <filesystem>
#include <fstream>
#include <future>
#include <string>

#include "dirwalk/errors.hpp"

namespace dirwalk {
namespace {

// Bit g of the sieve represents the odd number 2g+1. Segments are aligned to
// 128 numbers = 64 bits so word boundaries never split a segment.
constexpr std::uint64_t kPresievePeriod = 3ull * 5 * 7 * 11 * 13;  // in bits
constexpr std::uint64_t kCacheChunk = std::uint64_t{1} << 26;      // numbers
constexpr char kCacheMagic[8] = {'D', 'W', 'P', 'C', 'v', '0', '0', '1'};

std::vector<std::uint64_t> small_primes_to(std::uint64_t n) {
  std::vector<bool> comp(n + 1, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (std::uint64_t m = i * i; m <= n; m += i) comp[m] = true;
  }
  return out;
}

// word-periodic presieve pattern: kPresievePeriod words, bit (64w + b)
// set iff 2*(64w + b) + 1 is divisible by 3, 5, 7, 11 or 13
const std::vector<std::uint64_t>& presieve_pattern() {
  static const std::vector<std::uint64_t> pat = [] {
    std::vector<std::uint64_t> p(kPresievePeriod, 0);
    for (const std::uint64_t q : {3ull, 5ull, 7ull, 11ull, 13ull}) {
      // odd multiples of q are q apart in bit space; first odd multiple is q
      // itself at bit (q-1)/2
      for (std::uint64_t g = (q - 1) / 2; g < 64 * kPresievePeriod; g += q)
        p[g >> 6] |= std::uint64_t{1} << (g & 63);
    }
    return p;
  }();
  return pat;
}

struct SegmentPlan {
  std::uint64_t lo = 0;   // first number covered (multiple of 128, >= 0)
  std::uint64_t hi = 0;   // one past last number covered
  std::uint64_t bit0 = 0; // global bit index of the first word
};

// sieve one aligned segment; out has (hi-lo)/128 words, bit g of word w is
// the oddness-compressed candidate 2*(bit0 + 64w + g) + 1
void sieve_segment(const SegmentPlan& seg,
                   std::span<const std::uint64_t> base_primes,
                   std::vector<std::uint64_t>& words) {
  const std::size_t nwords = static_cast<std::size_t>((seg.hi - seg.lo) / 128);
  const std::uint64_t nbits = 64 * nwords;
  words.resize(nwords);

  const auto& pat = presieve_pattern();
  for (std::size_t w = 0; w < nwords; ++w)
    words[w] = pat[(seg.bit0 / 64 + w) % kPresievePeriod];

  for (const std::uint64_t p : base_primes) {
    if (p <= 13) continue;  // presieved
    std::uint64_t start = p * p;
    if (start >= seg.hi) break;
    if (start < seg.lo) {
      start = (seg.lo + p - 1) / p * p;
      if ((start & 1) == 0) start += p;
    }
    for (std::uint64_t g = (start - 1) / 2 - seg.bit0; g < nbits; g += p)
      words[g >> 6] |= std::uint64_t{1} << (g & 63);
  }

  if (seg.lo < 18) {
    // the presieve marks 3,5,7,11,13 themselves and leaves bit 0 (the
    // number 1) clear; fix both up in the lowest segment
    words[0] |= 1;  // 1 is not prime
    for (const std::uint64_t p : {3ull, 5ull, 7ull, 11ull, 13ull})
      words[0] &= ~(std::uint64_t{1} << ((p - 1) / 2));
  }
}

void emit_segment(const SegmentPlan& seg, std::span<const std::uint64_t> words,
                  std::uint64_t lo, std::uint64_t hi,
                  std::vector<std::uint64_t>& buf) {
  buf.clear();
  if (lo <= 2 && 2 < hi) buf.push_back(2);
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t bits = ~words[w];
    while (bits) {
      const int b = std::countr_zero(bits);
      bits &= bits - 1;
      const std::uint64_t p = 2 * (seg.bit0 + 64 * w + static_cast<std::uint64_t>(b)) + 1;
      if (p >= lo && p < hi) buf.push_back(p);
    }
  }
}

std::string cache_dir_for(const SieveConfig& cfg) {
  if (!cfg.use_cache) return {};
  if (!cfg.cache_dir.empty()) return cfg.cache_dir;
  const char* env = std::getenv("DIRWALK_CACHE_DIR");
  return env ? std::string(env) : std::string{};
}

std::string chunk_path(const std::string& dir, std::uint64_t lo,
                       std::uint64_t hi) {
  return dir + "/segment_" + std::to_string(lo) + "_" + std::to_string(hi) +
         ".dwpc";
}

bool read_chunk_cache(const std::string& path, std::uint64_t lo,
                      std::uint64_t hi, std::vector<std::uint64_t>& primes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  char magic[8];
  std::uint64_t flo = 0, fhi = 0, count = 0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&flo), 8);
  in.read(reinterpret_cast<char*>(&fhi), 8);
  in.read(reinterpret_cast<char*>(&count), 8);
  if (!in || std::memcmp(magic, kCacheMagic, 8) != 0 || flo != lo || fhi != hi)
    return false;
  if (count > (hi - lo)) return false;
  primes.resize(count);
  in.read(reinterpret_cast<char*>(primes.data()),
          static_cast<std::streamsize>(count * 8));
  if (!in) return false;
  // trailing byte check: must be at EOF
  char extra;
  if (in.read(&extra, 1)) return false;
  return true;
}

void write_chunk_cache(const std::string& dir, std::uint64_t lo,
                       std::uint64_t hi,
                       std::span<const std::uint64_t> primes) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::string final_path = chunk_path(dir, lo, hi);
  const std::string tmp_path =
      final_path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
    if (!out) return;
    const std::uint64_t count = primes.size();
    out.write(kCacheMagic, 8);
    out.write(reinterpret_cast<const char*>(&lo), 8);
    out.write(reinterpret_cast<const char*>(&hi), 8);
    out.write(reinterpret_cast<const char*>(&count), 8);
    out.write(reinterpret_cast<const char*>(primes.data()),
              static_cast<std::streamsize>(count * 8));
    if (!out) {
      out.close();
      std::filesystem::remove(tmp_path, ec);
      return;
    }
  }
  std::filesystem::rename(tmp_path, final_path, ec);
  if (ec) std::filesystem::remove(tmp_path, ec);
}

// sieve [lo, hi) (not cache-aligned) in aligned segments, emitting prime
// spans in order; collect gathers every emitted prime for cache writing
void sieve_range(std::uint64_t lo, std::uint64_t hi, const SieveConfig& cfg,
                 std::span<const std::uint64_t> base_primes,
                 const std::function<void(std::span<const std::uint64_t>)>& f,
                 std::vector<std::uint64_t>* collect) {
  if (cfg.segment_size < 256)
    throw SpecInvalid("sieve segment size must be at least 256");
  if (cfg.segment_size / 16 > cfg.max_segment_bytes)
    throw BudgetExceeded("sieve segment exceeds the per-segment memory budget");

  const std::uint64_t seg_numbers = cfg.segment_size / 128 * 128;
  const std::uint64_t first = lo / 128 * 128;
  const std::uint64_t nsegs = (hi - first + seg_numbers - 1) / seg_numbers;

  auto plan = [&](std::uint64_t i) {
    SegmentPlan s;
    s.lo = first + i * seg_numbers;
    s.hi = std::min(hi, s.lo + seg_numbers);
    // round covered range up to a whole word; emit filters to [lo, hi)
    s.hi = (s.hi - s.lo + 127) / 128 * 128 + s.lo;
    s.bit0 = s.lo / 2;
    return s;
  };

  std::vector<std::uint64_t> buf;
  if (cfg.threads <= 1) {
    std::vector<std::uint64_t> words;
    for (std::uint64_t i = 0; i < nsegs; ++i) {
      const SegmentPlan seg = plan(i);
      sieve_segment(seg, base_primes, words);
      emit_segment(seg, words, std::max(lo, seg.lo), hi, buf);
      if (collect) collect->insert(collect->end(), buf.begin(), buf.end());
      f(buf);
    }
    return;
  }

  // ordered window of asynchronous segment jobs
  const std::uint64_t window = static_cast<std::uint64_t>(cfg.threads);
  std::deque<std::future<std::vector<std::uint64_t>>> pending;
  std::uint64_t launched = 0;
  auto launch = [&] {
    const SegmentPlan seg = plan(launched++);
    pending.push_back(std::async(std::launch::async, [seg, base_primes] {
      std::vector<std::uint64_t> words;
      sieve_segment(seg, base_primes, words);
      return words;
    }));
  };
  while (launched < std::min(window, nsegs)) launch();
  for (std::uint64_t i = 0; i < nsegs; ++i) {
    std::vector<std::uint64_t> words = pending.front().get();
    pending.pop_front();
    if (launched < nsegs) launch();
    const SegmentPlan seg = plan(i);
    emit_segment(seg, words, std::max(lo, seg.lo), hi, buf);
    if (collect) collect->insert(collect->end(), buf.begin(), buf.end());
    f(buf);
  }
}

}  // namespace

void visit_prime_spans(
    PrimeRange r, const SieveConfig& cfg,
    const std::function<void(std::span<const std::uint64_t>)>& f) {
  if (r.hi <= r.lo) return;
  if (r.hi > cfg.max_bound)
    throw BudgetExceeded("requested range exceeds the sieve bound budget");

  const std::uint64_t root =
      static_cast<std::uint64_t>(std::sqrt(static_cast<double>(r.hi))) + 2;
  const std::vector<std::uint64_t> base = small_primes_to(root);
  const std::string cache_dir = cache_dir_for(cfg);

  const std::uint64_t first_chunk = r.lo / kCacheChunk;
  const std::uint64_t last_chunk = (r.hi - 1) / kCacheChunk;
  std::vector<std::uint64_t> cached;
  for (std::uint64_t k = first_chunk; k <= last_chunk; ++k) {
    const std::uint64_t clo = k * kCacheChunk;
    const std::uint64_t chi = clo + kCacheChunk;
    const std::uint64_t lo = std::max(r.lo, clo);
    const std::uint64_t hi = std::min(r.hi, chi);
    if (!cache_dir.empty() &&
        read_chunk_cache(chunk_path(cache_dir, clo, chi), clo, chi, cached)) {
      const auto begin = std::lower_bound(cached.begin(), cached.end(), lo);
      const auto end = std::lower_bound(begin, cached.end(), hi);
      f(std::span<const std::uint64_t>(
          cached.data() + (begin - cached.begin()),
          static_cast<std::size_t>(end - begin)));
      continue;
    }
    const bool full_chunk = (lo == clo && hi == chi);
    if (!cache_dir.empty() && full_chunk) {
      std::vector<std::uint64_t> collect;
      sieve_range(lo, hi, cfg, base, f, &collect);
      write_chunk_cache(cache_dir, clo, chi, collect);
    } else {
      sieve_range(lo, hi, cfg, base, f, nullptr);
    }
  }
}

std::vector<std::uint64_t> primes_in(PrimeRange r, const SieveConfig& cfg) {
  std::vector<std::uint64_t> out;
  visit_prime_spans(r, cfg, [&](std::span<const std::uint64_t> ps) {
    out.insert(out.end(), ps.begin(), ps.end());
  });
  return out;
}

std::uint64_t prime_pi(std::uint64_t x, const SieveConfig& cfg) {
  std::uint64_t n = 0;
  visit_prime_spans({0, x}, cfg,
                    [&](std::span<const std::uint64_t> ps) { n += ps.size(); });
  return n;
}

std::uint64_t nth_prime_upper_bound(std::uint64_t n) {
  static constexpr std::uint64_t small[] = {0, 2, 3, 5, 7, 11};
  if (n < 6) return small[n] + 1;
  const double nd = static_cast<double>(n);
  const double b = nd * (std::log(nd) + std::log(std::log(nd)));
  return static_cast<std::uint64_t>(b) + 64;
}

std::uint64_t nth_prime(std::uint64_t n, const SieveConfig& cfg) {
  if (n == 0) throw DomainError("prime indices are 1-based");
  std::uint64_t bound = nth_prime_upper_bound(n);
  std::uint64_t seen = 0;
  std::uint64_t lo = 0;
  for (;;) {
    std::uint64_t found = 0;
    visit_prime_spans({lo, bound}, cfg, [&](std::span<const std::uint64_t> ps) {
      if (found == 0 && seen + ps.size() >= n)
        found = ps[static_cast<std::size_t>(n - seen - 1)];
      if (found == 0) seen += ps.size();
    });
    if (found) return found;
    lo = bound;
    bound += bound / 4 + 1024;
    if (bound > cfg.max_bound)
      throw BudgetExceeded("nth_prime would sieve past the configured bound");
  }
}

namespace {

double adaptive_simpson(double a, double b, double fa, double fm, double fb,
                        double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = 1.0 / std::log(lm);
  const double frm = 1.0 / std::log(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
    return left + right + delta / 15.0;
  return adaptive_simpson(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace

double li(double x) {
  if (!(x >= 2.0)) throw DomainError("li defined for x >= 2");
  if (x == 2.0) return 0.0;
  const double a = 2.0, b = x;
  const double fa = 1.0 / std::log(a);
  const double fb = 1.0 / std::log(b);
  const double m = 0.5 * (a + b);
  const double fm = 1.0 / std::log(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  // drive the local error below a 1e-12 relative target
  const double eps = 1e-12 * std::max(1.0, std::abs(whole));
  return adaptive_simpson(a, b, fa, fm, fb, whole, eps, 64);
}

AngleStream angle_stream(const Character& chi, std::uint64_t start,
                         std::uint64_t count, const SieveConfig& cfg) {
  AngleStream s;
  s.q = chi.q();
  s.j = chi.j();
  s.start = start;
  s.primes.reserve(count);
  s.values.reserve(count);
  visit_angles(chi, start, count, cfg,
               [&](std::uint64_t p, std::int64_t res) {
                 s.primes.push_back(p);
                 s.values.push_back({chi.t_at(res), chi.phi()});
               });
  return s;
}

}  // namespace dirwalk
