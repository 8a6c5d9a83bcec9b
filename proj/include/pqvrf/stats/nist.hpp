#pragma once

// The eleven SP800-22 tests used for the pipeline evaluation.

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "pqvrf/bytes.hpp"
#include "pqvrf/stats/special.hpp"

namespace pqvrf::stats {

class InsufficientData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// One byte per bit, values 0 or 1.
class BitSequence {
 public:
  BitSequence() = default;
  explicit BitSequence(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto& b : bits_) b = b ? 1 : 0;
  }

  static BitSequence from_string(std::string_view s) {
    std::vector<std::uint8_t> v;
    v.reserve(s.size());
    for (char c : s) {
      if (c == '0' || c == '1') v.push_back(static_cast<std::uint8_t>(c - '0'));
      else if (c != ' ' && c != '\n') throw std::invalid_argument("bit string contains non-binary character");
    }
    return BitSequence(std::move(v));
  }

  // MSB-first unpacking.
  static BitSequence from_bytes(ByteView bytes, std::size_t max_bits = SIZE_MAX) {
    std::size_t n = std::min(bytes.size() * 8, max_bits);
    std::vector<std::uint8_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = (bytes[i / 8] >> (7 - i % 8)) & 1;
    return BitSequence(std::move(v));
  }

  std::size_t size() const { return bits_.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::size_t ones() const { return std::accumulate(bits_.begin(), bits_.end(), std::size_t{0}); }

 private:
  std::vector<std::uint8_t> bits_;
};

struct TestResult {
  std::string name;
  std::vector<double> p_values;
  bool pass = false;
  double statistic = 0;  // chi-square or normalized statistic, for diagnostics
};

inline constexpr double kDefaultAlpha = 0.01;

namespace detail {

inline TestResult finish(std::string name, std::vector<double> ps, double stat, double alpha) {
  for (double& p : ps) p = std::clamp(p, 0.0, 1.0);
  bool pass = std::all_of(ps.begin(), ps.end(), [&](double p) { return p >= alpha; });
  return TestResult{std::move(name), std::move(ps), pass, stat};
}

inline void require(bool ok, const char* what) {
  if (!ok) throw InsufficientData(what);
}

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace detail

inline constexpr std::string_view kMonobitName = "Frequency (Monobit) Test";
inline constexpr std::string_view kBlockFrequencyName = "Frequency Test within a Block";
inline constexpr std::string_view kRunsName = "Runs Test";
inline constexpr std::string_view kLongestRunName = "Test for the Longest Run of Ones in a Block";
inline constexpr std::string_view kDftName = "Discrete Fourier Transform (Spectral) Test";
inline constexpr std::string_view kNonOverlappingName = "Non-overlapping Template Matching Test";
inline constexpr std::string_view kOverlappingName = "Overlapping Template Matching Test";
inline constexpr std::string_view kLinearComplexityName = "Linear Complexity Test";
inline constexpr std::string_view kSerialName = "Serial Test";
inline constexpr std::string_view kApproximateEntropyName = "Approximate Entropy Test";
inline constexpr std::string_view kCumulativeSumsName = "Cumulative Sums Test";

inline TestResult frequency_monobit(const BitSequence& seq, double alpha = kDefaultAlpha) {
  detail::require(seq.size() > 0, "monobit: empty sequence");
  double n = static_cast<double>(seq.size());
  double s = 2.0 * static_cast<double>(seq.ones()) - n;
  double s_obs = std::fabs(s) / std::sqrt(n);
  return detail::finish(std::string(kMonobitName), {erfc(s_obs / std::sqrt(2.0))}, s_obs, alpha);
}

inline TestResult block_frequency(const BitSequence& seq, std::size_t M, double alpha = kDefaultAlpha) {
  detail::require(M >= 2, "block frequency: M must be at least 2");
  detail::require(M <= seq.size(), "block frequency: M exceeds sequence length");
  std::size_t N = seq.size() / M;
  double chi2 = 0;
  for (std::size_t i = 0; i < N; ++i) {
    std::size_t ones = 0;
    for (std::size_t j = 0; j < M; ++j) ones += seq[i * M + j];
    double pi = static_cast<double>(ones) / static_cast<double>(M) - 0.5;
    chi2 += pi * pi;
  }
  chi2 *= 4.0 * static_cast<double>(M);
  return detail::finish(std::string(kBlockFrequencyName), {igamc(N / 2.0, chi2 / 2.0)}, chi2, alpha);
}

inline TestResult runs(const BitSequence& seq, double alpha = kDefaultAlpha) {
  detail::require(seq.size() > 1, "runs: sequence too short");
  double n = static_cast<double>(seq.size());
  double pi = static_cast<double>(seq.ones()) / n;
  if (std::fabs(pi - 0.5) >= 2.0 / std::sqrt(n)) return detail::finish(std::string(kRunsName), {0.0}, 0.0, alpha);
  std::size_t v = 1;
  for (std::size_t k = 0; k + 1 < seq.size(); ++k) v += seq[k] != seq[k + 1];
  double num = std::fabs(static_cast<double>(v) - 2.0 * n * pi * (1 - pi));
  double den = 2.0 * std::sqrt(2.0 * n) * pi * (1 - pi);
  return detail::finish(std::string(kRunsName), {erfc(num / den)}, static_cast<double>(v), alpha);
}

struct LongestRunTable {
  std::size_t M;
  std::size_t min_bits;
  std::size_t v_low;  // longest runs <= v_low fall in the first class
  std::vector<double> pi;
};

// Parameter sets from the standard, selected by sequence length.
inline LongestRunTable longest_run_table(std::size_t n) {
  if (n >= 750000) return {10000, 750000, 10, {0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727}};
  if (n >= 6272) return {128, 6272, 4, {0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124}};
  if (n >= 128) return {8, 128, 1, {0.2148, 0.3672, 0.2305, 0.1875}};
  throw InsufficientData("longest run: at least 128 bits required");
}

inline TestResult longest_run_of_ones(const BitSequence& seq, double alpha = kDefaultAlpha) {
  LongestRunTable t = longest_run_table(seq.size());
  std::size_t K = t.pi.size() - 1;
  std::size_t N = seq.size() / t.M;
  std::vector<double> nu(K + 1, 0.0);
  for (std::size_t j = 0; j < N; ++j) {
    std::size_t best = 0, cur = 0;
    for (std::size_t i = 0; i < t.M; ++i) {
      cur = seq[j * t.M + i] ? cur + 1 : 0;
      best = std::max(best, cur);
    }
    std::size_t cls = std::clamp(best, t.v_low, t.v_low + K) - t.v_low;
    nu[cls] += 1;
  }
  double chi2 = 0;
  for (std::size_t i = 0; i <= K; ++i) {
    double e = static_cast<double>(N) * t.pi[i];
    chi2 += (nu[i] - e) * (nu[i] - e) / e;
  }
  return detail::finish(std::string(kLongestRunName), {igamc(K / 2.0, chi2 / 2.0)}, chi2, alpha);
}

inline TestResult dft_spectral(const BitSequence& seq, double alpha = kDefaultAlpha) {
  detail::require(seq.size() >= 2, "dft: sequence too short");
  const std::size_t n = seq.size();
  const int ni = static_cast<int>(n);
  std::unique_ptr<double[], decltype(&fftw_free)> in(fftw_alloc_real(n), &fftw_free);
  std::unique_ptr<fftw_complex[], decltype(&fftw_free)> out(fftw_alloc_complex(n / 2 + 1), &fftw_free);
  for (std::size_t i = 0; i < n; ++i) in[i] = seq[i] ? 1.0 : -1.0;
  // Planner calls are not thread-safe; execution is.
  fftw_plan plan;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(ni, in.get(), out.get(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  const double dn = static_cast<double>(n);
  const double T = std::sqrt(std::log(1.0 / 0.05) * dn);
  std::size_t n1 = 0;
  for (std::size_t k = 0; k < n / 2; ++k) n1 += std::hypot(out[k][0], out[k][1]) < T;
  double n0 = 0.95 * dn / 2.0;
  double d = (static_cast<double>(n1) - n0) / std::sqrt(dn * 0.95 * 0.05 / 4.0);
  return detail::finish(std::string(kDftName), {erfc(std::fabs(d) / std::sqrt(2.0))}, d, alpha);
}

// Templates of length m that cannot overlap a shifted copy of themselves.
inline std::vector<std::vector<std::uint8_t>> aperiodic_templates(std::size_t m) {
  if (m < 2 || m > 21) throw std::invalid_argument("template length must be in [2, 21]");
  std::vector<std::vector<std::uint8_t>> out;
  for (std::uint32_t v = 0; v < (1u << m); ++v) {
    std::vector<std::uint8_t> b(m);
    for (std::size_t i = 0; i < m; ++i) b[i] = (v >> (m - 1 - i)) & 1;
    bool periodic = false;
    for (std::size_t shift = 1; shift < m && !periodic; ++shift)
      periodic = std::equal(b.begin(), b.end() - static_cast<std::ptrdiff_t>(shift), b.begin() + static_cast<std::ptrdiff_t>(shift));
    if (!periodic) out.push_back(std::move(b));
  }
  return out;
}

namespace detail {

// Chi-square over per-block match counts W_j.
inline TestResult non_overlapping_from_counts(const std::vector<std::size_t>& W, std::size_t M, std::size_t m,
                                              double alpha) {
  double mu = static_cast<double>(M - m + 1) / std::ldexp(1.0, static_cast<int>(m));
  double var = static_cast<double>(M) * (std::ldexp(1.0, -static_cast<int>(m)) -
                                         static_cast<double>(2 * m - 1) * std::ldexp(1.0, -2 * static_cast<int>(m)));
  double chi2 = 0;
  for (std::size_t w : W) chi2 += (static_cast<double>(w) - mu) * (static_cast<double>(w) - mu) / var;
  return finish(std::string(kNonOverlappingName), {igamc(static_cast<double>(W.size()) / 2.0, chi2 / 2.0)}, chi2,
                alpha);
}

// Matches of `pattern` in windows[begin, begin + count), skipping m positions after each hit.
inline std::size_t count_non_overlapping(const std::vector<std::uint32_t>& windows, std::size_t begin,
                                         std::size_t count, std::uint32_t pattern, std::size_t m) {
  std::size_t W = 0;
  for (std::size_t i = 0; i < count;) {
    if (windows[begin + i] == pattern) {
      ++W;
      i += m;
    } else {
      ++i;
    }
  }
  return W;
}

// windows[i] = bits i .. i + m - 1 of the sequence as an integer, MSB first.
inline std::vector<std::uint32_t> sliding_windows(const BitSequence& seq, std::size_t m) {
  std::vector<std::uint32_t> out;
  if (seq.size() < m) return out;
  out.resize(seq.size() - m + 1);
  const std::uint32_t mask = (m == 32) ? 0xffffffffu : ((1u << m) - 1);
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    v = ((v << 1) | seq[i]) & mask;
    if (i + 1 >= m) out[i + 1 - m] = v;
  }
  return out;
}

inline std::uint32_t pattern_value(const std::vector<std::uint8_t>& B) {
  std::uint32_t v = 0;
  for (auto b : B) v = (v << 1) | (b ? 1u : 0u);
  return v;
}

}  // namespace detail

inline TestResult non_overlapping_template(const BitSequence& seq, const std::vector<std::uint8_t>& B,
                                           std::size_t blocks = 8, double alpha = kDefaultAlpha) {
  const std::size_t m = B.size();
  detail::require(m >= 2 && m <= 21 && blocks >= 1, "non-overlapping: bad parameters");
  const std::size_t M = seq.size() / blocks;
  detail::require(M > m, "non-overlapping: blocks shorter than the template");
  auto windows = detail::sliding_windows(seq, m);
  std::vector<std::size_t> W(blocks);
  for (std::size_t j = 0; j < blocks; ++j)
    W[j] = detail::count_non_overlapping(windows, j * M, M - m + 1, detail::pattern_value(B), m);
  return detail::non_overlapping_from_counts(W, M, m, alpha);
}

// Class probabilities for the overlapping test, from the exact series with
// lambda = (M - m + 1) / 2^m and eta = lambda / 2.
inline std::array<double, 6> overlapping_probabilities(std::size_t M, std::size_t m) {
  double lambda = static_cast<double>(M - m + 1) / std::ldexp(1.0, static_cast<int>(m));
  double eta = lambda / 2.0;
  std::array<double, 6> pi{};
  pi[0] = std::exp(-eta);
  double total = pi[0];
  for (int u = 1; u <= 4; ++u) {
    double s = 0;
    for (int l = 1; l <= u; ++l) {
      double binom = std::tgamma(u) / (std::tgamma(l) * std::tgamma(u - l + 1));
      s += binom * std::pow(eta, l) / std::tgamma(l + 1);
    }
    pi[static_cast<std::size_t>(u)] = std::exp(-eta) * s / std::ldexp(1.0, u);
    total += pi[static_cast<std::size_t>(u)];
  }
  pi[5] = 1.0 - total;
  return pi;
}

inline TestResult overlapping_template(const BitSequence& seq, std::size_t m = 9, std::size_t M = 1032,
                                       double alpha = kDefaultAlpha) {
  detail::require(m >= 2 && M > m, "overlapping: bad parameters");
  const std::size_t N = seq.size() / M;
  detail::require(N >= 1, "overlapping: sequence shorter than one block");
  auto pi = overlapping_probabilities(M, m);
  std::array<double, 6> nu{};
  for (std::size_t j = 0; j < N; ++j) {
    std::size_t W = 0, run = 0;
    for (std::size_t i = 0; i < M; ++i) {
      run = seq[j * M + i] ? run + 1 : 0;
      W += run >= m;
    }
    nu[std::min<std::size_t>(W, 5)] += 1;
  }
  double chi2 = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    double e = static_cast<double>(N) * pi[i];
    chi2 += (nu[i] - e) * (nu[i] - e) / e;
  }
  return detail::finish(std::string(kOverlappingName), {igamc(2.5, chi2 / 2.0)}, chi2, alpha);
}

// Length of the shortest LFSR generating s.
inline std::size_t berlekamp_massey(const std::uint8_t* s, std::size_t n) {
  std::vector<std::uint8_t> b(n + 1, 0), c(n + 1, 0), t;
  b[0] = c[0] = 1;
  std::size_t L = 0;
  std::ptrdiff_t m = -1;
  for (std::size_t N = 0; N < n; ++N) {
    std::uint8_t d = s[N];
    for (std::size_t i = 1; i <= L; ++i) d ^= c[i] & s[N - i];
    if (d) {
      t = c;
      std::size_t shift = N - static_cast<std::size_t>(m);
      for (std::size_t j = 0; j + shift <= n; ++j) c[j + shift] ^= b[j];
      if (2 * L <= N) {
        L = N + 1 - L;
        m = static_cast<std::ptrdiff_t>(N);
        b = t;
      }
    }
  }
  return L;
}

inline TestResult linear_complexity(const BitSequence& seq, std::size_t M = 500, double alpha = kDefaultAlpha) {
  detail::require(M >= 2, "linear complexity: M must be at least 2");
  const std::size_t N = seq.size() / M;
  detail::require(N >= 1, "linear complexity: sequence shorter than one block");
  static constexpr std::array<double, 7> pi{0.01047, 0.03125, 0.125, 0.5, 0.25, 0.0625, 0.020833};
  const double dM = static_cast<double>(M);
  const double sign = (M % 2 == 0) ? 1.0 : -1.0;
  const double mu = dM / 2.0 + (9.0 - sign) / 36.0 - (dM / 3.0 + 2.0 / 9.0) / std::pow(2.0, dM);
  std::array<double, 7> nu{};
  for (std::size_t j = 0; j < N; ++j) {
    double L = static_cast<double>(berlekamp_massey(seq.bits().data() + j * M, M));
    double T = sign * (L - mu) + 2.0 / 9.0;
    std::size_t cls;
    if (T <= -2.5) cls = 0;
    else if (T <= -1.5) cls = 1;
    else if (T <= -0.5) cls = 2;
    else if (T <= 0.5) cls = 3;
    else if (T <= 1.5) cls = 4;
    else if (T <= 2.5) cls = 5;
    else cls = 6;
    nu[cls] += 1;
  }
  double chi2 = 0;
  for (std::size_t i = 0; i < 7; ++i) {
    double e = static_cast<double>(N) * pi[i];
    chi2 += (nu[i] - e) * (nu[i] - e) / e;
  }
  return detail::finish(std::string(kLinearComplexityName), {igamc(3.0, chi2 / 2.0)}, chi2, alpha);
}

namespace detail {

// Counts of every overlapping m-bit pattern with wrap-around, indexed by value.
inline std::vector<std::size_t> pattern_counts(const BitSequence& seq, std::size_t m) {
  std::vector<std::size_t> counts(std::size_t{1} << m, 0);
  if (m == 0) {
    counts[0] = seq.size();
    return counts;
  }
  const std::size_t n = seq.size();
  const std::size_t mask = (std::size_t{1} << m) - 1;
  std::size_t v = 0;
  for (std::size_t i = 0; i + 1 < m; ++i) v = (v << 1) | seq[i % n];
  for (std::size_t i = 0; i < n; ++i) {
    v = ((v << 1) | seq[(i + m - 1) % n]) & mask;
    ++counts[v];
  }
  return counts;
}

inline double psi2(const BitSequence& seq, std::size_t m) {
  if (m == 0) return 0.0;
  double n = static_cast<double>(seq.size());
  double sum = 0;
  for (std::size_t c : pattern_counts(seq, m)) sum += static_cast<double>(c) * static_cast<double>(c);
  return std::ldexp(1.0, static_cast<int>(m)) / n * sum - n;
}

inline double phi(const BitSequence& seq, std::size_t m) {
  double n = static_cast<double>(seq.size());
  double sum = 0;
  for (std::size_t c : pattern_counts(seq, m)) {
    if (c == 0) continue;
    double f = static_cast<double>(c) / n;
    sum += f * std::log(f);
  }
  return sum;
}

}  // namespace detail

inline TestResult serial(const BitSequence& seq, std::size_t m = 2, double alpha = kDefaultAlpha) {
  detail::require(m >= 2 && m <= 24, "serial: m must be in [2, 24]");
  detail::require(seq.size() >= m, "serial: sequence shorter than m");
  double p0 = detail::psi2(seq, m), p1 = detail::psi2(seq, m - 1), p2 = detail::psi2(seq, m - 2);
  double d1 = p0 - p1, d2 = p0 - 2 * p1 + p2;
  double a1 = std::ldexp(1.0, static_cast<int>(m) - 2), a2 = std::ldexp(1.0, static_cast<int>(m) - 3);
  return detail::finish(std::string(kSerialName), {igamc(a1, d1 / 2.0), igamc(a2, d2 / 2.0)}, d1, alpha);
}

inline TestResult approximate_entropy(const BitSequence& seq, std::size_t m = 2, double alpha = kDefaultAlpha) {
  detail::require(m >= 1 && m <= 24, "approximate entropy: m must be in [1, 24]");
  detail::require(seq.size() > m, "approximate entropy: sequence too short");
  double n = static_cast<double>(seq.size());
  double apen = detail::phi(seq, m) - detail::phi(seq, m + 1);
  double chi2 = 2.0 * n * (std::log(2.0) - apen);
  return detail::finish(std::string(kApproximateEntropyName),
                        {igamc(std::ldexp(1.0, static_cast<int>(m) - 1), chi2 / 2.0)}, chi2, alpha);
}

enum class CusumMode { kForward, kBackward };

inline double cumulative_sums_p(const BitSequence& seq, CusumMode mode) {
  detail::require(seq.size() > 0, "cumulative sums: empty sequence");
  const std::size_t n = seq.size();
  long long s = 0, z = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t idx = mode == CusumMode::kForward ? i : n - 1 - i;
    s += seq[idx] ? 1 : -1;
    z = std::max(z, s < 0 ? -s : s);
  }
  const double dn = static_cast<double>(n), dz = static_cast<double>(z), rn = std::sqrt(dn);
  double a = 0, b = 0;
  for (long long k = static_cast<long long>(std::floor((-dn / dz + 1) / 4));
       k <= static_cast<long long>(std::floor((dn / dz - 1) / 4)); ++k)
    a += normal_cdf((4.0 * k + 1) * dz / rn) - normal_cdf((4.0 * k - 1) * dz / rn);
  for (long long k = static_cast<long long>(std::floor((-dn / dz - 3) / 4));
       k <= static_cast<long long>(std::floor((dn / dz - 1) / 4)); ++k)
    b += normal_cdf((4.0 * k + 3) * dz / rn) - normal_cdf((4.0 * k + 1) * dz / rn);
  return 1.0 - a + b;
}

// Both directions; pass requires both p-values at or above alpha.
inline TestResult cumulative_sums(const BitSequence& seq, double alpha = kDefaultAlpha) {
  return detail::finish(std::string(kCumulativeSumsName),
                        {cumulative_sums_p(seq, CusumMode::kForward), cumulative_sums_p(seq, CusumMode::kBackward)},
                        0.0, alpha);
}

}  // namespace pqvrf::stats
