#pragma once

// Runs the eleven tests over a batch of sequences and aggregates the results
// into per-test rows: total, average p-value, pass, fail and pass percentage.

#include <atomic>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>
#include "pqvrf/stats/nist.hpp"

namespace pqvrf::stats {

struct SuiteConfig {
  double alpha = kDefaultAlpha;
  std::size_t block_frequency_M = 128;
  std::size_t template_m = 9;
  std::size_t template_blocks = 8;
  std::size_t overlapping_m = 9;
  std::size_t overlapping_M = 1032;
  std::size_t linear_complexity_M = 500;
  std::size_t serial_m = 2;
  std::size_t apen_m = 2;
  unsigned threads = 0;  // 0: hardware concurrency
};

inline const std::vector<std::string_view>& test_names() {
  static const std::vector<std::string_view> names{
      kMonobitName,        kBlockFrequencyName,     kRunsName,   kLongestRunName,
      kDftName,            kNonOverlappingName,     kOverlappingName, kLinearComplexityName,
      kSerialName,         kApproximateEntropyName, kCumulativeSumsName};
  return names;
}

// All aperiodic templates of length m. The verdict uses the proportion rule
// over templates: at most floor(k * (1 - lower)) failures, with
// lower = (1 - alpha) - 3 sqrt(alpha (1 - alpha) / k).
inline std::size_t template_failure_allowance(std::size_t k, double alpha) {
  double p = 1.0 - alpha;
  double lower = p - 3.0 * std::sqrt(p * alpha / static_cast<double>(k));
  return static_cast<std::size_t>(std::floor(static_cast<double>(k) * (1.0 - lower)));
}

inline TestResult non_overlapping_template_all(const BitSequence& seq, std::size_t m, std::size_t blocks,
                                               double alpha = kDefaultAlpha) {
  detail::require(m >= 2 && m <= 21 && blocks >= 1, "non-overlapping: bad parameters");
  const std::size_t M = seq.size() / blocks;
  detail::require(M > m, "non-overlapping: blocks shorter than the template");
  auto templates = aperiodic_templates(m);
  auto windows = detail::sliding_windows(seq, m);
  TestResult out{std::string(kNonOverlappingName), {}, false, 0};
  std::size_t failures = 0;
  std::vector<std::size_t> W(blocks);
  for (const auto& B : templates) {
    for (std::size_t j = 0; j < blocks; ++j)
      W[j] = detail::count_non_overlapping(windows, j * M, M - m + 1, detail::pattern_value(B), m);
    TestResult r = detail::non_overlapping_from_counts(W, M, m, alpha);
    failures += !r.pass;
    out.p_values.push_back(r.p_values[0]);
  }
  out.statistic = static_cast<double>(failures);
  out.pass = failures <= template_failure_allowance(templates.size(), alpha);
  return out;
}

struct SequenceOutcome {
  std::string name;
  bool skipped = false;
  std::string skip_reason;
  TestResult result;

  double mean_p() const {
    if (result.p_values.empty()) return 0.0;
    return std::accumulate(result.p_values.begin(), result.p_values.end(), 0.0) /
           static_cast<double>(result.p_values.size());
  }
};

inline std::vector<SequenceOutcome> run_tests(const BitSequence& seq, const SuiteConfig& cfg) {
  const double a = cfg.alpha;
  std::vector<std::function<TestResult()>> tests{
      [&] { return frequency_monobit(seq, a); },
      [&] { return block_frequency(seq, cfg.block_frequency_M, a); },
      [&] { return runs(seq, a); },
      [&] { return longest_run_of_ones(seq, a); },
      [&] { return dft_spectral(seq, a); },
      [&] { return non_overlapping_template_all(seq, cfg.template_m, cfg.template_blocks, a); },
      [&] { return overlapping_template(seq, cfg.overlapping_m, cfg.overlapping_M, a); },
      [&] { return linear_complexity(seq, cfg.linear_complexity_M, a); },
      [&] { return serial(seq, cfg.serial_m, a); },
      [&] { return approximate_entropy(seq, cfg.apen_m, a); },
      [&] { return cumulative_sums(seq, a); },
  };
  std::vector<SequenceOutcome> out;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    SequenceOutcome o{std::string(test_names()[i]), false, {}, {}};
    try {
      o.result = tests[i]();
    } catch (const InsufficientData& e) {
      o.skipped = true;
      o.skip_reason = e.what();
    }
    out.push_back(std::move(o));
  }
  return out;
}

struct SuiteRow {
  std::string name;
  std::size_t total = 0;
  double average_p = 0;
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t skipped = 0;

  double pass_percent() const { return total ? 100.0 * static_cast<double>(pass) / static_cast<double>(total) : 0.0; }
};

struct SuiteReport {
  double alpha = kDefaultAlpha;
  std::size_t sequences = 0;
  std::size_t bits_per_sequence = 0;
  std::vector<SuiteRow> rows;
  std::vector<std::vector<SequenceOutcome>> per_sequence;

  SuiteRow totals() const {
    SuiteRow t{"Total", 0, 0, 0, 0, 0};
    double psum = 0;
    for (const auto& r : rows) {
      t.total += r.total;
      t.pass += r.pass;
      t.fail += r.fail;
      t.skipped += r.skipped;
      psum += r.average_p * static_cast<double>(r.total);
    }
    t.average_p = t.total ? psum / static_cast<double>(t.total) : 0.0;
    return t;
  }
};

inline SuiteReport run_suite(const std::vector<BitSequence>& sequences, const SuiteConfig& cfg = {}) {
  SuiteReport rep;
  rep.alpha = cfg.alpha;
  rep.sequences = sequences.size();
  rep.bits_per_sequence = sequences.empty() ? 0 : sequences.front().size();
  rep.per_sequence.resize(sequences.size());

  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, sequences.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < sequences.size(); i = next++)
            rep.per_sequence[i] = run_tests(sequences[i], cfg);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (std::size_t t = 0; t < test_names().size(); ++t) {
    SuiteRow row{std::string(test_names()[t]), 0, 0, 0, 0, 0};
    double psum = 0;
    for (const auto& seq : rep.per_sequence) {
      const SequenceOutcome& o = seq[t];
      if (o.skipped) {
        ++row.skipped;
        continue;
      }
      ++row.total;
      psum += o.mean_p();
      (o.result.pass ? row.pass : row.fail) += 1;
    }
    row.average_p = row.total ? psum / static_cast<double>(row.total) : 0.0;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

// Cuts consecutive bytes of a stream into equal-length sequences.
inline std::vector<BitSequence> sequences_from_stream(const std::function<Bytes(std::size_t)>& next_bytes,
                                                      std::size_t count, std::size_t bits_per_sequence) {
  std::vector<BitSequence> out;
  for (std::size_t i = 0; i < count; ++i) {
    Bytes chunk = next_bytes((bits_per_sequence + 7) / 8);
    out.push_back(BitSequence::from_bytes(chunk, bits_per_sequence));
  }
  return out;
}

// Pipe-delimited table with a header line naming alpha and the geometry.
inline void write_table(std::ostream& os, const SuiteReport& rep) {
  os << "# alpha=" << rep.alpha << " sequences=" << rep.sequences << " bits_per_sequence=" << rep.bits_per_sequence
     << '\n';
  os << "Test Case Name | Total Tests | Average P-Values | Pass | Fail | Pass %\n";
  auto line = [&](const SuiteRow& r) {
    os << r.name << " | " << r.total << " | " << std::fixed << std::setprecision(6) << r.average_p << " | " << r.pass
       << " | " << r.fail << " | " << std::setprecision(2) << r.pass_percent();
    if (r.skipped) os << " | skipped=" << r.skipped;
    os << '\n' << std::defaultfloat;
  };
  for (const auto& r : rep.rows) line(r);
  line(rep.totals());
}

inline nlohmann::json to_json(const SuiteReport& rep) {
  nlohmann::json j;
  j["alpha"] = rep.alpha;
  j["sequences"] = rep.sequences;
  j["bits_per_sequence"] = rep.bits_per_sequence;
  auto row = [](const SuiteRow& r) {
    return nlohmann::json{{"Test Case Name", r.name}, {"Total Tests", r.total}, {"Average P-Values", r.average_p},
                          {"Pass", r.pass},           {"Fail", r.fail},         {"Pass %", r.pass_percent()},
                          {"Skipped", r.skipped}};
  };
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rep.rows) j["rows"].push_back(row(r));
  j["total"] = row(rep.totals());
  return j;
}

}  // namespace pqvrf::stats
