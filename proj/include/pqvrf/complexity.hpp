#pragma once

// Asymptotic cost model of one VRF evaluation: hashing k, participants n,
// polynomial work M log2 M, multi-exponentiation n log p and one
// exponentiation log p.

#include <array>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string_view>

namespace pqvrf {

struct ComplexityReport {
  static constexpr std::array<std::string_view, 5> kLabels{"hashing", "participants", "polynomial",
                                                           "multi-exponentiation", "exponentiation"};
  double k = 0, n = 0, M = 0, log_p = 0;
  std::array<double, 5> raw{};
  std::array<double, 5> log2{};

  double total() const { return n + 2 * k + M * std::log2(M) + (n + 1) * log_p; }
};

inline ComplexityReport complexity(double k, double n, double M, double log_p) {
  if (!(k > 0 && n > 0 && M > 0 && log_p > 0)) throw std::invalid_argument("complexity inputs must be positive");
  ComplexityReport r;
  r.k = k;
  r.n = n;
  r.M = M;
  r.log_p = log_p;
  r.raw = {k, n, M * std::log2(M), n * log_p, log_p};
  for (std::size_t i = 0; i < r.raw.size(); ++i) r.log2[i] = std::log2(r.raw[i]);
  return r;
}

inline void write_complexity(std::ostream& os, const ComplexityReport& r) {
  os << "component | raw | log2\n";
  for (std::size_t i = 0; i < r.raw.size(); ++i)
    os << ComplexityReport::kLabels[i] << " | " << r.raw[i] << " | " << r.log2[i] << '\n';
  os << "total | " << r.total() << " | " << std::log2(r.total()) << '\n';
}

}  // namespace pqvrf
