#pragma once

// Entropy estimators and bit-balance statistics over VRF output.

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pqvrf/bytes.hpp"
#include "pqvrf/stats/nist.hpp"

namespace pqvrf::stats {

// Bits per byte from the byte histogram.
inline double empirical_shannon_entropy(ByteView data) {
  if (data.empty()) throw std::invalid_argument("entropy of empty input");
  std::array<std::size_t, 256> hist{};
  for (std::uint8_t b : data) ++hist[b];
  double n = static_cast<double>(data.size()), h = 0;
  for (std::size_t c : hist) {
    if (c == 0) continue;
    double f = static_cast<double>(c) / n;
    h -= f * std::log2(f);
  }
  return h;
}

// log2 of H(n, Z) = -(x log2 x) 2^256 with x = 2^(-256 n) / Z, which equals
// 2^(256 - 256 n - log2 Z) (256 n + log2 Z). Valid while 256 n + log2 Z > 0.
inline double closed_form_entropy_log2(unsigned n, double Z) {
  if (!(Z > 0)) throw std::invalid_argument("normalization must be positive");
  double lz = std::log2(Z);
  double neg_log_x = 256.0 * n + lz;
  if (!(neg_log_x > 0)) throw std::domain_error("entropy term is non-positive");
  return 256.0 - 256.0 * n - lz + std::log2(neg_log_x);
}

inline double closed_form_entropy(unsigned n, double Z) {
  if (!(Z > 0)) throw std::invalid_argument("normalization must be positive");
  double lz = std::log2(Z);
  double neg_log_x = 256.0 * n + lz;
  return std::exp2(256.0 - 256.0 * n - lz) * neg_log_x;
}

struct OnesRatio {
  std::vector<double> ratios;
  double mean = 0;
};

inline OnesRatio ones_ratio_blocks(const BitSequence& seq, std::size_t block_bits = 128) {
  if (block_bits == 0 || seq.size() < block_bits) throw InsufficientData("ones ratio: fewer bits than one block");
  OnesRatio out;
  std::size_t blocks = seq.size() / block_bits;
  double total = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    std::size_t ones = 0;
    for (std::size_t i = 0; i < block_bits; ++i) ones += seq[b * block_bits + i];
    double r = static_cast<double>(ones) / static_cast<double>(block_bits);
    out.ratios.push_back(r);
    total += r;
  }
  out.mean = total / static_cast<double>(blocks);
  return out;
}

}  // namespace pqvrf::stats
