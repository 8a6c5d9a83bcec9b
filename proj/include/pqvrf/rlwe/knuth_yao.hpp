#pragma once

// Knuth-Yao discrete Gaussian sampler driven by a discrete distribution
// generating (DDG) tree walk over the binary expansion of the pmf.
//
// The table holds the one-sided magnitude pmf with the mass at zero halved.
// A sign bit follows each magnitude and (-0) is rejected, which gives an exactly
// symmetric distribution proportional to exp(-k^2 / (2 sigma^2)) on
// [-tail_bound, tail_bound].

#include <cmath>
#include <cstdint>
#include <vector>

#include "pqvrf/random.hpp"
#include "pqvrf/rlwe/params.hpp"

namespace pqvrf::rlwe {

class KnuthYaoSampler {
 public:
  KnuthYaoSampler(double sigma, int tail_bound, int precision_bits)
      : sigma_(sigma), rows_(tail_bound + 1), cols_(precision_bits) {
    std::vector<long double> weight(rows_);
    long double total = 0;
    for (int k = 0; k < rows_; ++k) {
      weight[k] = std::exp(-static_cast<long double>(k) * k / (2.0L * sigma * sigma));
      if (k == 0) weight[k] /= 2;
      total += weight[k];
    }
    matrix_.assign(cols_, std::vector<std::uint8_t>(rows_, 0));
    column_weight_.assign(cols_, 0);
    const long double scale = std::ldexp(1.0L, cols_);
    for (int k = 0; k < rows_; ++k) {
      auto fixed = static_cast<std::uint64_t>(std::floor(weight[k] / total * scale));
      for (int c = 0; c < cols_; ++c) {
        std::uint8_t bit = (fixed >> (cols_ - 1 - c)) & 1u;
        matrix_[c][k] = bit;
        column_weight_[c] += bit;
      }
    }
  }

  explicit KnuthYaoSampler(const RlweParams& p) : KnuthYaoSampler(p.sigma, p.tail_bound, p.precision_bits) {}

  int tail_bound() const { return rows_ - 1; }
  int precision_bits() const { return cols_; }
  double sigma() const { return sigma_; }

  // matrix()[column][row]: bit `column` (MSB first) of the magnitude probability of `row`.
  const std::vector<std::vector<std::uint8_t>>& matrix() const { return matrix_; }

  template <BitSource Bits>
  int sample(Bits& bits) const {
    for (;;) {
      int row = walk(bits);
      if (row < 0) continue;  // fell off the truncated tree
      // P(0) is halved in the table, so both signs of 0 are accepted.
      bool negative = bits.next_bit();
      return negative ? -row : row;
    }
  }

 private:
  template <BitSource Bits>
  int walk(Bits& bits) const {
    std::int64_t d = 0;
    for (int c = 0; c < cols_; ++c) {
      d = 2 * d + (bits.next_bit() ? 1 : 0);
      if (d >= column_weight_[c]) {
        d -= column_weight_[c];
        continue;
      }
      for (int row = rows_ - 1; row >= 0; --row) {
        d -= matrix_[c][row];
        if (d == -1) return row;
      }
    }
    return -1;
  }

  double sigma_;
  int rows_;
  int cols_;
  std::vector<std::vector<std::uint8_t>> matrix_;
  std::vector<std::int64_t> column_weight_;
};

}  // namespace pqvrf::rlwe
