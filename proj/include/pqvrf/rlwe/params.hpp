#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "pqvrf/bytes.hpp"

namespace pqvrf::rlwe {

inline std::uint32_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint32_t q) {
  std::uint64_t r = 1;
  base %= q;
  while (e > 0) {
    if (e & 1) r = r * base % q;
    base = base * base % q;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

inline bool is_prime(std::uint32_t q) {
  if (q < 2) return false;
  for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

struct RlweParams {
  std::string name;
  std::uint32_t n = 0;  // ring dimension, power of two
  std::uint32_t q = 0;  // prime, q = 1 mod 2n
  double sigma = 0;     // standard deviation of the error distribution
  std::uint32_t psi = 0;  // primitive 2n-th root of unity mod q
  int tail_bound = 0;
  int precision_bits = 0;

  // Smallest x with x^n = -1 (mod q); any such x has order exactly 2n.
  static std::uint32_t find_psi(std::uint32_t n, std::uint32_t q) {
    for (std::uint32_t x = 2; x < q; ++x)
      if (pow_mod(x, n, q) == q - 1) return x;
    throw Error("no primitive 2n-th root of unity mod q");
  }

  static RlweParams make(std::string name, std::uint32_t n, std::uint32_t q, double sigma, int tail_bound,
                         int precision_bits) {
    RlweParams p{std::move(name), n, q, sigma, 0, tail_bound, precision_bits};
    if (n < 2 || (n & (n - 1)) != 0) throw Error("ring dimension must be a power of two");
    if (!is_prime(q) || q % (2 * n) != 1) throw Error("q must be a prime with q = 1 mod 2n");
    p.psi = find_psi(n, q);
    p.validate();
    return p;
  }

  // "R256": n=256, q=7681; "R512": n=512, q=12289. Both sigma=4.516, tail 54, 32-bit sampler.
  static RlweParams named(std::string_view name) {
    if (name == "R256") return make("R256", 256, 7681, 4.516, 54, 32);
    if (name == "R512") return make("R512", 512, 12289, 4.516, 54, 32);
    throw Error("unknown RLWE parameter set '" + std::string(name) + "'");
  }

  void validate() const {
    if (!is_prime(q) || n == 0 || q % (2 * n) != 1) throw Error("inconsistent RLWE modulus");
    if (pow_mod(psi, 2ULL * n, q) != 1 || pow_mod(psi, n, q) != q - 1) throw Error("psi is not a primitive 2n-th root");
    // 12 sigma rounded down: the classic tail cut of 54 at sigma 4.516.
    if (tail_bound < static_cast<int>(std::floor(12 * sigma))) throw Error("tail bound below 12 sigma");
    if (precision_bits < 8 || precision_bits > 62) throw Error("sampler precision out of range");
    if (q >= (1u << 16)) throw Error("q must fit the 16-bit ciphertext encoding");
  }
};

}  // namespace pqvrf::rlwe
