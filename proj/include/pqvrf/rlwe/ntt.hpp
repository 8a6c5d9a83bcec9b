#pragma once

// Negacyclic number-theoretic transform over Z_q[x]/(x^n + 1).

#include <cstdint>
#include <vector>

#include "pqvrf/rlwe/params.hpp"

namespace pqvrf::rlwe {

// Coefficient-domain polynomial.
struct RingPoly {
  std::vector<std::uint32_t> coeffs;
  friend bool operator==(const RingPoly&, const RingPoly&) = default;
};

// Evaluation-domain polynomial, natural index order. Distinct type so the two
// domains cannot be mixed in arithmetic.
struct NttPoly {
  std::vector<std::uint32_t> coeffs;
  friend bool operator==(const NttPoly&, const NttPoly&) = default;
};

class Ntt {
 public:
  explicit Ntt(const RlweParams& params) : n_(params.n), q_(params.q) {
    std::uint32_t psi_inv = pow_mod(params.psi, q_ - 2, q_);
    std::uint32_t omega = pow_mod(params.psi, 2, q_);
    std::uint32_t omega_inv = pow_mod(omega, q_ - 2, q_);
    n_inv_ = pow_mod(n_, q_ - 2, q_);
    twist_.resize(n_);
    untwist_.resize(n_);
    for (std::uint32_t i = 0; i < n_; ++i) {
      twist_[i] = pow_mod(params.psi, i, q_);
      untwist_[i] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(pow_mod(psi_inv, i, q_)) * n_inv_ % q_);
    }
    roots_.resize(n_ / 2);
    inv_roots_.resize(n_ / 2);
    for (std::uint32_t i = 0; i < n_ / 2; ++i) {
      roots_[i] = pow_mod(omega, i, q_);
      inv_roots_[i] = pow_mod(omega_inv, i, q_);
    }
    bitrev_.resize(n_);
    int log_n = 0;
    while ((1u << log_n) < n_) ++log_n;
    for (std::uint32_t i = 0; i < n_; ++i) {
      std::uint32_t r = 0;
      for (int b = 0; b < log_n; ++b) r |= ((i >> b) & 1u) << (log_n - 1 - b);
      bitrev_[i] = r;
    }
  }

  std::uint32_t n() const { return n_; }
  std::uint32_t q() const { return q_; }

  // Twist coefficient i by psi^i, then a length-n cyclic transform with omega = psi^2.
  NttPoly forward(const RingPoly& x) const {
    check(x.coeffs);
    std::vector<std::uint32_t> v(n_);
    for (std::uint32_t i = 0; i < n_; ++i) v[i] = mulq(x.coeffs[i], twist_[i]);
    cyclic(v, roots_);
    return NttPoly{std::move(v)};
  }

  RingPoly inverse(const NttPoly& x) const {
    check(x.coeffs);
    std::vector<std::uint32_t> v = x.coeffs;
    cyclic(v, inv_roots_);
    for (std::uint32_t i = 0; i < n_; ++i) v[i] = mulq(v[i], untwist_[i]);
    return RingPoly{std::move(v)};
  }

  // The butterflies below leave their output in bit-reversed order; this puts it back.
  void rearrange(std::vector<std::uint32_t>& v) const {
    for (std::uint32_t i = 0; i < n_; ++i)
      if (i < bitrev_[i]) std::swap(v[i], v[bitrev_[i]]);
  }

  NttPoly add(const NttPoly& a, const NttPoly& b) const {
    check(a.coeffs);
    check(b.coeffs);
    NttPoly r{std::vector<std::uint32_t>(n_)};
    for (std::uint32_t i = 0; i < n_; ++i) r.coeffs[i] = (a.coeffs[i] + b.coeffs[i]) % q_;
    return r;
  }
  NttPoly sub(const NttPoly& a, const NttPoly& b) const {
    check(a.coeffs);
    check(b.coeffs);
    NttPoly r{std::vector<std::uint32_t>(n_)};
    for (std::uint32_t i = 0; i < n_; ++i) r.coeffs[i] = (a.coeffs[i] + q_ - b.coeffs[i]) % q_;
    return r;
  }
  NttPoly mul(const NttPoly& a, const NttPoly& b) const {
    check(a.coeffs);
    check(b.coeffs);
    NttPoly r{std::vector<std::uint32_t>(n_)};
    for (std::uint32_t i = 0; i < n_; ++i) r.coeffs[i] = mulq(a.coeffs[i], b.coeffs[i]);
    return r;
  }

 private:
  std::uint32_t mulq(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % q_);
  }

  void check(const std::vector<std::uint32_t>& c) const {
    if (c.size() != n_) throw Error("polynomial has wrong length");
    for (auto v : c)
      if (v >= q_) throw Error("polynomial coefficient not reduced mod q");
  }

  // Gentleman-Sande decimation in frequency, natural in, bit-reversed out.
  void cyclic(std::vector<std::uint32_t>& v, const std::vector<std::uint32_t>& roots) const {
    for (std::uint32_t len = n_; len >= 2; len >>= 1) {
      std::uint32_t half = len / 2;
      std::uint32_t step = n_ / len;
      for (std::uint32_t start = 0; start < n_; start += len) {
        for (std::uint32_t j = 0; j < half; ++j) {
          std::uint32_t u = v[start + j];
          std::uint32_t w = v[start + j + half];
          v[start + j] = (u + w) % q_;
          v[start + j + half] = mulq((u + q_ - w) % q_, roots[j * step]);
        }
      }
    }
    rearrange(v);
  }

  std::uint32_t n_;
  std::uint32_t q_;
  std::uint32_t n_inv_ = 0;
  std::vector<std::uint32_t> twist_, untwist_, roots_, inv_roots_, bitrev_;
};

}  // namespace pqvrf::rlwe
