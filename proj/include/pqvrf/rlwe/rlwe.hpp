#pragma once

// Ring-LWE public-key encryption: key generation, the RLWE_enc2 encryption
// routine, a decryption oracle and the ciphertext wire format.

#include <cstdint>
#include <span>
#include <vector>

#include "pqvrf/random.hpp"
#include "pqvrf/rlwe/knuth_yao.hpp"
#include "pqvrf/rlwe/ntt.hpp"
#include "pqvrf/rlwe/params.hpp"

namespace pqvrf::rlwe {

struct RlweKeyPair {
  NttPoly a;   // uniform public polynomial
  NttPoly p;   // r1 - a * r2
  NttPoly r2;  // secret

  friend bool operator==(const RlweKeyPair&, const RlweKeyPair&) = default;
};

struct RlweCiphertext {
  NttPoly c1;
  NttPoly c2;

  friend bool operator==(const RlweCiphertext&, const RlweCiphertext&) = default;
};

// Bundles a parameter set with its transform tables and sampler.
class RlweContext {
 public:
  explicit RlweContext(RlweParams params) : params_(std::move(params)), ntt_(params_), sampler_(params_) {
    params_.validate();
  }

  static RlweContext named(std::string_view name) { return RlweContext(RlweParams::named(name)); }

  const RlweParams& params() const { return params_; }
  const Ntt& ntt() const { return ntt_; }
  const KnuthYaoSampler& sampler() const { return sampler_; }
  std::uint32_t n() const { return params_.n; }
  std::uint32_t q() const { return params_.q; }

  template <BitSource Bits>
  RingPoly sample_error(Bits& bits) const {
    RingPoly e{std::vector<std::uint32_t>(params_.n)};
    for (auto& c : e.coeffs) {
      int v = sampler_.sample(bits);
      c = static_cast<std::uint32_t>(v < 0 ? static_cast<int>(params_.q) + v : v);
    }
    return e;
  }

  NttPoly uniform_ntt(Rng& rng) const {
    NttPoly a{std::vector<std::uint32_t>(params_.n)};
    for (auto& c : a.coeffs) {
      std::uint32_t v;
      do {
        v = static_cast<std::uint32_t>(rng() & 0xffffu);
      } while (v >= params_.q);
      c = v;
    }
    return a;
  }

 private:
  RlweParams params_;
  Ntt ntt_;
  KnuthYaoSampler sampler_;
};

// p = fwd(r1) - a * fwd(r2).
inline RlweKeyPair rlwe_keypair_from(const RlweContext& ctx, NttPoly a, const RingPoly& r1, const RingPoly& r2) {
  const Ntt& ntt = ctx.ntt();
  NttPoly r2_hat = ntt.forward(r2);
  NttPoly p = ntt.sub(ntt.forward(r1), ntt.mul(a, r2_hat));
  return RlweKeyPair{std::move(a), std::move(p), std::move(r2_hat)};
}

inline RlweKeyPair rlwe_keygen(const RlweContext& ctx, Rng& rng) {
  NttPoly a = ctx.uniform_ntt(rng);
  RingPoly r1 = ctx.sample_error(rng);
  RingPoly r2 = ctx.sample_error(rng);
  return rlwe_keypair_from(ctx, std::move(a), r1, r2);
}

// Coefficient i = bits[i] * floor(q / 2).
inline RingPoly encode_message(const RlweContext& ctx, std::span<const std::uint8_t> bits) {
  if (bits.size() != ctx.n()) throw Error("message must have exactly n bits");
  RingPoly m{std::vector<std::uint32_t>(ctx.n())};
  for (std::size_t i = 0; i < bits.size(); ++i) m.coeffs[i] = bits[i] ? ctx.q() / 2 : 0;
  return m;
}

// Errors e1, e2, e3 are drawn in that order from `error_bits`. Output polynomials
// are in natural coefficient order.
template <BitSource Bits>
RlweCiphertext rlwe_enc2(const RlweContext& ctx, const NttPoly& a, const NttPoly& p,
                         std::span<const std::uint8_t> m_bits, Bits& error_bits) {
  const Ntt& ntt = ctx.ntt();
  RingPoly encoded = encode_message(ctx, m_bits);
  RingPoly e1 = ctx.sample_error(error_bits);
  RingPoly e2 = ctx.sample_error(error_bits);
  RingPoly e3 = ctx.sample_error(error_bits);
  for (std::uint32_t i = 0; i < ctx.n(); ++i) e3.coeffs[i] = (e3.coeffs[i] + encoded.coeffs[i]) % ctx.q();
  NttPoly e1_hat = ntt.forward(e1);
  NttPoly e2_hat = ntt.forward(e2);
  NttPoly e3_hat = ntt.forward(e3);
  return RlweCiphertext{ntt.add(e2_hat, ntt.mul(a, e1_hat)), ntt.add(e3_hat, ntt.mul(p, e1_hat))};
}

// m' = inv(c2 + c1 * r2); bit i is set iff m'[i] lies in (q/4, 3q/4).
inline std::vector<std::uint8_t> rlwe_decrypt(const RlweContext& ctx, const NttPoly& r2, const RlweCiphertext& ct) {
  const Ntt& ntt = ctx.ntt();
  RingPoly m = ntt.inverse(ntt.add(ct.c2, ntt.mul(ct.c1, r2)));
  std::vector<std::uint8_t> bits(ctx.n());
  const double q = ctx.q();
  for (std::uint32_t i = 0; i < ctx.n(); ++i) {
    double v = m.coeffs[i];
    bits[i] = (v > q / 4 && v < 3 * q / 4) ? 1 : 0;
  }
  return bits;
}

// Little-endian 16-bit coefficients, c1 then c2; 4n bytes in total.
inline Bytes serialize_ciphertext(const RlweCiphertext& ct) {
  Bytes out;
  out.reserve(2 * (ct.c1.coeffs.size() + ct.c2.coeffs.size()));
  for (const NttPoly* poly : {&ct.c1, &ct.c2}) {
    for (std::uint32_t c : poly->coeffs) {
      if (c >= (1u << 16)) throw Error("coefficient does not fit 16 bits");
      out.push_back(static_cast<std::uint8_t>(c & 0xff));
      out.push_back(static_cast<std::uint8_t>(c >> 8));
    }
  }
  return out;
}

inline NttPoly deserialize_poly(ByteView in, std::uint32_t n, std::uint32_t q) {
  if (in.size() != 2ull * n) throw DecodeError("polynomial encoding has wrong length");
  NttPoly p{std::vector<std::uint32_t>(n)};
  for (std::uint32_t i = 0; i < n; ++i) {
    p.coeffs[i] = in[2 * i] | (static_cast<std::uint32_t>(in[2 * i + 1]) << 8);
    if (p.coeffs[i] >= q) throw DecodeError("coefficient not reduced mod q");
  }
  return p;
}

inline RlweCiphertext deserialize_ciphertext(const RlweContext& ctx, ByteView in) {
  if (in.size() != 4ull * ctx.n()) throw DecodeError("ciphertext encoding has wrong length");
  std::size_t half = 2ull * ctx.n();
  return RlweCiphertext{deserialize_poly(in.first(half), ctx.n(), ctx.q()),
                        deserialize_poly(in.subspan(half), ctx.n(), ctx.q())};
}

}  // namespace pqvrf::rlwe
