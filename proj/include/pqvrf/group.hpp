#pragma once

// Prime-order subgroup of Z_p^* used for DID keys, ring signatures, DLEQ proofs
// and hashed ElGamal. Arithmetic is backed by GMP.

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "pqvrf/bytes.hpp"
#include "pqvrf/keccak.hpp"
#include "pqvrf/random.hpp"

namespace pqvrf {

// Integer in [0, order). Serialized as 32 bytes big-endian.
struct Scalar {
  mpz_class value;

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.value == b.value; }
};

// Member of the order-`order` subgroup, value in [1, p).
struct GroupElement {
  mpz_class value;

  friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.value == b.value; }
};

struct GroupParams {
  std::string name;
  mpz_class modulus;  // p
  mpz_class order;    // o, prime, o | p - 1
  mpz_class generator;
};

inline constexpr std::size_t kScalarBytes = 32;

namespace detail {

inline Bytes mpz_to_bytes(const mpz_class& v, std::size_t width) {
  std::size_t count = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
  if (v == 0) count = 0;
  if (count > width) throw Error("integer does not fit in " + std::to_string(width) + " bytes");
  Bytes out(width, 0);
  if (count > 0) {
    std::size_t written = 0;
    mpz_export(out.data() + (width - count), &written, 1, 1, 1, 0, v.get_mpz_t());
  }
  return out;
}

inline mpz_class bytes_to_mpz(ByteView b) {
  mpz_class v;
  if (!b.empty()) mpz_import(v.get_mpz_t(), b.size(), 1, 1, 1, 0, b.data());
  return v;
}

}  // namespace detail

class Group {
 public:
  explicit Group(GroupParams params) : params_(std::move(params)) {
    const mpz_class& p = params_.modulus;
    const mpz_class& o = params_.order;
    if (mpz_probab_prime_p(p.get_mpz_t(), 30) == 0) throw Error("group modulus is not prime");
    if (mpz_probab_prime_p(o.get_mpz_t(), 30) == 0) throw Error("group order is not prime");
    if (mpz_divisible_p(mpz_class(p - 1).get_mpz_t(), o.get_mpz_t()) == 0)
      throw Error("group order does not divide p - 1");
    if (mpz_sizeinbase(o.get_mpz_t(), 2) > 8 * kScalarBytes) throw Error("group order exceeds 256 bits");
    cofactor_ = (p - 1) / o;
    element_bytes_ = (mpz_sizeinbase(p.get_mpz_t(), 2) + 7) / 8;
    g_ = GroupElement{params_.generator};
    if (!contains(g_) || g_.value == 1) throw Error("generator is not in the order-o subgroup");
    Bytes seed = encode(g_);
    append(seed, std::string_view("dleq-h"));
    h_ = hash_to_group(seed);
  }

  // Named parameter sets: "modp2048" (2048-bit modulus, 256-bit subgroup),
  // "toy64" (64-bit safe prime) and "toy23" (p = 23, o = 11, g = 2).
  static Group named(std::string_view name) {
    if (name == "modp2048") {
      return Group(GroupParams{
          "modp2048",
          mpz_class(
              "87A8E61DB4B6663CFFBBD19C651959998CEEF608660DD0F25D2CEED4435E3B00E00DF8F1D61957D4FAF7DF45"
              "61B2AA3016C3D91134096FAA3BF4296D830E9A7C209E0C6497517ABD5A8A9D306BCF67ED91F9E6725B4758C0"
              "22E0B1EF4275BF7B6C5BFC11D45F9088B941F54EB1E59BB8BC39A0BF12307F5C4FDB70C581B23F76B63ACAE1"
              "CAA6B7902D52526735488A0EF13C6D9A51BFA4AB3AD8347796524D8EF6A167B5A41825D967E144E514056425"
              "1CCACB83E6B486F6B3CA3F7971506026C0B857F689962856DED4010ABD0BE621C3A3960A54E710C375F26375"
              "D7014103A4B54330C198AF126116D2276E11715F693877FAD7EF09CADB094AE91E1A1597",
              16),
          mpz_class("8CF83642A709A097B447997640129DA299B1A47D1EB3750BA308B0FE64F5FBD3", 16),
          mpz_class(
              "3FB32C9B73134D0B2E77506660EDBD484CA7B18F21EF205407F4793A1A0BA12510DBC15077BE463FFF4FED4A"
              "AC0BB555BE3A6C1B0C6B47B1BC3773BF7E8C6F62901228F8C28CBB18A55AE31341000A650196F931C77A57F2"
              "DDF463E5E9EC144B777DE62AAAB8A8628AC376D282D6ED3864E67982428EBC831D14348F6F2F9193B5045AF2"
              "767164E1DFC967C1FB3F2E55A4BD1BFFE83B9C80D052B985D182EA0ADB2A3B7313D3FE14C8484B1E052588B9"
              "B7D2BBD2DF016199ECD06E1557CD0915B3353BBB64E0EC377FD028370DF92B52C7891428CDC67EB6184B523D"
              "1DB246C32F63078490F00EF8D647D148D47954515E2327CFEF98C582664B4C0F6CC41659",
              16)});
    }
    if (name == "toy64") {
      return Group(GroupParams{"toy64", mpz_class("fffffffffffffa43", 16), mpz_class("7ffffffffffffd21", 16),
                               mpz_class(4)});
    }
    if (name == "toy23") return Group(GroupParams{"toy23", mpz_class(23), mpz_class(11), mpz_class(2)});
    throw Error("unknown group '" + std::string(name) + "'");
  }

  const std::string& name() const { return params_.name; }
  const mpz_class& modulus() const { return params_.modulus; }
  const mpz_class& order() const { return params_.order; }
  const GroupElement& g() const { return g_; }
  // Second base with unknown discrete log relative to g.
  const GroupElement& h() const { return h_; }
  GroupElement identity() const { return GroupElement{1}; }
  std::size_t element_bytes() const { return element_bytes_; }

  bool contains(const GroupElement& x) const {
    if (x.value < 1 || x.value >= params_.modulus) return false;
    return exp_raw(x.value, params_.order) == 1;
  }

  GroupElement exp(const GroupElement& base, const Scalar& e) const {
    return GroupElement{exp_raw(base.value, e.value)};
  }
  GroupElement exp_g(const Scalar& e) const { return exp(g_, e); }

  GroupElement mul(const GroupElement& a, const GroupElement& b) const {
    mpz_class r = a.value * b.value;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), params_.modulus.get_mpz_t());
    return GroupElement{r};
  }

  GroupElement inverse(const GroupElement& a) const {
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), a.value.get_mpz_t(), params_.modulus.get_mpz_t()) == 0)
      throw Error("element not invertible");
    return GroupElement{r};
  }

  Scalar scalar(const mpz_class& v) const {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), v.get_mpz_t(), params_.order.get_mpz_t());
    return Scalar{r};
  }
  Scalar add(const Scalar& a, const Scalar& b) const { return scalar(a.value + b.value); }
  Scalar sub(const Scalar& a, const Scalar& b) const { return scalar(a.value - b.value); }
  Scalar mul(const Scalar& a, const Scalar& b) const { return scalar(a.value * b.value); }
  Scalar neg(const Scalar& a) const { return scalar(-a.value); }

  // 64 bytes reduced mod o; bias is below 2^-250 for every supported order.
  Scalar random_scalar(Rng& rng) const { return scalar(detail::bytes_to_mpz(rng.bytes(64))); }

  // Uniform in [1, o).
  Scalar random_nonzero_scalar(Rng& rng) const {
    for (;;) {
      Scalar s = random_scalar(rng);
      if (s.value != 0) return s;
    }
  }

  Bytes encode(const GroupElement& x) const { return detail::mpz_to_bytes(x.value, element_bytes_); }

  GroupElement decode_element(ByteView b) const {
    if (b.size() != element_bytes_) throw DecodeError("group element has wrong length");
    GroupElement x{detail::bytes_to_mpz(b)};
    if (!contains(x)) throw DecodeError("decoded value is not a subgroup element");
    return x;
  }

  static Bytes encode(const Scalar& s) { return detail::mpz_to_bytes(s.value, kScalarBytes); }

  Scalar decode_scalar(ByteView b) const {
    if (b.size() != kScalarBytes) throw DecodeError("scalar must be 32 bytes");
    mpz_class v = detail::bytes_to_mpz(b);
    if (v >= params_.order) throw DecodeError("scalar is not reduced");
    return Scalar{v};
  }

  // keccak256(tag || data) read big-endian, reduced mod o.
  Scalar hash_to_scalar(std::string_view tag, ByteView data) const {
    Digest d = keccak256_concat(tag, data);
    return scalar(detail::bytes_to_mpz(d.view()));
  }

  // Expands the seed to element_bytes + 16 bytes, reduces mod p, clears the cofactor.
  GroupElement hash_to_group(ByteView seed) const {
    for (std::uint32_t attempt = 0;; ++attempt) {
      Bytes wide;
      for (std::uint32_t block = 0; wide.size() < element_bytes_ + 16; ++block) {
        Bytes ctr;
        append_be(ctr, attempt, 4);
        append_be(ctr, block, 4);
        append(wide, keccak256_concat(std::string_view("h2g"), seed, ByteView(ctr)).view());
      }
      mpz_class v = detail::bytes_to_mpz(wide);
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), params_.modulus.get_mpz_t());
      if (v == 0) continue;
      GroupElement x{exp_raw(v, cofactor_)};
      if (x.value != 1) return x;
    }
  }

 private:
  mpz_class exp_raw(const mpz_class& base, const mpz_class& e) const {
    mpz_class r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), params_.modulus.get_mpz_t());
    return r;
  }

  GroupParams params_;
  mpz_class cofactor_;
  std::size_t element_bytes_ = 0;
  GroupElement g_;
  GroupElement h_;
};

}  // namespace pqvrf
