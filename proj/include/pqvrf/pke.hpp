#pragma once

// Hashed ElGamal for handing a scalar to the holder of a group key.

#include <array>

#include "pqvrf/group.hpp"

namespace pqvrf {

struct PkeCiphertext {
  GroupElement ephemeral;               // g^r
  std::array<std::uint8_t, 32> masked;  // encode(m) xor keccak256("pke" || pk^r)

  friend bool operator==(const PkeCiphertext&, const PkeCiphertext&) = default;
};

namespace detail {
inline Digest pke_mask(const Group& grp, const GroupElement& shared) {
  return keccak256_concat(std::string_view("pke"), ByteView(grp.encode(shared)));
}
}  // namespace detail

inline PkeCiphertext pke_encrypt(const Group& grp, const GroupElement& pk_receiver, const Scalar& m, Rng& rng) {
  Scalar r = grp.random_nonzero_scalar(rng);
  Digest mask = detail::pke_mask(grp, grp.exp(pk_receiver, r));
  Bytes plain = Group::encode(m);
  PkeCiphertext ct{grp.exp_g(r), {}};
  for (std::size_t i = 0; i < 32; ++i) ct.masked[i] = plain[i] ^ mask.bytes[i];
  return ct;
}

// A wrong key yields an unrelated scalar; callers check it against a public key.
inline Scalar pke_decrypt(const Group& grp, const Scalar& sk_receiver, const PkeCiphertext& ct) {
  Digest mask = detail::pke_mask(grp, grp.exp(ct.ephemeral, sk_receiver));
  Bytes plain(32);
  for (std::size_t i = 0; i < 32; ++i) plain[i] = ct.masked[i] ^ mask.bytes[i];
  return grp.scalar(detail::bytes_to_mpz(plain));
}

inline Bytes serialize(const Group& grp, const PkeCiphertext& ct) {
  Bytes out = grp.encode(ct.ephemeral);
  append(out, ct.masked);
  return out;
}

inline PkeCiphertext deserialize_pke(const Group& grp, ByteView in) {
  if (in.size() != grp.element_bytes() + 32) throw DecodeError("pke ciphertext has wrong length");
  PkeCiphertext ct{grp.decode_element(in.first(grp.element_bytes())), {}};
  std::copy(in.begin() + static_cast<std::ptrdiff_t>(grp.element_bytes()), in.end(), ct.masked.begin());
  return ct;
}

}  // namespace pqvrf
