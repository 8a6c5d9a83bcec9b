#pragma once

// Delegated key generation: each participant holds an on-chain key pair and an
// independent delegation key pair. The delegation secret is handed to the
// off-chain worker under hashed ElGamal together with a DLEQ proof that ties
// the ciphertext's owner to the committed delegation public key:
//   pk' = g^sk'  and  k = h^sk'  for the published companion value k.

#include <optional>
#include <vector>

#include "pqvrf/dleq.hpp"
#include "pqvrf/pke.hpp"
#include "pqvrf/ring_signature.hpp"

namespace pqvrf {

struct ParticipantKeys {
  DidKeyPair onchain;
  DidKeyPair delegation;
};

struct OffchainKeys {
  Scalar sk_off;
  GroupElement pk_off;
};

struct DelegationPackage {
  std::uint16_t delegator_index = 0;
  PkeCiphertext encrypted_key;
  GroupElement companion;  // h^sk'
  DleqProof binding_proof;

  friend bool operator==(const DelegationPackage&, const DelegationPackage&) = default;
};

class DelegationError : public Error {
 public:
  using Error::Error;
};

inline ParticipantKeys generate_keys(const Group& grp, Rng& rng) {
  ParticipantKeys keys{make_did_keypair(grp, rng), make_did_keypair(grp, rng)};
  while (keys.delegation.sk == keys.onchain.sk) keys.delegation = make_did_keypair(grp, rng);
  return keys;
}

inline OffchainKeys generate_offchain_keys(const Group& grp, Rng& rng) {
  Scalar sk = grp.random_nonzero_scalar(rng);
  return OffchainKeys{sk, grp.exp_g(sk)};
}

// Round id as 8 bytes big-endian; scopes binding proofs to one round.
inline Bytes round_context(std::uint64_t round_id) {
  Bytes ctx;
  append(ctx, std::string_view("delegation-round"));
  append_be(ctx, round_id, 8);
  return ctx;
}

inline DleqStatement binding_statement(const Group& grp, const GroupElement& committed_pk, const GroupElement& companion) {
  return DleqStatement{grp.g(), grp.h(), committed_pk, companion};
}

inline DelegationPackage delegate_key(const Group& grp, const ParticipantKeys& keys, std::uint16_t delegator_index,
                                      const GroupElement& pk_off, std::uint64_t round_id, Rng& rng) {
  const Scalar& sk = keys.delegation.sk;
  GroupElement companion = grp.exp(grp.h(), sk);
  DleqProof proof = dleq_prove(grp, sk, binding_statement(grp, keys.delegation.pk, companion), round_context(round_id), rng);
  return DelegationPackage{delegator_index, pke_encrypt(grp, pk_off, sk, rng), companion, std::move(proof)};
}

// The proof must be for this round and for the key committed at `committed_pk`.
inline bool verify_binding(const Group& grp, const DelegationPackage& pkg, const GroupElement& committed_pk,
                           std::uint64_t round_id) {
  if (pkg.binding_proof.context != round_context(round_id)) return false;
  return dleq_verify(grp, binding_statement(grp, committed_pk, pkg.companion), pkg.binding_proof);
}

// Signing nonces are derived from the secret and the message so that a given
// (key, seed, output, ring) always yields the same signature.
inline Rng signing_rng(const Group& grp, const Scalar& sk, const Digest& seed, const Digest& vrf_output,
                       const Ring& ring) {
  Keccak256 h;
  h.update(std::string_view("ringsig-nonce"));
  h.update(Group::encode(sk));
  h.update(seed);
  h.update(vrf_output);
  for (const auto& m : ring.members()) h.update(grp.encode(m.pk));
  Digest d = h.finish();
  return Rng(d.view());
}

// Recovers sk' after checking the binding proof; throws DelegationError on any
// inconsistency and never returns a key that does not match the ring entry.
inline Scalar open_delegation(const Group& grp, const Scalar& sk_off, const DelegationPackage& pkg, const Ring& ring,
                              std::uint64_t round_id) {
  if (pkg.delegator_index >= ring.size()) throw DelegationError("delegator index outside the ring");
  const GroupElement& committed = ring[pkg.delegator_index].pk;
  if (!verify_binding(grp, pkg, committed, round_id)) throw DelegationError("binding proof does not verify");
  Scalar sk = pke_decrypt(grp, sk_off, pkg.encrypted_key);
  if (!(grp.exp_g(sk) == committed)) throw DelegationError("decrypted key does not match the committed public key");
  return sk;
}

inline VrfProof offchain_sign(const Group& grp, const Scalar& sk_off, const DelegationPackage& pkg,
                              std::uint64_t round_id, const Digest& seed, const Digest& vrf_output, const Ring& ring,
                              RingSigMode mode = RingSigMode::kGeneralized) {
  Scalar sk = open_delegation(grp, sk_off, pkg, ring, round_id);
  Rng nonces = signing_rng(grp, sk, seed, vrf_output, ring);
  return VrfProof{vrf_output, seed, ring_sign(grp, sk, pkg.delegator_index, seed, vrf_output, ring, nonces, mode)};
}

// First package whose proof and key check pass, as its index and secret.
inline std::optional<std::pair<std::size_t, Scalar>> select_delegation(const Group& grp, const Scalar& sk_off,
                                                                       const std::vector<DelegationPackage>& pkgs,
                                                                       const Ring& ring, std::uint64_t round_id) {
  for (std::size_t i = 0; i < pkgs.size(); ++i) {
    try {
      return std::pair{i, open_delegation(grp, sk_off, pkgs[i], ring, round_id)};
    } catch (const DelegationError&) {
    }
  }
  return std::nullopt;
}

// index (2 bytes BE) | pke ciphertext | companion | DLEQ proof
inline Bytes serialize(const Group& grp, const DelegationPackage& pkg) {
  Bytes out;
  append_be(out, pkg.delegator_index, 2);
  append(out, serialize(grp, pkg.encrypted_key));
  append(out, grp.encode(pkg.companion));
  append(out, serialize(grp, pkg.binding_proof));
  return out;
}

inline DelegationPackage deserialize_package(const Group& grp, ByteView in) {
  const std::size_t eb = grp.element_bytes();
  std::size_t head = 2 + eb + 32 + eb;
  if (in.size() < head) throw DecodeError("delegation package truncated");
  DelegationPackage pkg;
  pkg.delegator_index = static_cast<std::uint16_t>(read_be(in, 0, 2));
  pkg.encrypted_key = deserialize_pke(grp, in.subspan(2, eb + 32));
  pkg.companion = grp.decode_element(in.subspan(2 + eb + 32, eb));
  pkg.binding_proof = deserialize_dleq(grp, in.subspan(head));
  return pkg;
}

}  // namespace pqvrf
