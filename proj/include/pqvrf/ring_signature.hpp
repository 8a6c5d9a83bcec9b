#pragma once

// DID ring signature binding (vrf_output, seed) to an ordered ring of public keys.
//
// Generalized mode hides the signer slot: the commitment g^t sits at the
// signer's own index and every slot is recomputed the same way by the verifier.
// Literal mode keeps the signer in slot 0 and carries T = g^t in the signature.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "pqvrf/group.hpp"
#include "pqvrf/keccak.hpp"

namespace pqvrf {

struct DidKeyPair {
  std::string did;
  Scalar sk;
  GroupElement pk;
};

inline std::string did_for(const Group& grp, const GroupElement& pk) {
  Digest d = keccak256(grp.encode(pk));
  return "did:pqvrf:" + to_hex(ByteView(d.bytes).first(20));
}

inline DidKeyPair make_did_keypair(const Group& grp, Rng& rng) {
  Scalar sk = grp.random_nonzero_scalar(rng);
  GroupElement pk = grp.exp_g(sk);
  return DidKeyPair{did_for(grp, pk), sk, pk};
}

struct RingMember {
  std::string did;
  GroupElement pk;
};

class Ring {
 public:
  Ring() = default;
  explicit Ring(std::vector<RingMember> members) : members_(std::move(members)) {
    for (std::size_t i = 0; i < members_.size(); ++i)
      for (std::size_t j = i + 1; j < members_.size(); ++j)
        if (members_[i].pk == members_[j].pk) throw Error("ring contains a duplicate public key");
  }

  const std::vector<RingMember>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const RingMember& operator[](std::size_t i) const { return members_.at(i); }

  std::optional<std::size_t> index_of(const GroupElement& pk) const {
    auto it = std::find_if(members_.begin(), members_.end(), [&](const RingMember& m) { return m.pk == pk; });
    if (it == members_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - members_.begin());
  }

 private:
  std::vector<RingMember> members_;
};

enum class RingSigMode : std::uint8_t { kGeneralized = 0, kLiteral = 1 };

struct RingSig {
  RingSigMode mode = RingSigMode::kGeneralized;
  std::vector<Scalar> challenges;
  std::vector<Scalar> responses;
  std::optional<GroupElement> commitment;  // T, literal mode only

  friend bool operator==(const RingSig&, const RingSig&) = default;
};

// The object handed back on-chain: (vrf_output, seed, sigma).
struct VrfProof {
  Digest vrf_output;
  Digest seed;
  RingSig sigma;

  friend bool operator==(const VrfProof&, const VrfProof&) = default;
};

inline constexpr std::string_view kRingSigTag = "ringsig-v1";

inline Scalar challenge_hash(const Group& grp, const Digest& vrf_output, const Digest& seed,
                             const std::vector<GroupElement>& commitments) {
  Bytes data;
  append(data, vrf_output.view());
  append(data, seed.view());
  for (const auto& a : commitments) append(data, grp.encode(a));
  return grp.hash_to_scalar(kRingSigTag, data);
}

class RingSignError : public Error {
 public:
  using Error::Error;
};

inline RingSig ring_sign(const Group& grp, const Scalar& sk_signer, std::size_t signer_index, const Digest& seed,
                         const Digest& vrf_output, const Ring& ring, Rng& rng,
                         RingSigMode mode = RingSigMode::kGeneralized) {
  const std::size_t n = ring.size();
  if (signer_index >= n) throw RingSignError("signer index outside the ring");
  if (!(ring[signer_index].pk == grp.exp_g(sk_signer))) throw RingSignError("signer public key is not in the ring");
  if (mode == RingSigMode::kLiteral && signer_index != 0) throw RingSignError("literal mode signs from slot 0 only");

  RingSig sig;
  sig.mode = mode;
  sig.challenges.resize(n);
  sig.responses.resize(n);
  std::vector<GroupElement> commitments(n);

  Scalar t = grp.random_nonzero_scalar(rng);
  commitments[signer_index] = grp.exp_g(t);
  Scalar others = grp.scalar(0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == signer_index) continue;
    sig.challenges[i] = grp.random_scalar(rng);
    sig.responses[i] = grp.random_scalar(rng);
    commitments[i] = grp.mul(grp.exp_g(sig.responses[i]), grp.exp(ring[i].pk, sig.challenges[i]));
    others = grp.add(others, sig.challenges[i]);
  }
  if (mode == RingSigMode::kLiteral) sig.commitment = commitments[0];

  Scalar c = challenge_hash(grp, vrf_output, seed, commitments);
  sig.challenges[signer_index] = grp.sub(c, others);
  sig.responses[signer_index] = grp.sub(t, grp.mul(sk_signer, sig.challenges[signer_index]));
  return sig;
}

struct VerifyOutcome {
  bool valid = false;
  std::string_view reason;

  explicit operator bool() const { return valid; }
};

inline VerifyOutcome ring_verify_detailed(const Group& grp, const VrfProof& pi, const Ring& ring) {
  const RingSig& sig = pi.sigma;
  const std::size_t n = ring.size();
  if (n == 0) return {false, "empty ring"};
  if (sig.challenges.size() != n || sig.responses.size() != n) return {false, "length mismatch"};
  if ((sig.mode == RingSigMode::kLiteral) != sig.commitment.has_value()) return {false, "mode/commitment mismatch"};
  for (std::size_t i = 0; i < n; ++i)
    if (sig.challenges[i].value >= grp.order() || sig.responses[i].value >= grp.order() ||
        sig.challenges[i].value < 0 || sig.responses[i].value < 0)
      return {false, "unreduced scalar"};

  std::vector<GroupElement> commitments(n);
  Scalar sum = grp.scalar(0);
  for (std::size_t i = 0; i < n; ++i) {
    commitments[i] = grp.mul(grp.exp_g(sig.responses[i]), grp.exp(ring[i].pk, sig.challenges[i]));
    sum = grp.add(sum, sig.challenges[i]);
  }
  // Slot 0 must reopen to the published T, otherwise T would be unbound.
  if (sig.mode == RingSigMode::kLiteral && !(commitments[0] == *sig.commitment)) return {false, "T does not reopen"};

  Scalar c = challenge_hash(grp, pi.vrf_output, pi.seed, commitments);
  if (!(c == sum)) return {false, "challenge sum mismatch"};
  return {true, "ok"};
}

inline bool ring_verify(const Group& grp, const VrfProof& pi, const Ring& ring) {
  return ring_verify_detailed(grp, pi, ring).valid;
}

inline constexpr std::uint8_t kRingSigVersion = 1;

// version | mode | n (2 bytes BE) | c_1..c_n | s_1..s_n | [T]
inline Bytes serialize(const Group& grp, const RingSig& sig) {
  Bytes out{kRingSigVersion, static_cast<std::uint8_t>(sig.mode)};
  append_be(out, sig.challenges.size(), 2);
  for (const auto& c : sig.challenges) append(out, Group::encode(c));
  for (const auto& s : sig.responses) append(out, Group::encode(s));
  if (sig.mode == RingSigMode::kLiteral) append(out, grp.encode(*sig.commitment));
  return out;
}

inline RingSig deserialize_ringsig(const Group& grp, ByteView in, std::size_t* consumed = nullptr) {
  if (in.size() < 4) throw DecodeError("ring signature truncated");
  if (in[0] != kRingSigVersion) throw DecodeError("unsupported ring signature version");
  if (in[1] > 1) throw DecodeError("unknown ring signature mode");
  RingSig sig;
  sig.mode = static_cast<RingSigMode>(in[1]);
  std::size_t n = read_be(in, 2, 2);
  std::size_t need = 4 + 2 * n * kScalarBytes + (sig.mode == RingSigMode::kLiteral ? grp.element_bytes() : 0);
  if (in.size() < need || (consumed == nullptr && in.size() != need))
    throw DecodeError("ring signature has wrong length");
  std::size_t off = 4;
  for (std::size_t i = 0; i < n; ++i, off += kScalarBytes)
    sig.challenges.push_back(grp.decode_scalar(in.subspan(off, kScalarBytes)));
  for (std::size_t i = 0; i < n; ++i, off += kScalarBytes)
    sig.responses.push_back(grp.decode_scalar(in.subspan(off, kScalarBytes)));
  if (sig.mode == RingSigMode::kLiteral) {
    sig.commitment = grp.decode_element(in.subspan(off, grp.element_bytes()));
    off += grp.element_bytes();
  }
  if (consumed) *consumed = off;
  return sig;
}

}  // namespace pqvrf

namespace pqvrf {

inline constexpr std::uint8_t kProofVersion = 1;

// version | vrf_output (32) | seed (32) | sigma
inline Bytes serialize(const Group& grp, const VrfProof& pi) {
  Bytes sigma = serialize(grp, pi.sigma);
  Bytes out(1 + 2 * 32 + sigma.size());
  out[0] = kProofVersion;
  std::copy(pi.vrf_output.bytes.begin(), pi.vrf_output.bytes.end(), out.begin() + 1);
  std::copy(pi.seed.bytes.begin(), pi.seed.bytes.end(), out.begin() + 33);
  std::copy(sigma.begin(), sigma.end(), out.begin() + 65);
  return out;
}

inline VrfProof deserialize_proof(const Group& grp, ByteView in) {
  if (in.size() < 65) throw DecodeError("proof truncated");
  if (in[0] != kProofVersion) throw DecodeError("unsupported proof version");
  VrfProof pi;
  std::copy(in.begin() + 1, in.begin() + 33, pi.vrf_output.bytes.begin());
  std::copy(in.begin() + 33, in.begin() + 65, pi.seed.bytes.begin());
  pi.sigma = deserialize_ringsig(grp, in.subspan(65));
  return pi;
}

// n (2 bytes BE) | pk_1 .. pk_n; DIDs are recomputed from the keys.
inline Bytes serialize(const Group& grp, const Ring& ring) {
  Bytes out;
  append_be(out, ring.size(), 2);
  for (const auto& m : ring.members()) append(out, grp.encode(m.pk));
  return out;
}

inline Ring deserialize_ring(const Group& grp, ByteView in) {
  if (in.size() < 2) throw DecodeError("ring truncated");
  std::size_t n = read_be(in, 0, 2);
  if (in.size() != 2 + n * grp.element_bytes()) throw DecodeError("ring has wrong length");
  std::vector<RingMember> members;
  for (std::size_t i = 0; i < n; ++i) {
    GroupElement pk = grp.decode_element(in.subspan(2 + i * grp.element_bytes(), grp.element_bytes()));
    members.push_back({did_for(grp, pk), pk});
  }
  return Ring(std::move(members));
}

}  // namespace pqvrf
