#pragma once

// Gen / Eval / Ver over the assembled subsystems, plus the key-material,
// ring and proof file formats used by the command-line tool.

#include <istream>
#include <map>
#include <sstream>

#include "pqvrf/delegation.hpp"
#include "pqvrf/ledger.hpp"
#include "pqvrf/worker.hpp"

namespace pqvrf {

struct SecurityConfig {
  std::string group = "modp2048";
  std::string rlwe = "R256";
  std::size_t participants = 5;
};

struct VrfKeyMaterial {
  Group group;
  rlwe::RlweParams rlwe_params;
  std::vector<ParticipantKeys> participants;
  rlwe::RlweKeyPair rlwe_keys;
  OffchainKeys offchain;

  // Ring of delegation public keys, participant order.
  Ring ring() const {
    std::vector<RingMember> members;
    for (const auto& p : participants) members.push_back({p.delegation.did, p.delegation.pk});
    return Ring(std::move(members));
  }
};

inline VrfKeyMaterial gen(const SecurityConfig& cfg, Rng& rng) {
  if (cfg.participants == 0) throw Error("at least one participant is required");
  if (cfg.participants > 0xffff) throw Error("too many participants");
  Group grp = Group::named(cfg.group);
  rlwe::RlweContext ctx = rlwe::RlweContext::named(cfg.rlwe);
  std::vector<ParticipantKeys> parts;
  for (std::size_t i = 0; i < cfg.participants; ++i) parts.push_back(generate_keys(grp, rng));
  rlwe::RlweKeyPair rk = rlwe::rlwe_keygen(ctx, rng);
  OffchainKeys off = generate_offchain_keys(grp, rng);
  return VrfKeyMaterial{std::move(grp), ctx.params(), std::move(parts), std::move(rk), std::move(off)};
}

struct EvalResult {
  Digest vrf_output;
  VrfProof proof;
  CiphertextBytes ciphertext;
};

// Deterministic in (seed, key material, ring, delegator).
inline EvalResult eval(const VrfKeyMaterial& km, const Digest& seed, const Ring& ring, std::size_t delegator,
                       std::uint64_t round_id = 0) {
  if (delegator >= km.participants.size() || delegator >= ring.size()) throw Error("delegator outside the ring");
  const Group& grp = km.group;
  rlwe::RlweContext ctx(km.rlwe_params);
  CiphertextBytes ct = rlwe_processing(ctx, seed, km.rlwe_keys);
  Digest out = ct.vrf_output();
  Rng pkg_rng(keccak256_concat(std::string_view("eval-delegation"), seed).view());
  DelegationPackage pkg = delegate_key(grp, km.participants[delegator], static_cast<std::uint16_t>(delegator),
                                      km.offchain.pk_off, round_id, pkg_rng);
  VrfProof pi = offchain_sign(grp, km.offchain.sk_off, pkg, round_id, seed, out, ring);
  return EvalResult{out, std::move(pi), std::move(ct)};
}

inline bool verify(const Group& grp, const VrfProof& pi, const Ring& ring) { return ring_verify(grp, pi, ring); }

// Stream of (seed, output) pairs following the on-chain seed derivation with
// random contributions per round. Signatures do not influence outputs and are
// skipped, which keeps multi-megabit statistics runs fast.
class VrfOutputStream {
 public:
  VrfOutputStream(const VrfKeyMaterial& km, Rng rng, std::uint64_t chain_seed = 0)
      : km_(km), ctx_(km.rlwe_params), rng_(std::move(rng)), chain_(SimChain::from_seed(chain_seed)) {
    for (int i = 0; i < 3; ++i) chain_.mine(0);
    sender_ = address_of(km_.group, km_.participants.at(0).onchain.pk);
  }

  std::pair<Digest, Digest> next() {
    std::vector<ShareReveal> reveals(km_.participants.size());
    for (auto& r : reveals) {
      rng_.fill(r.contribution);
      r.share = 1 + (rng_() >> 32);
      rng_.fill(r.salt);
    }
    Digest seed = encode_seed(chain_.recent(), sender_, weighted_sum(reveals));
    chain_.mine(round_++);
    return {seed, rlwe_processing(ctx_, seed, km_.rlwe_keys).vrf_output()};
  }

 private:
  const VrfKeyMaterial& km_;
  rlwe::RlweContext ctx_;
  Rng rng_;
  SimChain chain_;
  Address sender_{};
  std::uint64_t round_ = 0;
};

// ---- file formats -------------------------------------------------------

namespace detail {

inline std::map<std::string, std::string> read_armored(std::istream& in, std::string_view header) {
  std::string line;
  if (!std::getline(in, line) || line != header) throw DecodeError("expected header '" + std::string(header) + "'");
  std::map<std::string, std::string> kv;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw DecodeError("malformed line '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

inline const std::string& need(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw DecodeError("missing field '" + key + "'");
  return it->second;
}

inline Bytes encode_poly(const rlwe::NttPoly& p) {
  return rlwe::serialize_ciphertext(rlwe::RlweCiphertext{p, rlwe::NttPoly{}});
}

}  // namespace detail

inline constexpr std::string_view kKeysHeader = "pqvrf-keys v1";
inline constexpr std::string_view kRingHeader = "pqvrf-ring v1";
inline constexpr std::string_view kProofHeader = "pqvrf-proof v1";

inline std::string format_key_material(const VrfKeyMaterial& km) {
  std::ostringstream os;
  os << kKeysHeader << '\n'
     << "group=" << km.group.name() << '\n'
     << "rlwe=" << km.rlwe_params.name << '\n'
     << "participants=" << km.participants.size() << '\n';
  for (std::size_t i = 0; i < km.participants.size(); ++i) {
    os << "participant." << i << ".sk=" << to_hex(Group::encode(km.participants[i].onchain.sk)) << '\n';
    os << "participant." << i << ".sk_delegation=" << to_hex(Group::encode(km.participants[i].delegation.sk)) << '\n';
  }
  os << "offchain.sk=" << to_hex(Group::encode(km.offchain.sk_off)) << '\n'
     << "rlwe.a=" << to_hex(detail::encode_poly(km.rlwe_keys.a)) << '\n'
     << "rlwe.p=" << to_hex(detail::encode_poly(km.rlwe_keys.p)) << '\n'
     << "rlwe.r2=" << to_hex(detail::encode_poly(km.rlwe_keys.r2)) << '\n';
  return os.str();
}

inline VrfKeyMaterial parse_key_material(std::istream& in) {
  auto kv = detail::read_armored(in, kKeysHeader);
  using detail::need;
  Group grp = Group::named(need(kv, "group"));
  rlwe::RlweParams rp = rlwe::RlweParams::named(need(kv, "rlwe"));
  std::size_t n = std::stoul(need(kv, "participants"));
  auto keypair = [&](const std::string& hex) {
    Scalar sk = grp.decode_scalar(from_hex(hex));
    GroupElement pk = grp.exp_g(sk);
    return DidKeyPair{did_for(grp, pk), sk, pk};
  };
  std::vector<ParticipantKeys> parts;
  for (std::size_t i = 0; i < n; ++i) {
    std::string p = "participant." + std::to_string(i);
    parts.push_back({keypair(need(kv, p + ".sk")), keypair(need(kv, p + ".sk_delegation"))});
  }
  Scalar sk_off = grp.decode_scalar(from_hex(need(kv, "offchain.sk")));
  OffchainKeys off{sk_off, grp.exp_g(sk_off)};
  auto poly = [&](const std::string& key) { return rlwe::deserialize_poly(from_hex(need(kv, key)), rp.n, rp.q); };
  rlwe::RlweKeyPair rk{poly("rlwe.a"), poly("rlwe.p"), poly("rlwe.r2")};
  return VrfKeyMaterial{std::move(grp), std::move(rp), std::move(parts), std::move(rk), std::move(off)};
}

inline std::string format_ring(const Group& grp, const Ring& ring) {
  std::ostringstream os;
  os << kRingHeader << "\ngroup=" << grp.name() << "\nring=" << to_hex(serialize(grp, ring)) << '\n';
  return os.str();
}

inline std::pair<Group, Ring> parse_ring(std::istream& in) {
  auto kv = detail::read_armored(in, kRingHeader);
  Group grp = Group::named(detail::need(kv, "group"));
  Ring ring = deserialize_ring(grp, from_hex(detail::need(kv, "ring")));
  return {std::move(grp), std::move(ring)};
}

inline std::string format_proof(const Group& grp, const VrfProof& pi) {
  std::ostringstream os;
  os << kProofHeader << "\ngroup=" << grp.name() << "\nproof=" << to_hex(serialize(grp, pi)) << '\n';
  return os.str();
}

inline std::pair<std::string, Bytes> parse_proof_file(std::istream& in) {
  auto kv = detail::read_armored(in, kProofHeader);
  return {detail::need(kv, "group"), from_hex(detail::need(kv, "proof"))};
}

}  // namespace pqvrf
