#pragma once

// In-process simulation of the randomness contract: participant registration,
// commit-reveal seed generation, delegation hand-off, result submission and
// on-chain verification. Every transaction (accepted or not) is journaled so
// that replaying the journal on a fresh contract reproduces the state exactly.

#include <algorithm>
#include <condition_variable>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "pqvrf/delegation.hpp"
#include "pqvrf/keccak.hpp"
#include "pqvrf/ring_signature.hpp"

namespace pqvrf {

using Address = std::array<std::uint8_t, 20>;

// Low 20 bytes of keccak256(pk).
inline Address address_of(const Group& grp, const GroupElement& pk) {
  Digest d = keccak256(grp.encode(pk));
  Address a;
  std::copy(d.bytes.end() - 20, d.bytes.end(), a.begin());
  return a;
}

inline Address address_from_hex(std::string_view hex) {
  Bytes b = from_hex(hex);
  if (b.size() != 20) throw DecodeError("address must be 20 bytes");
  Address a;
  std::copy(b.begin(), b.end(), a.begin());
  return a;
}

enum class Phase { kRegistration, kCommit, kReveal, kSeedReady, kSubmitted, kFinished, kAborted };

inline std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::kRegistration: return "Registration";
    case Phase::kCommit: return "Commit";
    case Phase::kReveal: return "Reveal";
    case Phase::kSeedReady: return "SeedReady";
    case Phase::kSubmitted: return "Submitted";
    case Phase::kFinished: return "Finished";
    case Phase::kAborted: return "Aborted";
  }
  return "?";
}

class LedgerError : public Error {
 public:
  using Error::Error;
};

struct ShareReveal {
  std::array<std::uint8_t, 32> contribution{};  // C_i, 256-bit big-endian
  std::uint64_t share = 0;                       // S_i >= 1
  std::array<std::uint8_t, 32> salt{};

  friend bool operator==(const ShareReveal&, const ShareReveal&) = default;
};

// keccak256(C_i || S_i as 32 bytes BE || salt)
inline Digest share_commitment(const ShareReveal& r) {
  Bytes s;
  append_be(s, r.share, 32);
  return keccak256_concat(ByteView(r.contribution), ByteView(s), ByteView(r.salt));
}

// Sum of C_i * S_i mod 2^256 as 32 bytes big-endian.
inline std::array<std::uint8_t, 32> weighted_sum(const std::vector<ShareReveal>& reveals) {
  mpz_class sum = 0;
  for (const auto& r : reveals) sum += detail::bytes_to_mpz(r.contribution) * mpz_class(std::to_string(r.share));
  mpz_class mod = mpz_class(1) << 256;
  mpz_mod(sum.get_mpz_t(), sum.get_mpz_t(), mod.get_mpz_t());
  Bytes b = detail::mpz_to_bytes(sum, 32);
  std::array<std::uint8_t, 32> out;
  std::copy(b.begin(), b.end(), out.begin());
  return out;
}

// Append-only hash chain standing in for recent block hashes:
// h_{k+1} = keccak256(h_k || round_id || k), both as 8 bytes BE.
class SimChain {
 public:
  explicit SimChain(const Digest& genesis) { blocks_.push_back(genesis); }

  static SimChain from_seed(std::uint64_t seed) {
    Bytes b;
    append_be(b, seed, 8);
    return SimChain(keccak256_concat(std::string_view("pqvrf-genesis"), ByteView(b)));
  }

  const Digest& mine(std::uint64_t round_id) {
    Bytes tail;
    append_be(tail, round_id, 8);
    append_be(tail, blocks_.size() - 1, 8);
    blocks_.push_back(keccak256_concat(blocks_.back(), ByteView(tail)));
    return blocks_.back();
  }

  std::size_t size() const { return blocks_.size(); }
  const std::vector<Digest>& blocks() const { return blocks_; }

  // {h_k, h_{k-1}, h_{k-2}}
  std::array<Digest, 3> recent() const {
    if (blocks_.size() < 3) throw LedgerError("fewer than 3 blocks on the chain");
    auto n = blocks_.size();
    return {blocks_[n - 1], blocks_[n - 2], blocks_[n - 3]};
  }

 private:
  std::vector<Digest> blocks_;
};

// seed = keccak256(keccak256(h_k || h_{k-1} || h_{k-2}) || sender || weightedSum)
inline Digest encode_seed(const std::array<Digest, 3>& recent, const Address& sender,
                          const std::array<std::uint8_t, 32>& weighted) {
  Digest combined = keccak256_concat(recent[0], recent[1], recent[2]);
  return keccak256_concat(combined, ByteView(sender), ByteView(weighted));
}

struct SeedReadyEvent {
  Digest seed;
  Address sender;
  Ring ring;
  std::vector<DelegationPackage> packages;  // sk_enc
};

struct ComputationFinishedEvent {
  VrfProof proof;
};

struct LedgerEvent {
  std::uint64_t index = 0;
  std::uint64_t round_id = 0;
  std::variant<SeedReadyEvent, ComputationFinishedEvent> payload;

  std::string_view kind() const {
    return std::holds_alternative<SeedReadyEvent>(payload) ? "OnchainMpcSeedReady" : "ComputationFinished";
  }
};

struct Receipt {
  int status = 0;  // 1 accepted, 0 rejected
  std::string reason;
};

struct Participant {
  Address address;
  GroupElement pk;
  GroupElement pk_delegation;
};

namespace tx {
struct Register { Address address; GroupElement pk; GroupElement pk_delegation; };
struct BeginCommit {};
struct Commit { Address address; Digest commitment; };
struct BeginReveal {};
struct Reveal { Address address; ShareReveal reveal; };
struct PublishDelegation { Address sender; DelegationPackage package; };
struct DeriveSeed { Address sender; std::array<Digest, 3> recent; };
struct Submit { Bytes c1; Bytes c2; VrfProof proof; };
struct Revoke { Address caller; std::uint32_t participant_index; GroupElement new_pk; };
struct NewRound {};
struct Abort {};
}  // namespace tx

using Transaction = std::variant<tx::Register, tx::BeginCommit, tx::Commit, tx::BeginReveal, tx::Reveal,
                                 tx::PublishDelegation, tx::DeriveSeed, tx::Submit, tx::Revoke, tx::NewRound,
                                 tx::Abort>;

struct ContractConfig {
  // 0 means "all participants".
  std::size_t reveal_threshold = 0;
};

class Contract {
 public:
  Contract(Group grp, ContractConfig cfg = {}) : grp_(std::move(grp)), cfg_(cfg) {}

  const Group& group() const { return grp_; }
  std::uint64_t round_id() const { return round_id_; }
  Phase phase() const { return phase_; }
  const std::vector<Participant>& participants() const { return participants_; }
  const std::optional<Digest>& seed() const { return seed_; }
  const std::vector<LedgerEvent>& events() const { return events_; }
  const std::vector<Transaction>& journal() const { return journal_; }
  const std::set<Address>& flagged() const { return flagged_; }
  const std::vector<DelegationPackage>& delegation_packages() const { return packages_; }
  const std::map<Address, ShareReveal>& reveals() const { return reveals_; }

  // Delegation public keys in registration order.
  Ring ring() const {
    std::vector<RingMember> members;
    for (const auto& p : participants_) members.push_back({did_for(grp_, p.pk_delegation), p.pk_delegation});
    return Ring(std::move(members));
  }

  std::size_t threshold() const {
    std::size_t n = participants_.size();
    if (cfg_.reveal_threshold == 0) return n;
    return cfg_.reveal_threshold;
  }

  void register_participant(const Address& a, const GroupElement& pk, const GroupElement& pk_delegation) {
    run(tx::Register{a, pk, pk_delegation});
  }
  void begin_commit() { run(tx::BeginCommit{}); }
  void commit_share(const Address& a, const Digest& c) { run(tx::Commit{a, c}); }
  void begin_reveal() { run(tx::BeginReveal{}); }
  void reveal_share(const Address& a, const ShareReveal& r) { run(tx::Reveal{a, r}); }
  void publish_delegation(const Address& sender, const DelegationPackage& pkg) {
    run(tx::PublishDelegation{sender, pkg});
  }
  Digest derive_seed(const SimChain& chain, const Address& sender) {
    run(tx::DeriveSeed{sender, chain.recent()});
    return *seed_;
  }
  Receipt submit_rlwe_result(ByteView c1, ByteView c2, const VrfProof& pi) {
    return run(tx::Submit{Bytes(c1.begin(), c1.end()), Bytes(c2.begin(), c2.end()), pi});
  }
  void revoke_delegation(const Address& caller, std::uint32_t index, const GroupElement& new_pk) {
    run(tx::Revoke{caller, index, new_pk});
  }
  void new_round() { run(tx::NewRound{}); }
  void abort() { run(tx::Abort{}); }

  // Journals the transaction, then applies it. Rejections throw LedgerError
  // (Submit reports rejection through the receipt instead).
  Receipt run(Transaction t) {
    journal_.push_back(t);
    return std::visit([this](auto& x) { return apply(x); }, journal_.back());
  }

  static Contract replay(const Group& grp, ContractConfig cfg, const std::vector<Transaction>& journal) {
    Contract c(grp, cfg);
    for (const auto& t : journal) {
      try {
        c.run(t);
      } catch (const LedgerError&) {
      }
    }
    return c;
  }

  // key=value lines sorted by key.
  std::string snapshot() const;

 private:
  bool is_registered(const Address& a) const { return index_of(a).has_value(); }
  std::optional<std::size_t> index_of(const Address& a) const {
    for (std::size_t i = 0; i < participants_.size(); ++i)
      if (participants_[i].address == a) return i;
    return std::nullopt;
  }
  void require_phase(Phase p, std::string_view what) const {
    if (phase_ != p)
      throw LedgerError(std::string(what) + " not allowed in phase " + std::string(to_string(phase_)));
  }
  void check_threshold() const {
    std::size_t n = participants_.size();
    std::size_t t = threshold();
    std::size_t floor = std::min(n, (n + 1) / 2 + 1);
    if (t < floor || t > n) throw LedgerError("reveal threshold outside [ceil(n/2)+1, n]");
  }

  Receipt apply(const tx::Register& t) {
    require_phase(Phase::kRegistration, "registration");
    if (is_registered(t.address)) throw LedgerError("address already registered");
    if (!grp_.contains(t.pk) || !grp_.contains(t.pk_delegation)) throw LedgerError("public key not in group");
    for (const auto& p : participants_)
      if (p.pk_delegation == t.pk_delegation) throw LedgerError("delegation key already registered");
    participants_.push_back({t.address, t.pk, t.pk_delegation});
    return {1, "ok"};
  }
  Receipt apply(const tx::BeginCommit&) {
    require_phase(Phase::kRegistration, "begin_commit");
    if (participants_.empty()) throw LedgerError("no participants registered");
    check_threshold();
    phase_ = Phase::kCommit;
    return {1, "ok"};
  }
  Receipt apply(const tx::Commit& t) {
    require_phase(Phase::kCommit, "commit");
    if (!is_registered(t.address)) throw LedgerError("commit from unregistered address");
    if (commitments_.contains(t.address)) throw LedgerError("double commit");
    commitments_[t.address] = t.commitment;
    return {1, "ok"};
  }
  Receipt apply(const tx::BeginReveal&) {
    require_phase(Phase::kCommit, "begin_reveal");
    if (commitments_.size() < threshold()) throw LedgerError("not enough commitments");
    phase_ = Phase::kReveal;
    return {1, "ok"};
  }
  Receipt apply(const tx::Reveal& t) {
    require_phase(Phase::kReveal, "reveal");
    auto it = commitments_.find(t.address);
    if (it == commitments_.end()) throw LedgerError("reveal without commitment");
    if (reveals_.contains(t.address)) throw LedgerError("already revealed");
    if (t.reveal.share == 0) throw LedgerError("share must be positive");
    if (share_commitment(t.reveal) != it->second) {
      flagged_.insert(t.address);
      throw LedgerError("reveal does not match commitment");
    }
    reveals_[t.address] = t.reveal;
    return {1, "ok"};
  }
  Receipt apply(const tx::PublishDelegation& t) {
    if (phase_ != Phase::kCommit && phase_ != Phase::kReveal)
      throw LedgerError("delegation not allowed in phase " + std::string(to_string(phase_)));
    auto idx = index_of(t.sender);
    if (!idx || *idx != t.package.delegator_index) throw LedgerError("delegation must come from its delegator");
    packages_.push_back(t.package);
    return {1, "ok"};
  }
  Receipt apply(const tx::DeriveSeed& t) {
    require_phase(Phase::kReveal, "derive_seed");
    if (!is_registered(t.sender)) throw LedgerError("seed request from unregistered address");
    if (reveals_.size() < threshold()) throw LedgerError("not enough reveals");
    if (packages_.empty()) throw LedgerError("no delegation package published");
    std::vector<ShareReveal> rs;
    for (const auto& [a, r] : reveals_) rs.push_back(r);
    seed_ = encode_seed(t.recent, t.sender, weighted_sum(rs));
    seed_sender_ = t.sender;
    phase_ = Phase::kSeedReady;
    emit(SeedReadyEvent{*seed_, t.sender, ring(), packages_});
    return {1, "ok"};
  }
  Receipt apply(const tx::Submit& t) {
    require_phase(Phase::kSeedReady, "submit");
    if (keccak256_concat(ByteView(t.c1), ByteView(t.c2)) != t.proof.vrf_output)
      return {0, "vrf_output does not match keccak256(c1 || c2)"};
    if (t.proof.seed != *seed_) return {0, "proof seed does not match the round seed"};
    if (auto v = ring_verify_detailed(grp_, t.proof, ring()); !v) return {0, "ring signature: " + std::string(v.reason)};
    phase_ = Phase::kSubmitted;
    result_ = t.proof;
    result_cipher_ = keccak256_concat(ByteView(t.c1), ByteView(t.c2));
    emit(ComputationFinishedEvent{t.proof});
    phase_ = Phase::kFinished;
    return {1, "ok"};
  }
  Receipt apply(const tx::Revoke& t) {
    if (phase_ == Phase::kSeedReady || phase_ == Phase::kSubmitted)
      throw LedgerError("cannot revoke while a round result is pending");
    if (t.participant_index >= participants_.size()) throw LedgerError("unknown participant");
    Participant& p = participants_[t.participant_index];
    if (p.address != t.caller) throw LedgerError("only the participant may revoke its delegation key");
    if (!grp_.contains(t.new_pk)) throw LedgerError("public key not in group");
    for (const auto& q : participants_)
      if (q.pk_delegation == t.new_pk) throw LedgerError("delegation key already registered");
    p.pk_delegation = t.new_pk;
    return {1, "ok"};
  }
  Receipt apply(const tx::NewRound&) {
    if (phase_ != Phase::kFinished && phase_ != Phase::kAborted)
      throw LedgerError("new round requires a finished or aborted round");
    ++round_id_;
    phase_ = Phase::kCommit;
    commitments_.clear();
    reveals_.clear();
    flagged_.clear();
    packages_.clear();
    seed_.reset();
    seed_sender_.reset();
    result_.reset();
    result_cipher_.reset();
    return {1, "ok"};
  }
  Receipt apply(const tx::Abort&) {
    if (phase_ == Phase::kFinished) throw LedgerError("round already finished");
    phase_ = Phase::kAborted;
    return {1, "ok"};
  }

  template <typename Payload>
  void emit(Payload p) {
    events_.push_back(LedgerEvent{events_.size(), round_id_, std::move(p)});
  }

  Group grp_;
  ContractConfig cfg_;
  std::uint64_t round_id_ = 0;
  Phase phase_ = Phase::kRegistration;
  std::vector<Participant> participants_;
  std::map<Address, Digest> commitments_;
  std::map<Address, ShareReveal> reveals_;
  std::set<Address> flagged_;
  std::vector<DelegationPackage> packages_;
  std::optional<Digest> seed_;
  std::optional<Address> seed_sender_;
  std::optional<VrfProof> result_;
  std::optional<Digest> result_cipher_;
  std::vector<LedgerEvent> events_;
  std::vector<Transaction> journal_;
};

// One line per event: index, kind, round, then hex payload fields.
inline std::string format_event(const Group& grp, const LedgerEvent& ev) {
  std::ostringstream os;
  os << ev.index << ' ' << ev.kind() << " round=" << ev.round_id;
  if (const auto* s = std::get_if<SeedReadyEvent>(&ev.payload)) {
    os << " seed=" << s->seed.hex() << " sender=" << to_hex(s->sender) << " ring=" << to_hex(serialize(grp, s->ring))
       << " sk_enc=";
    for (std::size_t i = 0; i < s->packages.size(); ++i)
      os << (i ? "," : "") << to_hex(serialize(grp, s->packages[i]));
  } else {
    os << " proof=" << to_hex(serialize(grp, std::get<ComputationFinishedEvent>(ev.payload).proof));
  }
  return os.str();
}

inline std::string Contract::snapshot() const {
  std::map<std::string, std::string> kv;
  auto idx = [](std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%06zu", i);
    return std::string(buf);
  };
  kv["group"] = grp_.name();
  kv["round_id"] = std::to_string(round_id_);
  kv["phase"] = to_string(phase_);
  kv["threshold"] = std::to_string(threshold());
  for (std::size_t i = 0; i < participants_.size(); ++i) {
    const auto& p = participants_[i];
    kv["participant." + idx(i) + ".address"] = to_hex(p.address);
    kv["participant." + idx(i) + ".pk"] = to_hex(grp_.encode(p.pk));
    kv["participant." + idx(i) + ".pk_delegation"] = to_hex(grp_.encode(p.pk_delegation));
  }
  for (const auto& [a, c] : commitments_) kv["commitment." + to_hex(a)] = c.hex();
  for (const auto& [a, r] : reveals_) {
    kv["reveal." + to_hex(a) + ".contribution"] = to_hex(r.contribution);
    kv["reveal." + to_hex(a) + ".share"] = std::to_string(r.share);
    kv["reveal." + to_hex(a) + ".salt"] = to_hex(r.salt);
  }
  for (const auto& a : flagged_) kv["flagged." + to_hex(a)] = "1";
  for (std::size_t i = 0; i < packages_.size(); ++i) kv["delegation." + idx(i)] = to_hex(serialize(grp_, packages_[i]));
  if (seed_) kv["seed"] = seed_->hex();
  if (seed_sender_) kv["seed_sender"] = to_hex(*seed_sender_);
  if (result_) kv["result.proof"] = to_hex(serialize(grp_, *result_));
  if (result_cipher_) kv["result.vrf_output"] = result_cipher_->hex();
  for (const auto& ev : events_) kv["event." + idx(ev.index)] = format_event(grp_, ev);
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

}  // namespace pqvrf
