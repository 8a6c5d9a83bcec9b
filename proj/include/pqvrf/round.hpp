#pragma once

// Drives complete rounds against a simulated ledger: registration, commit,
// reveal, delegation, seed derivation, then the off-chain worker's submission.

#include <functional>

#include "pqvrf/vrf.hpp"

namespace pqvrf {

struct RoundResult {
  std::uint64_t round_id = 0;
  Digest seed;
  CiphertextBytes ciphertext;
  std::optional<VrfProof> proof;
  Receipt receipt{0, "no submission"};
  Phase phase = Phase::kRegistration;
};

struct RoundOptions {
  std::size_t delegator = 0;
  RingSigMode signature_mode = RingSigMode::kGeneralized;
  std::function<void(CiphertextBytes&, VrfProof&)> tamper;
};

class RoundDriver {
 public:
  RoundDriver(const VrfKeyMaterial& km, ContractConfig cfg, std::uint64_t chain_seed, Rng rng,
              OffchainWorker::LogSink log = {})
      : km_(km), rng_(std::move(rng)), node_(Contract(km.group, cfg), SimChain::from_seed(chain_seed)), log_(std::move(log)) {
    node_.transact([&](Contract& c, SimChain& chain) {
      for (const auto& p : km_.participants)
        c.register_participant(address_of(km_.group, p.onchain.pk), p.onchain.pk, p.delegation.pk);
      for (int i = 0; i < 3; ++i) chain.mine(0);
    });
  }

  LedgerNode& node() { return node_; }

  RoundResult run_round(const RoundOptions& opt = {}) {
    const Group& grp = km_.group;
    if (opt.delegator >= km_.participants.size()) throw Error("delegator outside the participant set");
    const ParticipantKeys& delegator = km_.participants[opt.delegator];
    Address sender = address_of(grp, delegator.onchain.pk);

    std::uint64_t round_id = node_.transact([&](Contract& c, SimChain&) {
      if (c.phase() == Phase::kRegistration) c.begin_commit();
      else c.new_round();
      return c.round_id();
    });

    std::vector<ShareReveal> reveals(km_.participants.size());
    for (auto& r : reveals) {
      rng_.fill(r.contribution);
      r.share = 1 + (rng_() >> 40);
      rng_.fill(r.salt);
    }
    DelegationPackage pkg = delegate_key(grp, delegator, static_cast<std::uint16_t>(opt.delegator),
                                         km_.offchain.pk_off, round_id, rng_);

    RoundResult res;
    res.round_id = round_id;
    res.seed = node_.transact([&](Contract& c, SimChain& chain) {
      for (std::size_t i = 0; i < reveals.size(); ++i)
        c.commit_share(address_of(grp, km_.participants[i].onchain.pk), share_commitment(reveals[i]));
      c.publish_delegation(sender, pkg);
      c.begin_reveal();
      for (std::size_t i = 0; i < reveals.size(); ++i)
        c.reveal_share(address_of(grp, km_.participants[i].onchain.pk), reveals[i]);
      chain.mine(round_id);
      return c.derive_seed(chain, sender);
    });

    WorkerConfig wc{km_.rlwe_params.name, km_.offchain, km_.rlwe_keys, {}, {}, opt.signature_mode, {}};
    wc.before_submit = [&](CiphertextBytes& ct, VrfProof& pi) {
      if (opt.tamper) opt.tamper(ct, pi);
      res.ciphertext = ct;
      res.proof = pi;
    };
    OffchainWorker worker(grp, std::move(wc), node_, log_);
    worker.poll_from(node_.contract().events().size() - 1);
    if (worker.last_result()) res.receipt = worker.last_result()->receipt;
    res.phase = node_.contract().phase();
    if (res.phase != Phase::kFinished) node_.transact([](Contract& c, SimChain&) { c.abort(); });
    return res;
  }

 private:
  const VrfKeyMaterial& km_;
  Rng rng_;
  LedgerNode node_;
  OffchainWorker::LogSink log_;
};

}  // namespace pqvrf
