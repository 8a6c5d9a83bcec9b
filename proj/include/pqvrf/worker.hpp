#pragma once

// Off-chain listener: waits for OnchainMpcSeedReady, encrypts the seed-derived
// message under Ring-LWE with derandomized errors, hashes the ciphertext into
// the VRF output, signs on behalf of the delegator and submits the result.

#include <chrono>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <stop_token>
#include <thread>

#include "pqvrf/delegation.hpp"
#include "pqvrf/ledger_node.hpp"
#include "pqvrf/rlwe/rlwe.hpp"

namespace pqvrf {

struct SeedExpansion {
  std::vector<std::uint8_t> message_bits;  // n bits
  KeccakBitStream error_stream;            // unbounded
};

// message: bits of keccak256(seed || "msg" || ctr); errors: keccak256(seed || sk_context || "err" || ctr).
inline SeedExpansion expand_seed(const Digest& seed, ByteView sk_context, std::uint32_t n) {
  Bytes msg_prefix(seed.bytes.begin(), seed.bytes.end());
  append(msg_prefix, std::string_view("msg"));
  KeccakBitStream msg(std::move(msg_prefix));
  std::vector<std::uint8_t> bits(n);
  for (auto& b : bits) b = msg.next_bit() ? 1 : 0;

  Bytes err_prefix(seed.bytes.begin(), seed.bytes.end());
  append(err_prefix, sk_context);
  append(err_prefix, std::string_view("err"));
  return SeedExpansion{std::move(bits), KeccakBitStream(std::move(err_prefix))};
}

// Secret context mixed into the error stream: keccak256("rlwe-sk" || r2 encoding).
inline Bytes rlwe_secret_context(const rlwe::RlweKeyPair& keys) {
  Digest d = keccak256_concat(std::string_view("rlwe-sk"),
                              ByteView(rlwe::serialize_ciphertext(rlwe::RlweCiphertext{keys.r2, keys.r2})));
  return Bytes(d.bytes.begin(), d.bytes.end());
}

struct CiphertextBytes {
  Bytes c1;
  Bytes c2;

  Digest vrf_output() const { return keccak256_concat(ByteView(c1), ByteView(c2)); }
};

class ProcessingError : public Error {
 public:
  using Error::Error;
};

inline CiphertextBytes rlwe_processing(const rlwe::RlweContext& ctx, const Digest& seed, const rlwe::RlweKeyPair& keys) {
  try {
    SeedExpansion ex = expand_seed(seed, rlwe_secret_context(keys), ctx.n());
    rlwe::RlweCiphertext ct = rlwe::rlwe_enc2(ctx, keys.a, keys.p, ex.message_bits, ex.error_stream);
    Bytes all = rlwe::serialize_ciphertext(ct);
    auto half = static_cast<std::ptrdiff_t>(all.size() / 2);
    return CiphertextBytes{Bytes(all.begin(), all.begin() + half), Bytes(all.begin() + half, all.end())};
  } catch (const Error& e) {
    throw ProcessingError(std::string("RLWE Encryption failed with error: ") + e.what());
  }
}

struct WorkerConfig {
  std::string rlwe_params = "R256";
  OffchainKeys offchain;
  rlwe::RlweKeyPair rlwe_keys;
  std::chrono::milliseconds poll_interval{50};
  std::chrono::milliseconds max_backoff{400};
  RingSigMode signature_mode = RingSigMode::kGeneralized;
  // Fault injection: may rewrite the result just before submission.
  std::function<void(CiphertextBytes&, VrfProof&)> before_submit;
};

struct HandleResult {
  bool submitted = false;
  Receipt receipt;
};

class OffchainWorker {
 public:
  using LogSink = std::function<void(const std::string&)>;

  OffchainWorker(const Group& grp, WorkerConfig cfg, LedgerNode& node, LogSink log = {})
      : grp_(grp), ctx_(rlwe::RlweContext::named(cfg.rlwe_params)), cfg_(std::move(cfg)), node_(node),
        log_(std::move(log)) {}

  std::size_t cursor() const { return cursor_; }
  std::size_t submissions() const { return submissions_; }
  const std::optional<HandleResult>& last_result() const { return last_; }

  // Not re-entrant.
  HandleResult handle_event(const LedgerEvent& ev) {
    const auto* ready = std::get_if<SeedReadyEvent>(&ev.payload);
    if (!ready) return {};
    auto start = std::chrono::steady_clock::now();
    auto delegated = select_delegation(grp_, cfg_.offchain.sk_off, ready->packages, ready->ring, ev.round_id);
    if (!delegated) {
      log(ev.round_id, "rejected", "no delegation package passed binding and key checks", start);
      return {};
    }
    CiphertextBytes ct;
    try {
      ct = rlwe_processing(ctx_, ready->seed, cfg_.rlwe_keys);
    } catch (const ProcessingError& e) {
      log(ev.round_id, "error", e.what(), start);
      return {};
    }
    const DelegationPackage& pkg = ready->packages[delegated->first];
    VrfProof pi = offchain_sign(grp_, cfg_.offchain.sk_off, pkg, ev.round_id, ready->seed, ct.vrf_output(),
                                ready->ring, cfg_.signature_mode);
    if (cfg_.before_submit) cfg_.before_submit(ct, pi);
    HandleResult out;
    try {
      out.receipt = node_.submit_rlwe_result(ct.c1, ct.c2, pi);
      out.submitted = true;
    } catch (const LedgerError& e) {
      log(ev.round_id, "rejected", e.what(), start);
      return out;
    }
    ++submissions_;
    last_ = out;
    log(ev.round_id, out.receipt.status == 1 ? "submitted" : "failed",
        out.receipt.status == 1 ? "Result and proof submitted successfully!" : "Submission failed.", start);
    return out;
  }

  // Skips events before `cursor`, then polls once.
  std::size_t poll_from(std::size_t cursor) {
    cursor_ = cursor;
    return poll_once();
  }

  // Fetches and handles every new event once; returns how many were dispatched.
  std::size_t poll_once() {
    auto evs = node_.events_since(cursor_);
    for (const auto& ev : evs) {
      handle_event(ev);
      cursor_ = ev.index + 1;
    }
    return evs.size();
  }

  // Polls until stop is requested. Feed failures back off exponentially up to max_backoff.
  void run(std::stop_token stop) {
    auto backoff = cfg_.poll_interval;
    while (!stop.stop_requested()) {
      try {
        poll_once();
        backoff = cfg_.poll_interval;
        node_.wait_for_events(cursor_, cfg_.poll_interval, stop);
      } catch (const LedgerUnavailable&) {
        log_line("listener", "retry", "backoff " + std::to_string(backoff.count()) + "ms");
        node_.wait_for_events(std::numeric_limits<std::size_t>::max(), backoff, stop);
        backoff = std::min(backoff * 2, cfg_.max_backoff);
      }
    }
  }

 private:
  void log(std::uint64_t round, std::string_view status, std::string_view message,
           std::chrono::steady_clock::time_point start) {
    auto us = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream os;
    os << "round=" << round << " status=" << status << " elapsed_us=" << us << " msg=\"" << message << '"';
    if (log_) log_(os.str());
  }
  void log_line(std::string_view phase, std::string_view status, std::string_view message) {
    std::ostringstream os;
    os << "phase=" << phase << " status=" << status << " msg=\"" << message << '"';
    if (log_) log_(os.str());
  }

  const Group& grp_;
  rlwe::RlweContext ctx_;
  WorkerConfig cfg_;
  LedgerNode& node_;
  LogSink log_;
  std::size_t cursor_ = 0;
  std::size_t submissions_ = 0;
  std::optional<HandleResult> last_;
};

}  // namespace pqvrf
