#pragma once

// Thread-safe front for a Contract: one serialized transaction queue for
// writers, and an event feed that readers poll with a cursor.

#include <chrono>
#include <condition_variable>
#include <mutex>
#include <stop_token>

#include "pqvrf/ledger.hpp"

namespace pqvrf {

// Transient failure of the event feed; pollers retry.
class LedgerUnavailable : public Error {
 public:
  LedgerUnavailable() : Error("ledger temporarily unavailable") {}
};

class LedgerNode {
 public:
  LedgerNode(Contract contract, SimChain chain) : contract_(std::move(contract)), chain_(std::move(chain)) {}

  // Runs `f(contract, chain)` under the writer lock and wakes pollers.
  template <typename F>
  decltype(auto) transact(F&& f) {
    struct Notify {
      std::condition_variable_any& cv;
      ~Notify() { cv.notify_all(); }
    } notify{cv_};
    std::lock_guard lock(mu_);
    return std::forward<F>(f)(contract_, chain_);
  }

  // Events with index >= cursor.
  std::vector<LedgerEvent> events_since(std::size_t cursor) {
    std::lock_guard lock(mu_);
    if (fail_polls_ > 0) {
      --fail_polls_;
      throw LedgerUnavailable();
    }
    const auto& evs = contract_.events();
    if (cursor >= evs.size()) return {};
    return {evs.begin() + static_cast<std::ptrdiff_t>(cursor), evs.end()};
  }

  // Blocks until an event past `cursor` exists, the timeout passes, or stop is requested.
  void wait_for_events(std::size_t cursor, std::chrono::milliseconds timeout, std::stop_token stop) {
    std::unique_lock lock(mu_);
    cv_.wait_for(lock, stop, timeout, [&] { return contract_.events().size() > cursor; });
  }

  Receipt submit_rlwe_result(ByteView c1, ByteView c2, const VrfProof& pi) {
    return transact([&](Contract& c, SimChain&) { return c.submit_rlwe_result(c1, c2, pi); });
  }

  // Snapshot copy for readers.
  Contract contract() const {
    std::lock_guard lock(mu_);
    return contract_;
  }

  void inject_poll_failures(int count) {
    std::lock_guard lock(mu_);
    fail_polls_ = count;
  }

 private:
  mutable std::mutex mu_;
  std::condition_variable_any cv_;
  Contract contract_;
  SimChain chain_;
  int fail_polls_ = 0;
};

}  // namespace pqvrf
