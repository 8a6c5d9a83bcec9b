#pragma once

// Line-oriented text form of the contract transaction journal:
//   <index> <Kind> key=hex key=hex ...
// Parsing a journal back and replaying it reproduces the contract state.

#include <istream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "pqvrf/ledger.hpp"

namespace pqvrf {

namespace detail {

inline std::string hex_list(const std::array<Digest, 3>& ds) {
  return ds[0].hex() + "," + ds[1].hex() + "," + ds[2].hex();
}

struct TxFormatter {
  const Group& grp;
  std::ostringstream& os;

  void operator()(const tx::Register& t) {
    os << "Register address=" << to_hex(t.address) << " pk=" << to_hex(grp.encode(t.pk))
       << " pk_delegation=" << to_hex(grp.encode(t.pk_delegation));
  }
  void operator()(const tx::BeginCommit&) { os << "BeginCommit"; }
  void operator()(const tx::Commit& t) {
    os << "Commit address=" << to_hex(t.address) << " commitment=" << t.commitment.hex();
  }
  void operator()(const tx::BeginReveal&) { os << "BeginReveal"; }
  void operator()(const tx::Reveal& t) {
    Bytes share;
    append_be(share, t.reveal.share, 8);
    os << "Reveal address=" << to_hex(t.address) << " contribution=" << to_hex(t.reveal.contribution)
       << " share=" << to_hex(share) << " salt=" << to_hex(t.reveal.salt);
  }
  void operator()(const tx::PublishDelegation& t) {
    os << "PublishDelegation sender=" << to_hex(t.sender) << " package=" << to_hex(serialize(grp, t.package));
  }
  void operator()(const tx::DeriveSeed& t) {
    os << "DeriveSeed sender=" << to_hex(t.sender) << " blocks=" << hex_list(t.recent);
  }
  void operator()(const tx::Submit& t) {
    os << "Submit c1=" << to_hex(t.c1) << " c2=" << to_hex(t.c2) << " proof=" << to_hex(serialize(grp, t.proof));
  }
  void operator()(const tx::Revoke& t) {
    Bytes idx;
    append_be(idx, t.participant_index, 4);
    os << "Revoke caller=" << to_hex(t.caller) << " index=" << to_hex(idx) << " new_pk=" << to_hex(grp.encode(t.new_pk));
  }
  void operator()(const tx::NewRound&) { os << "NewRound"; }
  void operator()(const tx::Abort&) { os << "Abort"; }
};

template <std::size_t N>
std::array<std::uint8_t, N> fixed_bytes(std::string_view hex) {
  Bytes b = from_hex(hex);
  if (b.size() != N) throw DecodeError("field has wrong length");
  std::array<std::uint8_t, N> out;
  std::copy(b.begin(), b.end(), out.begin());
  return out;
}

}  // namespace detail

inline std::string format_journal(const Group& grp, const std::vector<Transaction>& journal) {
  std::ostringstream os;
  for (std::size_t i = 0; i < journal.size(); ++i) {
    os << i << ' ';
    std::visit(detail::TxFormatter{grp, os}, journal[i]);
    os << '\n';
  }
  return os.str();
}

inline Transaction parse_transaction(const Group& grp, const std::string& line) {
  std::istringstream is(line);
  std::string index, kind, field;
  if (!(is >> index >> kind)) throw DecodeError("journal line missing index or kind");
  std::unordered_map<std::string, std::string> f;
  while (is >> field) {
    auto eq = field.find('=');
    if (eq == std::string::npos) throw DecodeError("journal field without '='");
    f[field.substr(0, eq)] = field.substr(eq + 1);
  }
  auto get = [&](const std::string& k) -> const std::string& {
    auto it = f.find(k);
    if (it == f.end()) throw DecodeError("journal line missing field '" + k + "'");
    return it->second;
  };
  auto element = [&](const std::string& k) { return grp.decode_element(from_hex(get(k))); };

  if (kind == "Register") return tx::Register{address_from_hex(get("address")), element("pk"), element("pk_delegation")};
  if (kind == "BeginCommit") return tx::BeginCommit{};
  if (kind == "Commit") return tx::Commit{address_from_hex(get("address")), Digest::from_hex(get("commitment"))};
  if (kind == "BeginReveal") return tx::BeginReveal{};
  if (kind == "Reveal") {
    ShareReveal r{detail::fixed_bytes<32>(get("contribution")), read_be(from_hex(get("share")), 0, 8),
                  detail::fixed_bytes<32>(get("salt"))};
    return tx::Reveal{address_from_hex(get("address")), r};
  }
  if (kind == "PublishDelegation")
    return tx::PublishDelegation{address_from_hex(get("sender")), deserialize_package(grp, from_hex(get("package")))};
  if (kind == "DeriveSeed") {
    const std::string& b = get("blocks");
    if (b.size() != 64 * 3 + 2) throw DecodeError("blocks field has wrong length");
    return tx::DeriveSeed{address_from_hex(get("sender")),
                          {Digest::from_hex(b.substr(0, 64)), Digest::from_hex(b.substr(65, 64)),
                           Digest::from_hex(b.substr(130, 64))}};
  }
  if (kind == "Submit")
    return tx::Submit{from_hex(get("c1")), from_hex(get("c2")), deserialize_proof(grp, from_hex(get("proof")))};
  if (kind == "Revoke")
    return tx::Revoke{address_from_hex(get("caller")),
                      static_cast<std::uint32_t>(read_be(from_hex(get("index")), 0, 4)), element("new_pk")};
  if (kind == "NewRound") return tx::NewRound{};
  if (kind == "Abort") return tx::Abort{};
  throw DecodeError("unknown transaction kind '" + kind + "'");
}

inline std::vector<Transaction> parse_journal(const Group& grp, std::istream& in) {
  std::vector<Transaction> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(parse_transaction(grp, line));
  }
  return out;
}

}  // namespace pqvrf
