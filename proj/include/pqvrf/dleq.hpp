#pragma once

// Chaum-Pedersen proof that log_{g1} h1 = log_{g2} h2, made non-interactive
// with a Fiat-Shamir challenge over the commitments, the full statement and a
// caller-chosen context string.

#include "pqvrf/group.hpp"

namespace pqvrf {

struct DleqStatement {
  GroupElement g1, g2;  // bases
  GroupElement h1, h2;  // claimed powers
};

struct DleqProof {
  GroupElement t1, t2;
  Scalar s;
  Bytes context;

  friend bool operator==(const DleqProof&, const DleqProof&) = default;
};

inline constexpr std::string_view kDleqTag = "dleq-v1";

inline Bytes serialize(const Group& grp, const DleqStatement& st) {
  Bytes out;
  for (const auto* x : {&st.g1, &st.g2, &st.h1, &st.h2}) append(out, grp.encode(*x));
  return out;
}

inline Scalar fiat_shamir_challenge(const Group& grp, const GroupElement& t1, const GroupElement& t2,
                                    const DleqStatement& st, ByteView context) {
  Bytes data = grp.encode(t1);
  append(data, grp.encode(t2));
  append(data, serialize(grp, st));
  append(data, context);
  return grp.hash_to_scalar(kDleqTag, data);
}

// Interactive building blocks; the non-interactive prover composes them.
inline std::pair<GroupElement, GroupElement> dleq_commit(const Group& grp, const DleqStatement& st, const Scalar& r) {
  return {grp.exp(st.g1, r), grp.exp(st.g2, r)};
}

// s = r + c * x mod o
inline Scalar dleq_respond(const Group& grp, const Scalar& r, const Scalar& c, const Scalar& x) {
  return grp.add(r, grp.mul(c, x));
}

// t1 = g1^s * h1^-c and t2 = g2^s * h2^-c
inline bool dleq_check(const Group& grp, const DleqStatement& st, const GroupElement& t1, const GroupElement& t2,
                       const Scalar& c, const Scalar& s) {
  Scalar minus_c = grp.neg(c);
  return grp.mul(grp.exp(st.g1, s), grp.exp(st.h1, minus_c)) == t1 &&
         grp.mul(grp.exp(st.g2, s), grp.exp(st.h2, minus_c)) == t2;
}

inline DleqProof dleq_prove(const Group& grp, const Scalar& x, const DleqStatement& st, ByteView context, Rng& rng) {
  if (!(grp.exp(st.g1, x) == st.h1) || !(grp.exp(st.g2, x) == st.h2))
    throw Error("witness does not satisfy the DLEQ statement");
  Scalar r = grp.random_nonzero_scalar(rng);
  auto [t1, t2] = dleq_commit(grp, st, r);
  Scalar c = fiat_shamir_challenge(grp, t1, t2, st, context);
  return DleqProof{t1, t2, dleq_respond(grp, r, c, x), Bytes(context.begin(), context.end())};
}

inline bool dleq_verify(const Group& grp, const DleqStatement& st, const DleqProof& proof) {
  // t1 and t2 need no membership test: the relations below force them into the subgroup.
  for (const auto* x : {&st.g1, &st.g2, &st.h1, &st.h2})
    if (!grp.contains(*x)) return false;
  if (proof.s.value < 0 || proof.s.value >= grp.order()) return false;
  Scalar c = fiat_shamir_challenge(grp, proof.t1, proof.t2, st, proof.context);
  return dleq_check(grp, st, proof.t1, proof.t2, c, proof.s);
}

// t1 | t2 | s (32 bytes) | context length (4 bytes BE) | context
inline Bytes serialize(const Group& grp, const DleqProof& p) {
  Bytes out = grp.encode(p.t1);
  append(out, grp.encode(p.t2));
  append(out, Group::encode(p.s));
  append_be(out, p.context.size(), 4);
  append(out, p.context);
  return out;
}

inline DleqProof deserialize_dleq(const Group& grp, ByteView in, std::size_t* consumed = nullptr) {
  const std::size_t eb = grp.element_bytes();
  std::size_t fixed = 2 * eb + kScalarBytes + 4;
  if (in.size() < fixed) throw DecodeError("DLEQ proof truncated");
  std::size_t ctx_len = read_be(in, 2 * eb + kScalarBytes, 4);
  if (in.size() < fixed + ctx_len || (consumed == nullptr && in.size() != fixed + ctx_len))
    throw DecodeError("DLEQ proof has wrong length");
  DleqProof p{grp.decode_element(in.subspan(0, eb)), grp.decode_element(in.subspan(eb, eb)),
              grp.decode_scalar(in.subspan(2 * eb, kScalarBytes)),
              Bytes(in.begin() + static_cast<std::ptrdiff_t>(fixed),
                    in.begin() + static_cast<std::ptrdiff_t>(fixed + ctx_len))};
  if (consumed) *consumed = fixed + ctx_len;
  return p;
}

}  // namespace pqvrf
