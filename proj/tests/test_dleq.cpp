#include <gtest/gtest.h>

#include "pqvrf/dleq.hpp"
#include "test_util.hpp"

using namespace pqvrf;
using pqvrf::testing::group;

namespace {

long powmod(long b, long e, long m) {
  long r = 1;
  b %= m;
  while (e > 0) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

}  // namespace

// p = 23, o = 11, g1 = 2, g2 = 4, x = 5, r = 3, c = 7.
TEST(Dleq, ToyWorkedExample) {
  // direct modular arithmetic first
  const long p = 23, o = 11, x = 5, r = 3, c = 7;
  long h1 = powmod(2, x, p), h2 = powmod(4, x, p);
  long s = (r + c * x) % o;
  ASSERT_EQ(s, 5);
  long h1_inv = powmod(h1, p - 2, p);
  ASSERT_EQ(h1_inv, 18);
  long check = powmod(2, s, p) * powmod(h1_inv, c, p) % p;
  ASSERT_EQ(check, 8);
  ASSERT_EQ(check, powmod(2, r, p));

  const Group& g = group("toy23");
  DleqStatement st{GroupElement{2}, GroupElement{4}, GroupElement{h1}, GroupElement{h2}};
  auto [t1, t2] = dleq_commit(g, st, g.scalar(r));
  EXPECT_EQ(t1.value, 8);
  EXPECT_EQ(t2.value, powmod(4, r, p));
  Scalar sc = dleq_respond(g, g.scalar(r), g.scalar(c), g.scalar(x));
  EXPECT_EQ(sc.value, 5);
  EXPECT_TRUE(dleq_check(g, st, t1, t2, g.scalar(c), sc));
  EXPECT_FALSE(dleq_check(g, st, t1, t2, g.scalar(c + 1), sc));
}

class DleqGroups : public ::testing::TestWithParam<const char*> {};

TEST_P(DleqGroups, HonestProofsVerify) {
  const Group& g = group(GetParam());
  Rng rng(std::uint64_t{1});
  for (int i = 0; i < 20; ++i) {
    Scalar x = g.random_nonzero_scalar(rng);
    GroupElement g2 = g.exp_g(g.random_nonzero_scalar(rng));
    DleqStatement st{g.g(), g2, g.exp_g(x), g.exp(g2, x)};
    DleqProof pr = dleq_prove(g, x, st, as_bytes(std::string_view("ctx")), rng);
    EXPECT_TRUE(dleq_verify(g, st, pr));
    EXPECT_EQ(deserialize_dleq(g, serialize(g, pr)), pr);
  }
}

TEST_P(DleqGroups, TamperedProofsFail) {
  const Group& g = group(GetParam());
  Rng rng(std::uint64_t{2});
  Scalar x = g.random_nonzero_scalar(rng);
  DleqStatement st{g.g(), g.h(), g.exp_g(x), g.exp(g.h(), x)};
  DleqProof pr = dleq_prove(g, x, st, {}, rng);
  DleqProof t = pr;
  t.s = g.add(t.s, g.scalar(1));
  EXPECT_FALSE(dleq_verify(g, st, t));
  t = pr;
  t.t1 = g.mul(t.t1, g.g());
  EXPECT_FALSE(dleq_verify(g, st, t));
  t = pr;
  t.context = {1};
  EXPECT_FALSE(dleq_verify(g, st, t));
  t = pr;
  t.s = Scalar{pr.s.value + g.order()};
  EXPECT_FALSE(dleq_verify(g, st, t));
  DleqStatement other = st;
  other.h2 = g.mul(other.h2, g.g());
  EXPECT_FALSE(dleq_verify(g, other, pr));
}

INSTANTIATE_TEST_SUITE_P(Groups, DleqGroups, ::testing::Values("toy64", "modp2048"));

TEST(Dleq, ProverRefusesFalseStatement) {
  const Group& g = group("toy64");
  Rng rng(std::uint64_t{3});
  Scalar x = g.random_nonzero_scalar(rng), y = g.add(x, g.scalar(1));
  DleqStatement st{g.g(), g.h(), g.exp_g(x), g.exp(g.h(), y)};
  EXPECT_THROW(dleq_prove(g, x, st, {}, rng), Error);
}

TEST(Dleq, NonMemberStatementRejected) {
  const Group& g = group("toy64");
  Rng rng(std::uint64_t{4});
  Scalar x = g.random_nonzero_scalar(rng);
  DleqStatement st{g.g(), g.h(), g.exp_g(x), g.exp(g.h(), x)};
  DleqProof pr = dleq_prove(g, x, st, {}, rng);
  st.h1 = GroupElement{g.modulus() - 1};
  EXPECT_FALSE(dleq_verify(g, st, pr));
}

TEST(Dleq, DeserializeRejectsTruncation) {
  const Group& g = group("toy64");
  Rng rng(std::uint64_t{5});
  Scalar x = g.random_nonzero_scalar(rng);
  DleqStatement st{g.g(), g.h(), g.exp_g(x), g.exp(g.h(), x)};
  Bytes wire = serialize(g, dleq_prove(g, x, st, as_bytes(std::string_view("abc")), rng));
  EXPECT_THROW(deserialize_dleq(g, Bytes(wire.begin(), wire.end() - 1)), DecodeError);
  std::size_t consumed = 0;
  Bytes longer = wire;
  longer.push_back(7);
  deserialize_dleq(g, longer, &consumed);
  EXPECT_EQ(consumed, wire.size());
}
