#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "pqvrf/rlwe/rlwe.hpp"
#include "pqvrf/stats/special.hpp"

using namespace pqvrf;
using namespace pqvrf::rlwe;

namespace {

// Schoolbook product in Z_q[x]/(x^n + 1).
RingPoly negacyclic(const RingPoly& a, const RingPoly& b, std::uint32_t q) {
  const std::size_t n = a.coeffs.size();
  std::vector<std::int64_t> acc(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::int64_t prod = static_cast<std::int64_t>(a.coeffs[i]) * b.coeffs[j] % q;
      if (i + j < n) acc[i + j] += prod;
      else acc[i + j - n] -= prod;
    }
  RingPoly out{std::vector<std::uint32_t>(n)};
  for (std::size_t i = 0; i < n; ++i) out.coeffs[i] = static_cast<std::uint32_t>(((acc[i] % q) + q) % q);
  return out;
}

RingPoly random_poly(const RlweContext& ctx, Rng& rng) {
  RingPoly p{std::vector<std::uint32_t>(ctx.n())};
  for (auto& c : p.coeffs) c = static_cast<std::uint32_t>(rng() % ctx.q());
  return p;
}

std::vector<std::uint8_t> random_bits(std::size_t n, Rng& rng) {
  std::vector<std::uint8_t> m(n);
  for (auto& b : m) b = rng.next_bit();
  return m;
}

}  // namespace

TEST(RlweParams, NamedSets) {
  RlweParams p = RlweParams::named("R256");
  EXPECT_EQ(p.n, 256u);
  EXPECT_EQ(p.q, 7681u);
  EXPECT_EQ(pow_mod(p.psi, 256, p.q), p.q - 1);
  EXPECT_EQ(pow_mod(p.psi, 512, p.q), 1u);
  EXPECT_EQ(RlweParams::named("R512").q, 12289u);
  EXPECT_THROW(RlweParams::named("R1024"), Error);
}

TEST(RlweParams, RejectsInconsistentModulus) {
  EXPECT_THROW(RlweParams::make("x", 256, 7683, 4.516, 54, 32), Error);   // not prime
  EXPECT_THROW(RlweParams::make("x", 256, 7691, 4.516, 54, 32), Error);   // prime, q != 1 mod 2n
  EXPECT_THROW(RlweParams::make("x", 100, 7681, 4.516, 54, 32), Error);   // n not a power of two
  EXPECT_THROW(RlweParams::make("x", 256, 7681, 4.516, 40, 32), Error);   // tail too short
  EXPECT_NO_THROW(RlweParams::make("small", 8, 17, 1.0, 12, 16));
}

TEST(Ntt, ZeroAndImpulse) {
  RlweContext ctx = RlweContext::named("R256");
  RingPoly zero{std::vector<std::uint32_t>(256, 0)};
  EXPECT_EQ(ctx.ntt().forward(zero).coeffs, zero.coeffs);
  RingPoly delta = zero;
  delta.coeffs[0] = 1;
  EXPECT_EQ(ctx.ntt().forward(delta).coeffs, std::vector<std::uint32_t>(256, 1));
}

TEST(Ntt, InverseRoundTrip) {
  RlweContext ctx = RlweContext::named("R256");
  Rng rng(std::uint64_t{1});
  for (int i = 0; i < 1000; ++i) {
    RingPoly x = random_poly(ctx, rng);
    ASSERT_EQ(ctx.ntt().inverse(ctx.ntt().forward(x)).coeffs, x.coeffs);
  }
}

TEST(Ntt, PointwiseProductIsNegacyclic) {
  for (const char* name : {"R256", "R512"}) {
    RlweContext ctx = RlweContext::named(name);
    Rng rng(std::uint64_t{2});
    for (int i = 0; i < 20; ++i) {
      RingPoly a = random_poly(ctx, rng), b = random_poly(ctx, rng);
      RingPoly got = ctx.ntt().inverse(ctx.ntt().mul(ctx.ntt().forward(a), ctx.ntt().forward(b)));
      ASSERT_EQ(got.coeffs, negacyclic(a, b, ctx.q()).coeffs) << name;
    }
  }
}

TEST(Ntt, XToTheNIsMinusOne) {
  RlweContext ctx = RlweContext::named("R256");
  RingPoly x{std::vector<std::uint32_t>(256, 0)}, x255 = x;
  x.coeffs[1] = 1;
  x255.coeffs[255] = 1;
  RingPoly prod = ctx.ntt().inverse(ctx.ntt().mul(ctx.ntt().forward(x), ctx.ntt().forward(x255)));
  std::vector<std::uint32_t> expect(256, 0);
  expect[0] = ctx.q() - 1;
  EXPECT_EQ(prod.coeffs, expect);
}

TEST(Ntt, RejectsUnreducedInput) {
  RlweContext ctx = RlweContext::named("R256");
  RingPoly bad{std::vector<std::uint32_t>(256, 0)};
  bad.coeffs[3] = ctx.q();
  EXPECT_THROW(ctx.ntt().forward(bad), Error);
  EXPECT_THROW(ctx.ntt().forward(RingPoly{std::vector<std::uint32_t>(255, 0)}), Error);
}

// Row r of the one-sided table holds P(|X| = r): 1 / Z for r = 0 and 2 w_r / Z
// otherwise, with w_r = exp(-r^2 / 2 sigma^2) and Z the two-sided normalizer.
TEST(KnuthYao, ColumnsReconstructPmf) {
  KnuthYaoSampler s(RlweParams::named("R256"));
  const double sigma = s.sigma();
  double z = 0;
  for (int k = -54; k <= 54; ++k) z += std::exp(-k * k / (2 * sigma * sigma));
  const double ulp = std::ldexp(1.0, -s.precision_bits());
  double sum = 0;
  for (int row = 0; row <= s.tail_bound(); ++row) {
    double value = 0;
    for (int c = 0; c < s.precision_bits(); ++c) value += s.matrix()[c][row] * std::ldexp(1.0, -(c + 1));
    double expect = (row == 0 ? 1.0 : 2.0) * std::exp(-row * row / (2 * sigma * sigma)) / z;
    EXPECT_LE(expect - value, ulp + 1e-15) << "row " << row;
    EXPECT_GE(expect - value, -1e-15) << "row " << row;
    sum += value;
  }
  EXPECT_NEAR(sum, 1.0, 55 * ulp);
}

TEST(KnuthYao, DeterministicForBitStream) {
  KnuthYaoSampler s(RlweParams::named("R256"));
  KeccakBitStream a(Bytes{7}), b(Bytes{7});
  for (int i = 0; i < 200; ++i) EXPECT_EQ(s.sample(a), s.sample(b));
}

TEST(KnuthYao, StaysWithinTail) {
  KnuthYaoSampler s(RlweParams::named("R256"));
  Rng rng(std::uint64_t{5});
  for (int i = 0; i < 20000; ++i) {
    int v = s.sample(rng);
    ASSERT_LE(std::abs(v), 54);
  }
}

TEST(KnuthYao, ChiSquareAgainstDiscreteGaussian) {
  KnuthYaoSampler s(RlweParams::named("R256"));
  Rng rng(std::uint64_t{6});
  const int N = 200000;
  std::map<int, long> hist;
  double sum = 0;
  for (int i = 0; i < N; ++i) {
    int v = s.sample(rng);
    ++hist[v];
    sum += v;
  }
  const double sigma = s.sigma();
  double z = 0;
  for (int k = -54; k <= 54; ++k) z += std::exp(-k * k / (2 * sigma * sigma));
  // |k| >= 14 pooled per side to keep expected counts above 5
  double chi2 = 0;
  int bins = 0;
  auto add = [&](double expected, double observed) {
    chi2 += (observed - expected) * (observed - expected) / expected;
    ++bins;
  };
  double tail_e = 0, tail_o = 0;
  for (int k = -54; k <= 54; ++k) {
    double e = N * std::exp(-k * k / (2 * sigma * sigma)) / z;
    if (std::abs(k) >= 14) {
      tail_e += e;
      tail_o += hist[k];
    } else {
      add(e, hist[k]);
    }
  }
  add(tail_e, tail_o);
  double p = stats::igamc((bins - 1) / 2.0, chi2 / 2.0);
  EXPECT_GT(p, 0.001) << "chi2=" << chi2;
  EXPECT_LT(std::fabs(sum / N), 0.05);
}

TEST(Rlwe, KeypairRelation) {
  RlweContext ctx = RlweContext::named("R256");
  Rng rng(std::uint64_t{8});
  NttPoly a = ctx.uniform_ntt(rng);
  RingPoly r1 = ctx.sample_error(rng), r2 = ctx.sample_error(rng);
  RlweKeyPair kp = rlwe_keypair_from(ctx, a, r1, r2);
  // p + a * r2 = r1 in the transform domain
  EXPECT_EQ(ctx.ntt().inverse(ctx.ntt().add(kp.p, ctx.ntt().mul(kp.a, kp.r2))).coeffs, r1.coeffs);
}

TEST(Rlwe, DecryptionFailureRateWithinNoiseBand) {
  // Decryption noise e1 r1 + e2 r2 + e3 has standard deviation near 462 against a
  // q/4 = 1920 threshold, so a small per-message failure rate is inherent.
  RlweContext ctx = RlweContext::named("R256");
  Rng rng(std::uint64_t{9});
  RlweKeyPair kp = rlwe_keygen(ctx, rng);
  int failures = 0;
  const int trials = 400;
  for (int i = 0; i < trials; ++i) {
    auto m = random_bits(256, rng);
    RlweCiphertext ct = rlwe_enc2(ctx, kp.a, kp.p, m, rng);
    failures += rlwe_decrypt(ctx, kp.r2, ct) != m;
  }
  EXPECT_LT(failures, trials * 3 / 100);
}

TEST(Rlwe, NoiselessKeysDecryptExactly) {
  // With r1 = r2 = 0 the decryption noise is e3 alone, bounded by the tail cut.
  RlweContext ctx = RlweContext::named("R256");
  Rng rng(std::uint64_t{10});
  RingPoly zero{std::vector<std::uint32_t>(256, 0)};
  RlweKeyPair kp = rlwe_keypair_from(ctx, ctx.uniform_ntt(rng), zero, zero);
  for (int i = 0; i < 50; ++i) {
    auto m = random_bits(256, rng);
    EXPECT_EQ(rlwe_decrypt(ctx, kp.r2, rlwe_enc2(ctx, kp.a, kp.p, m, rng)), m);
  }
}

TEST(Rlwe, EncryptionConsumesErrorsInOrder) {
  RlweContext ctx = RlweContext::named("R256");
  Rng rng(std::uint64_t{11});
  RlweKeyPair kp = rlwe_keygen(ctx, rng);
  auto m = random_bits(256, rng);
  KeccakBitStream s1(Bytes{1}), s2(Bytes{1});
  RlweCiphertext ct = rlwe_enc2(ctx, kp.a, kp.p, m, s1);
  RingPoly e1 = ctx.sample_error(s2), e2 = ctx.sample_error(s2);
  const Ntt& ntt = ctx.ntt();
  EXPECT_EQ(ct.c1, ntt.add(ntt.forward(e2), ntt.mul(kp.a, ntt.forward(e1))));
}

TEST(Rlwe, ExhaustedBitSourceIsReported) {
  RlweContext ctx = RlweContext::named("R256");
  Rng rng(std::uint64_t{12});
  RlweKeyPair kp = rlwe_keygen(ctx, rng);
  FiniteBitSource few(Bytes(16, 0x5a));
  EXPECT_THROW(rlwe_enc2(ctx, kp.a, kp.p, random_bits(256, rng), few), BitSourceExhausted);
  EXPECT_THROW(rlwe_enc2(ctx, kp.a, kp.p, random_bits(255, rng), rng), Error);
}

TEST(Rlwe, CiphertextSerializationRoundTrip) {
  RlweContext ctx = RlweContext::named("R256");
  Rng rng(std::uint64_t{13});
  RlweKeyPair kp = rlwe_keygen(ctx, rng);
  RlweCiphertext ct = rlwe_enc2(ctx, kp.a, kp.p, random_bits(256, rng), rng);
  Bytes wire = serialize_ciphertext(ct);
  EXPECT_EQ(wire.size(), 1024u);
  EXPECT_EQ(deserialize_ciphertext(ctx, wire), ct);
  wire[1] = 0xff;  // coefficient >= q
  EXPECT_THROW(deserialize_ciphertext(ctx, wire), DecodeError);
  EXPECT_THROW(deserialize_ciphertext(ctx, Bytes(1023, 0)), DecodeError);
}
