#include <gtest/gtest.h>

#include "shiftlab/refute.hpp"
#include "shiftlab/refute_check.hpp"

using namespace shiftlab;

namespace {

const StepCheck* find_step(const ReplayResult& r, const std::string& id) {
  for (const auto& s : r.steps)
    if (s.id == id) return &s;
  return nullptr;
}

std::uint64_t bit_length(BigInt x) {
  std::uint64_t bits = 0;
  while (x > 0) {
    x >>= 1;
    ++bits;
  }
  return bits;
}

// 2^M·⌈log2((s-2)N+1)⌉ > N + m, with ⌈log2 x⌉ = bit_length(x - 1).
bool run_length_inequality(const RefutationParams& p, const BigInt& s) {
  const BigInt x = (s - 2) * BigInt(p.N) + 1;
  return (BigInt(1) << p.M) * BigInt(bit_length(x - 1)) > BigInt(p.N) + p.m;
}

}  // namespace

TEST(Refute, SqrtParameterChain) {
  const auto g = MistakeFunction::sqrt_budget();
  const auto p = choose_parameters(g);
  EXPECT_EQ(p.n, 2);
  EXPECT_EQ(p.eps, Rational(1, 4));
  // ⌈√m⌉ < m/4 first holds for good at m = 21 (m = 20 gives 5 < 5).
  EXPECT_EQ(p.N, 22u);
  EXPECT_EQ(p.M, 6);
  EXPECT_EQ(p.eps1, Rational(1, 256));
  EXPECT_EQ(p.m, k_g(g, Rational(1, 256)));
  EXPECT_GT(p.m, 65'536u);
  EXPECT_TRUE(run_length_inequality(p, p.s));
  EXPECT_FALSE(run_length_inequality(p, p.s - 1));
}

TEST(Refute, LogNeedsShorterFirstSegment) {
  const auto ps = choose_parameters(MistakeFunction::sqrt_budget());
  const auto pl = choose_parameters(MistakeFunction::log_budget());
  EXPECT_LT(pl.m, ps.m);
  EXPECT_TRUE(run_length_inequality(pl, pl.s));
  EXPECT_FALSE(run_length_inequality(pl, pl.s - 1));
  EXPECT_TRUE(replay_certificate(refute_almost_spec(MistakeFunction::log_budget())).ok);
}

TEST(Refute, ZeroBudget) {
  const auto cert = refute_almost_spec(MistakeFunction::zero());
  EXPECT_EQ(cert.params.N, 2u);
  EXPECT_EQ(cert.params.M, 3);
  EXPECT_EQ(cert.params.m, 1u);
  EXPECT_EQ(cert.params.s, 3);
  const auto r = replay_certificate(cert);
  EXPECT_TRUE(r.ok);
  EXPECT_TRUE(find_step(r, "S1")->ok);
}

TEST(Refute, SmallerThresholdForcesSmallerEpsilon) {
  const auto p = choose_parameters(MistakeFunction::sqrt_budget(Rational(1, 5)));
  EXPECT_EQ(p.n, 3);
  EXPECT_TRUE(replay_certificate(refute_almost_spec(MistakeFunction::sqrt_budget(Rational(1, 5)))).ok);
}

TEST(Refute, CertificateShape) {
  const auto cert = refute_almost_spec(MistakeFunction::sqrt_budget());
  ASSERT_EQ(cert.steps.size(), 5u);
  const char* ids[] = {"S1", "S2", "S3", "S4", "S5"};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(cert.steps[i].id, ids[i]);
  EXPECT_EQ(cert.window_rows, cert.params.M + 1);
  EXPECT_EQ(cert.window_cols, cert.params.boundary(cert.params.s));
  EXPECT_EQ(cert.boundaries.front().second, BigInt(cert.params.m));
  EXPECT_EQ(cert.contradiction.first, "S4");
  EXPECT_EQ(cert.contradiction.second, "S5");
}

TEST(Replay, AcceptsCatalogCertificates) {
  for (const auto& g : {MistakeFunction::sqrt_budget(), MistakeFunction::log_budget(), MistakeFunction::zero(),
                        MistakeFunction::affine(1.0, 0.5)}) {
    const auto r = replay_certificate(refute_almost_spec(g));
    EXPECT_TRUE(r.ok) << g.id();
    EXPECT_EQ(r.steps.size(), 7u);
  }
}

TEST(Replay, FewerBlocksBreakTheRunStep) {
  for (const auto& g : {MistakeFunction::sqrt_budget(), MistakeFunction::log_budget(), MistakeFunction::zero()}) {
    auto p = choose_parameters(g);
    p.s -= 1;
    const auto r = replay_certificate(build_certificate(g, p));
    EXPECT_FALSE(r.ok) << g.id();
  }
}

TEST(Replay, SmallerMBreaksAStep) {
  for (const auto& g : {MistakeFunction::sqrt_budget(), MistakeFunction::log_budget(), MistakeFunction::zero()}) {
    auto p = choose_parameters(g);
    p.M -= 1;
    EXPECT_FALSE(replay_certificate(build_certificate(g, p)).ok) << g.id();
    // Even with eps1 kept consistent with the smaller M, 2^M > 2N fails.
    p.eps1 = inverse_power_of_two(static_cast<std::uint64_t>(p.M + 2));
    const auto r = replay_certificate(build_certificate(g, p));
    EXPECT_FALSE(r.ok);
    EXPECT_FALSE(find_step(r, "S3")->ok);
  }
}

TEST(Replay, ShorterFirstSegmentBreaksS5) {
  for (const auto& g : {MistakeFunction::sqrt_budget(), MistakeFunction::log_budget()}) {
    auto p = choose_parameters(g);
    p.m -= 1;
    const auto r = replay_certificate(build_certificate(g, p));
    EXPECT_FALSE(r.ok) << g.id();
    EXPECT_FALSE(find_step(r, "S5")->ok) << g.id();
  }
}

TEST(Replay, CoarserEpsilonBreaksS1) {
  auto p = choose_parameters(MistakeFunction::sqrt_budget());
  p.n = 1;
  p.eps = Rational(1, 2);
  const auto r = replay_certificate(build_certificate(MistakeFunction::sqrt_budget(), p));
  EXPECT_FALSE(r.ok);
  EXPECT_FALSE(find_step(r, "S1")->ok);
}

// N only has to reach k_g(eps); one below the chosen N = k_g(eps) + 1 is still a valid refutation.
TEST(Replay, BlockWidthAtKgStillSound) {
  const auto g = MistakeFunction::sqrt_budget();
  auto p = choose_parameters(g);
  p.N -= 1;
  EXPECT_EQ(p.N, k_g(g, p.eps));
  const auto r = replay_certificate(build_certificate(g, p));
  EXPECT_TRUE(find_step(r, "S1")->ok);
  p.N -= 1;
  EXPECT_FALSE(find_step(replay_certificate(build_certificate(g, p)), "S1")->ok);
}

TEST(Replay, TamperedConstraintIsRejected) {
  auto cert = refute_almost_spec(MistakeFunction::log_budget());
  cert.steps[3].constraint.symbols = "abc";
  EXPECT_FALSE(replay_certificate(cert).ok);
  cert = refute_almost_spec(MistakeFunction::log_budget());
  cert.steps[2].constraint.col_lo -= 1;
  EXPECT_FALSE(replay_certificate(cert).ok);
  cert = refute_almost_spec(MistakeFunction::log_budget());
  cert.steps.pop_back();
  EXPECT_FALSE(replay_certificate(cert).ok);
}

TEST(Refute, TinyThresholdHitsResourceCap) {
  EXPECT_THROW(choose_parameters(MistakeFunction::sqrt_budget(Rational(1, 1000))), resource_error);
}
