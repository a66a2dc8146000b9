#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "shiftlab/error.hpp"
#include "shiftlab/exact.hpp"
#include "shiftlab/product.hpp"

namespace shiftlab {

// The segment list being refuted: x^0 = all-c over [0, n_0), then s all-b blocks of width N,
// block j covering [n_{j-1}, n_j) with n_j = m + jN. Segment 0 is traced at eps1, the blocks at eps.

struct RefutationParams {
  std::int64_t n = 0;   // eps = 2^-n
  Rational eps;
  std::uint64_t N = 0;  // block width, k_g(eps) + 1
  std::int64_t M = 0;   // least M with 2^M > 2N
  Rational eps1;        // 2^-(M+2)
  std::uint64_t m = 0;  // k_g(eps1), length of segment 0
  BigInt s;             // number of b blocks

  BigInt boundary(const BigInt& j) const { return BigInt(m) + j * BigInt(N); }
};

/// A constraint on the tracing point y restricted to rows [row_lo, row_hi] and columns
/// [col_lo, col_hi] (inclusive).
///   each-block: every width-`block` block starting at col_lo holds a column whose cells in
///               every listed row carry `symbols`
///   all:        every cell carries `symbols`
///   only:       every cell carries one of `symbols`
///   exists:     some cell carries `symbols`
struct WindowConstraint {
  std::string kind;
  std::int64_t row_lo = 0;
  std::int64_t row_hi = 0;
  BigInt col_lo;
  BigInt col_hi;
  BigInt block;
  std::string symbols;
};

struct DerivationStep {
  std::string id;
  std::string rule;
  std::string statement;
  std::vector<std::string> premises;
  WindowConstraint constraint;
};

struct Contradiction {
  std::string first;
  std::string second;
  std::string statement;
};

struct RefutationCertificate {
  RefutationCertificate(MistakeFunction fn, RefutationParams prm) : g(std::move(fn)), params(std::move(prm)) {}

  MistakeFunction g;
  RefutationParams params;
  std::string boundary_formula;
  std::vector<std::pair<std::string, BigInt>> boundaries;
  std::int64_t window_rows = 0;
  BigInt window_cols;
  std::vector<DerivationStep> steps;
  Contradiction contradiction;
};

/// Runs the parameter chain for g. Any k_g that cannot be settled raises resource_error naming the stage.
inline RefutationParams choose_parameters(const MistakeFunction& g) {
  RefutationParams p;
  p.n = 2;
  while (inverse_power_of_two(static_cast<std::uint64_t>(p.n)) >= g.eps0()) {
    if (++p.n > 60) throw resource_error("refute: no eps = 2^-n below eps0 = " + to_string(g.eps0()) + " with n <= 60");
  }
  p.eps = inverse_power_of_two(static_cast<std::uint64_t>(p.n));

  auto kg_stage = [&](const Rational& eps, const std::string& stage) {
    try {
      return k_g(g, eps);
    } catch (const resource_error& e) {
      throw resource_error("refute: stuck at " + stage + ": " + e.what());
    }
  };
  p.N = kg_stage(p.eps, "N = k_g(eps) + 1") + 1;
  p.M = 1;
  while ((BigInt(1) << p.M) <= 2 * BigInt(p.N)) ++p.M;
  p.eps1 = inverse_power_of_two(static_cast<std::uint64_t>(p.M + 2));
  p.m = kg_stage(p.eps1, "m = k_g(2^-(M+2))");

  // 2^M·⌈log2((s-2)N+1)⌉ > N+m  iff  (s-2)N >= 2^(c-1) with c = ⌊(N+m)/2^M⌋ + 1.
  const BigInt c = (BigInt(p.N) + p.m) / (BigInt(1) << p.M) + 1;
  if (c > 100000) throw resource_error("refute: stuck at s: 2^" + c.str() + " blocks needed");
  const BigInt need = BigInt(1) << static_cast<unsigned>(c - 1);
  BigInt blocks = (need + p.N - 1) / p.N;
  if (blocks < 1) blocks = 1;
  p.s = 2 + blocks;
  return p;
}

/// Records the derivation for `params` without validating it; replay_certificate is the judge.
inline RefutationCertificate build_certificate(const MistakeFunction& g, const RefutationParams& params) {
  RefutationCertificate cert(g, params);
  const auto& p = params;
  const BigInt n0 = p.boundary(0);
  const BigInt n1 = p.boundary(1);
  const BigInt ns1 = p.boundary(p.s - 1);
  const BigInt ns = p.boundary(p.s);
  cert.boundary_formula = "n_j = m + j*N for j = 0..s";
  cert.boundaries = {{"n_0", n0}, {"n_1", n1}, {"n_2", p.boundary(2)}, {"n_{s-1}", ns1}, {"n_s", ns}};
  cert.window_rows = p.M + 1;
  cert.window_cols = ns;

  const auto Ms = std::to_string(p.M);
  cert.steps.push_back(DerivationStep{
      "S1", "block tracing",
      "each b block [n_{j-1}, n_j) has a time traced within eps = " + to_string(p.eps) +
          ", which forces y to read b at row 0 of that column",
      {"g(N) < N*eps", "N >= k_g(eps)", "rho <= eps forces agreement at (0, 0)"},
      WindowConstraint{"each-block", 0, 0, n0, ns - 1, BigInt(p.N), "b"}});
  cert.steps.push_back(DerivationStep{
      "S2", "b persistence",
      "b at (0, p_j) propagates down column p_j to row M = " + Ms,
      {"S1", "entry(i+1, j) in {b, entry(i, j)}"},
      WindowConstraint{"each-block", 0, p.M, n0, ns - 1, BigInt(p.N), "b"}});
  cert.steps.push_back(DerivationStep{
      "S3", "short gaps on row M",
      "consecutive forced columns are < 2N < 2^M apart, so row M is b from n_1 through n_{s-1}",
      {"S2", "2^M > 2N", "no bc/cb", "a-runs of length <= 2^M between b's are forbidden in X_M"},
      WindowConstraint{"all", p.M, p.M, n1, ns1, 0, "b"}});
  cert.steps.push_back(DerivationStep{
      "S4", "long b run excludes c",
      "a c on row M before n_0 would precede the S3 run by an a-run shorter than 2^M*ceil(log2((s-2)N+1))",
      {"S3", "2^M*ceil(log2((s-2)N+1)) > N+m", "no cb"},
      WindowConstraint{"only", p.M, p.M, 0, n0 - 1, 0, "ab"}});
  cert.steps.push_back(DerivationStep{
      "S5", "first segment tracing",
      "segment 0 has a time traced within eps1 = " + to_string(p.eps1) + ", forcing c at row M = " + Ms,
      {"g(m) < m*eps1", "m >= k_g(eps1)", "rho <= eps1 forces agreement on i+j <= M"},
      WindowConstraint{"exists", p.M, p.M, 0, n0 - 1, 0, "c"}});
  cert.contradiction = Contradiction{"S4", "S5", "row " + Ms + ", columns [0, n_0) must contain c yet holds only a and b"};
  return cert;
}

inline RefutationCertificate refute_almost_spec(const MistakeFunction& g) {
  return build_certificate(g, choose_parameters(g));
}

}  // namespace shiftlab
