#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shiftlab/exact.hpp"
#include "shiftlab/refute.hpp"

namespace shiftlab {

// Replays a refutation certificate from its parameters using only window-constraint reasoning.
// Nothing here calls the refuter's parameter search or k_g: admissibility is re-scanned and the
// ρ-to-agreement conversion is recomputed locally.

struct StepCheck {
  std::string id;
  bool ok = false;
  std::string detail;
};

struct ReplayResult {
  bool ok = false;
  std::vector<StepCheck> steps;
};

namespace replay {

/// Agreement depth forced by ρ <= eps: largest d with eps < 2^-d, found by doubling the denominator.
inline std::int64_t depth_forced_by(const Rational& eps) {
  std::int64_t d = 0;
  BigInt pow = 2;  // 2^(d+1)
  while (eps * pow < 1) {
    ++d;
    pow *= 2;
  }
  return d;
}

/// value < m·eps, exact.
inline bool below(std::uint64_t value, std::uint64_t m, const Rational& eps) { return Rational(value) < Rational(m) * eps; }

/// Spot check that every length in [K, 16K + 64] keeps fewer than len·eps mistakes. A finite window,
/// not a tail proof; the tail itself is the mistake function's job.
inline bool admissible_on_scan(const MistakeFunction& g, std::uint64_t K, const Rational& eps, std::string& why) {
  const auto num = numerator_of(eps);
  const auto den = denominator_of(eps);
  for (std::uint64_t len = K; len <= 16 * K + 64; ++len) {
    if (BigInt(g(len, eps)) * den >= BigInt(len) * num) {
      why = "g(" + std::to_string(len) + ") >= " + std::to_string(len) + "*eps";
      return false;
    }
  }
  return true;
}

inline BigInt ceil_log2_big(const BigInt& x) {
  if (x <= 1) return 0;
  BigInt bits = 0;
  BigInt v = x - 1;
  while (v > 0) {
    v >>= 1;
    ++bits;
  }
  return bits;
}

}  // namespace replay

inline ReplayResult replay_certificate(const RefutationCertificate& cert) {
  const auto& p = cert.params;
  const auto& g = cert.g;
  ReplayResult out;
  auto record = [&](const std::string& id, bool ok, std::string detail) {
    out.steps.push_back(StepCheck{id, ok, std::move(detail)});
    return ok;
  };
  auto step = [&](const std::string& id) -> const DerivationStep* {
    for (const auto& s : cert.steps)
      if (s.id == id) return &s;
    return nullptr;
  };
  auto nj = [&](const BigInt& j) { return BigInt(p.m) + j * BigInt(p.N); };

  const BigInt two_M = p.M >= 0 && p.M < 4096 ? BigInt(1) << static_cast<unsigned>(p.M) : BigInt(0);
  bool shape = p.n >= 1 && p.N >= 1 && p.M >= 1 && p.m >= 1 && p.s >= 3 && p.M < 4096;
  shape = shape && p.eps == Rational(BigInt(1), BigInt(1) << static_cast<unsigned>(p.n)) && p.eps < g.eps0();
  shape = shape && p.eps1 > 0 && p.eps1 < g.eps0();
  if (!record("params", shape, shape ? "eps = 2^-n below eps0, s >= 3" : "malformed parameters")) {
    out.ok = false;
    return out;
  }

  // S1: at most g(N) < N bad times per block, and a good time pins row 0 of y to b.
  {
    const auto* st = step("S1");
    std::string why;
    bool ok = st != nullptr;
    const auto d = replay::depth_forced_by(p.eps);
    ok = ok && replay::below(g(p.N, p.eps), p.N, p.eps) && replay::admissible_on_scan(g, p.N, p.eps, why) && d >= 1;
    if (ok) {
      const auto& c = st->constraint;
      ok = c.kind == "each-block" && c.row_lo == 0 && c.row_hi == 0 && c.col_lo == nj(0) && c.col_hi == nj(p.s) - 1 &&
           c.block == p.N && c.symbols == "b";
    }
    record("S1", ok, ok ? "forced depth " + std::to_string(d) + " at eps; every block holds a good time" : "block tracing does not force b " + why);
  }

  // S2: a column that is b on row 0 stays b below.
  {
    const auto* st = step("S2");
    bool ok = st != nullptr;
    if (ok) {
      const auto& c = st->constraint;
      ok = c.kind == "each-block" && c.row_lo == 0 && c.row_hi == p.M && c.col_lo == nj(0) && c.col_hi == nj(p.s) - 1 &&
           c.block == p.N && c.symbols == "b";
    }
    record("S2", ok, ok ? "persistence carries S1 to row M" : "S2 constraint does not follow from S1");
  }

  // S3: forced columns p_j, p_{j+1} lie less than 2N apart; the a-run between them (< 2N - 1) is
  // within the row-M bound 2^M·⌈log2(l+1)⌉ >= 2^M, so it is forbidden and no c can sit next to b.
  {
    const auto* st = step("S3");
    bool ok = st != nullptr && two_M > 2 * BigInt(p.N);
    const BigInt widest_gap = 2 * BigInt(p.N) - 2;
    ok = ok && widest_gap <= two_M;
    if (ok) {
      const auto& c = st->constraint;
      ok = c.kind == "all" && c.row_lo == p.M && c.row_hi == p.M && c.col_lo == nj(1) && c.col_hi == nj(p.s - 1) &&
           c.symbols == "b";
    }
    record("S3", ok, ok ? "row M all b on [n_1, n_{s-1}]" : "2^M > 2N fails or the run interval is wrong");
  }

  // S4: a c at column < n_0 is followed, before the S3 run, by an a-run of length <= n_1 - 2 ending
  // in that run; the run has length L >= (s-2)N + 1.
  {
    const auto* st = step("S4");
    const auto* s3 = step("S3");
    bool ok = st != nullptr && s3 != nullptr;
    if (ok) {
      const BigInt stated = two_M * replay::ceil_log2_big((p.s - 2) * BigInt(p.N) + 1);
      const BigInt run = s3->constraint.col_hi - s3->constraint.col_lo + 1;
      const BigInt precise = two_M * replay::ceil_log2_big(run + 1);
      const BigInt longest_a_run = s3->constraint.col_lo - 1;
      ok = stated > BigInt(p.N) + p.m && precise >= longest_a_run;
      const auto& c = st->constraint;
      ok = ok && c.kind == "only" && c.row_lo == p.M && c.row_hi == p.M && c.col_lo == 0 && c.col_hi == nj(0) - 1 &&
           c.symbols == "ab";
    }
    record("S4", ok, ok ? "no c on row M before n_0" : "2^M*ceil(log2((s-2)N+1)) > N+m fails or interval mismatch");
  }

  // S5: segment 0 keeps a good time at eps1, and eps1 pins rows 0..M of y at that time to c.
  {
    const auto* st = step("S5");
    std::string why;
    bool ok = st != nullptr;
    const auto d = replay::depth_forced_by(p.eps1);
    ok = ok && p.eps1 == Rational(BigInt(1), two_M * 4);
    ok = ok && replay::below(g(p.m, p.eps1), p.m, p.eps1) && replay::admissible_on_scan(g, p.m, p.eps1, why) &&
         d >= p.M + 1;
    if (ok) {
      const auto& c = st->constraint;
      ok = c.kind == "exists" && c.row_lo == p.M && c.row_hi == p.M && c.col_lo == 0 && c.col_hi == nj(0) - 1 &&
           c.symbols == "c";
    }
    record("S5", ok, ok ? "forced depth " + std::to_string(d) + " at eps1 reaches row M" : "segment 0 does not force c on row M " + why);
  }

  {
    const auto* a = step(cert.contradiction.first);
    const auto* b = step(cert.contradiction.second);
    bool ok = a != nullptr && b != nullptr;
    if (ok) {
      const auto& only = a->constraint;
      const auto& some = b->constraint;
      ok = only.kind == "only" && some.kind == "exists" && only.row_lo == some.row_lo && only.row_hi == some.row_hi &&
           only.col_lo <= some.col_lo && some.col_hi <= only.col_hi && some.col_lo <= some.col_hi &&
           only.symbols.find(some.symbols) == std::string::npos;
    }
    record("contradiction", ok, ok ? "S5 needs a symbol S4 excludes on the same cells" : "constraints do not clash");
  }

  out.ok = true;
  for (const auto& s : out.steps) out.ok = out.ok && s.ok;
  return out;
}

}  // namespace shiftlab
