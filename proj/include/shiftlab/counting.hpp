#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shiftlab/core.hpp"
#include "shiftlab/exact.hpp"

namespace shiftlab {

/// Exact counts of free (F), good (G) and allowed (B) n-words for n = 0..horizon.
class CountTable {
 public:
  static constexpr int kMaxHorizon = 10'000;

  CountTable(Params params, RestrictionFamily family, int horizon)
      : params_(params), family_(std::move(family)), horizon_(horizon) {
    params_.validate();
    if (horizon < 0) throw usage_error("count horizon must be >= 0");
    if (horizon > kMaxHorizon)
      throw resource_error("count horizon " + std::to_string(horizon) + " exceeds " +
                           std::to_string(kMaxHorizon));
    family_.require_within_horizon(horizon);
    build();
  }

  const Params& params() const { return params_; }
  const RestrictionFamily& family() const { return family_; }
  int horizon() const { return horizon_; }

  /// F_0 = F_1 = 1 and F_n = p·q^((n-1) - r(n-1)).
  const BigInt& free_count(int n) const { return free_.at(checked(n)); }

  /// G_n = Σ_{i=1..n} F_i·G_{n-i}, with G_0 = G_1 = 1.
  const BigInt& good_count(int n) const { return good_.at(checked(n)); }

  /// |B_n(X)| by splitting at the first marker:
  /// p·q^n marker-free words, plus G_n, plus p·q^i·G_{n-i} for a prefix of length 1 <= i < n.
  const BigInt& allowed_count(int n) const { return allowed_.at(checked(n)); }

 private:
  std::size_t checked(int n) const {
    if (n < 0 || n > horizon_)
      throw usage_error("n=" + std::to_string(n) + " outside the table horizon 0.." + std::to_string(horizon_));
    return static_cast<std::size_t>(n);
  }

  void build() {
    const auto size = static_cast<std::size_t>(horizon_) + 1;
    const BigInt p = params_.p;
    std::vector<BigInt> q_pow(size);
    q_pow[0] = 1;
    for (std::size_t i = 1; i < size; ++i) q_pow[i] = q_pow[i - 1] * params_.q;

    free_.assign(size, 0);
    good_.assign(size, 0);
    allowed_.assign(size, 0);
    for (std::size_t n = 0; n < size; ++n) {
      if (n <= 1) {
        free_[n] = 1;
      } else {
        const auto exp = static_cast<std::int64_t>(n - 1) - family_.r(static_cast<std::int64_t>(n - 1));
        free_[n] = p * q_pow[static_cast<std::size_t>(exp)];
      }
    }
    good_[0] = 1;
    for (std::size_t n = 1; n < size; ++n) {
      BigInt sum = 0;
      for (std::size_t i = 1; i <= n; ++i) sum += free_[i] * good_[n - i];
      good_[n] = sum;
    }
    allowed_[0] = 1;
    for (std::size_t n = 1; n < size; ++n) {
      BigInt sum = p * q_pow[n] + good_[n];
      for (std::size_t i = 1; i < n; ++i) sum += p * q_pow[i] * good_[n - i];
      allowed_[n] = sum;
    }
  }

  Params params_;
  RestrictionFamily family_;
  int horizon_;
  std::vector<BigInt> free_;
  std::vector<BigInt> good_;
  std::vector<BigInt> allowed_;
};

/// log|B_n|/n with the bracket log q <= value <= log q + log(1 + n(p+1))/n.
///
/// `bracket_holds` is decided in exact integers: q^n <= |B_n| <= 1 + n(p+1)q^n.
struct EntropyEstimate {
  int n = 0;
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool bracket_holds = false;
};

inline EntropyEstimate entropy_estimate(const CountTable& table, int n) {
  if (n < 1) throw usage_error("entropy_estimate: n must be >= 1");
  const auto& b = table.allowed_count(n);
  const auto& prm = table.params();
  EntropyEstimate e;
  e.n = n;
  e.value = log_big(b) / n;
  e.lower = std::log(static_cast<double>(prm.q));
  e.upper = e.lower + std::log1p(static_cast<double>(n) * (prm.p + 1)) / n;
  const BigInt qn = ipow(prm.q, static_cast<std::uint64_t>(n));
  e.bracket_holds = qn <= b && b <= 1 + BigInt(n) * (prm.p + 1) * qn;
  return e;
}

/// Σ_{k>=1} (2k+1) q^-k, grouping n by ⌊√n⌋ = k (there are 2k+1 such n).
/// Summed through the closed forms of the geometric and arithmetico-geometric series in x = 1/q.
inline Rational grouped_sqrt_series(int q) {
  if (q < 2) throw usage_error("grouped_sqrt_series: q must be >= 2");
  const Rational x(1, q);
  const Rational one_minus = 1 - x;
  const Rational sum_k_xk = x / (one_minus * one_minus);
  const Rational sum_xk = x / one_minus;
  return 2 * sum_k_xk + sum_xk;
}

/// (3q - 1)/(q - 1)².
inline Rational sqrt_series_closed_form(int q) {
  if (q < 2) throw usage_error("sqrt_series_closed_form: q must be >= 2");
  return Rational(3 * q - 1, (q - 1) * (q - 1));
}

/// Partial, tail and full value of Σ_n q^-r(n).
struct ConditionSum {
  std::int64_t cutoff = 0;
  Rational partial;
  std::optional<Rational> tail;
  std::optional<Rational> exact;
};

inline Rational partial_condition_sum(int q, const RestrictionFamily& family, std::int64_t cutoff) {
  Rational sum = 0;
  std::int64_t last_r = -1;
  Rational term;
  for (std::int64_t n = 1; n <= cutoff; ++n) {
    const auto r = family.r(n);
    if (r != last_r) {
      term = Rational(BigInt(1), ipow(q, static_cast<std::uint64_t>(r)));
      last_r = r;
    }
    sum += term;
  }
  return sum;
}

inline ConditionSum condition_sum(int q, const RestrictionFamily& family, std::int64_t cutoff) {
  if (q < 2) throw usage_error("condition_sum: q must be >= 2");
  if (cutoff < 1) throw usage_error("condition_sum: cutoff must be >= 1");
  ConditionSum s;
  if (const auto h = family.horizon()) cutoff = std::min(cutoff, *h);
  s.cutoff = cutoff;
  s.partial = partial_condition_sum(q, family, cutoff);
  if (family.is_builtin()) {
    s.exact = grouped_sqrt_series(q);
    s.tail = *s.exact - s.partial;
  }
  return s;
}

enum class Verdict { holds, fails, undetermined };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::undetermined: return "undetermined";
  }
  return "undetermined";
}

/// Evaluation of 1 + p·Σ q^-r(j) <= q.
struct ConditionReport {
  Params params;
  std::string family;
  Verdict verdict = Verdict::undetermined;
  std::optional<Rational> lhs_exact;
  Rational lhs_partial;
  std::optional<Rational> tail_bound;
  std::int64_t cutoff = 0;
};

/// A failing verdict always carries lhs_partial > q: when the exact sum exceeds q the cutoff is
/// pushed out until the partial sum alone certifies it.
inline ConditionReport check_condition(const Params& params, const RestrictionFamily& family,
                                       std::int64_t cutoff = 64) {
  params.validate();
  auto sum = condition_sum(params.q, family, cutoff);
  ConditionReport rep;
  rep.params = params;
  rep.family = family.name();
  const Rational q = params.q;
  if (sum.exact) {
    rep.lhs_exact = 1 + params.p * *sum.exact;
    if (*rep.lhs_exact <= q) {
      rep.verdict = Verdict::holds;
    } else {
      rep.verdict = Verdict::fails;
      std::int64_t n = sum.cutoff;
      Rational partial = sum.partial;
      while (1 + params.p * partial <= q) {
        ++n;
        partial += Rational(BigInt(1), ipow(params.q, static_cast<std::uint64_t>(family.r(n))));
      }
      sum.cutoff = n;
      sum.partial = partial;
      sum.tail = *sum.exact - partial;
    }
  } else {
    rep.verdict = 1 + params.p * sum.partial > q ? Verdict::fails : Verdict::undetermined;
  }
  rep.lhs_partial = 1 + params.p * sum.partial;
  if (sum.tail) rep.tail_bound = params.p * *sum.tail;
  rep.cutoff = sum.cutoff;
  return rep;
}

/// (N, z) with 1 + Σ_{j<N} p·q^-r(j) > q·z^(N+1), and G_n >= (qz)^(n-N) checked exactly for n <= verified_range.
struct GrowthWitness {
  int N = 0;
  Rational z;
  int verified_range = 0;
};

inline constexpr int kWitnessDenominator = 1024;

/// Scans N upward; for the first N admitting some z = 1 + a/1024, takes the largest such a.
inline std::optional<GrowthWitness> growth_witness(const Params& params, const RestrictionFamily& family,
                                                   int n_max) {
  if (n_max < 1) throw usage_error("growth_witness: n_max must be >= 1");
  if (check_condition(params, family).verdict != Verdict::fails)
    throw usage_error("growth_witness: requires the entropy condition to fail");
  const CountTable table(params, family, n_max);
  const Rational q = params.q;

  auto z_of = [](int a) { return 1 + Rational(a, kWitnessDenominator); };
  auto satisfies = [&](const Rational& lhs, int N, int a) { return lhs > q * rpow(z_of(a), static_cast<std::uint64_t>(N) + 1); };

  Rational lhs = 1;  // 1 + Σ_{j=1}^{N-1} p q^-r(j)
  for (int N = 1; N <= n_max; ++N) {
    if (N >= 2) lhs += Rational(BigInt(params.p), ipow(params.q, static_cast<std::uint64_t>(family.r(N - 1))));
    if (!satisfies(lhs, N, 1)) continue;
    int lo = 1;
    int hi = kWitnessDenominator;
    while (lo < hi) {
      const int mid = (lo + hi + 1) / 2;
      if (satisfies(lhs, N, mid)) lo = mid; else hi = mid - 1;
    }
    // G_n·1024^(n-N) >= (q(1024+a))^(n-N), n >= N; smaller n are trivial since G_n >= 1.
    const BigInt base = BigInt(params.q) * (kWitnessDenominator + lo);
    BigInt lhs_scale = 1;
    BigInt rhs = 1;
    bool verified = true;
    for (int n = N; n <= n_max; ++n) {
      if (table.good_count(n) * lhs_scale < rhs) {
        verified = false;
        break;
      }
      lhs_scale *= kWitnessDenominator;
      rhs *= base;
    }
    if (verified) return GrowthWitness{N, z_of(lo), n_max};
  }
  return std::nullopt;
}

}  // namespace shiftlab
