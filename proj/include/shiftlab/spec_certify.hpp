#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shiftlab/core.hpp"
#include "shiftlab/exact.hpp"
#include "shiftlab/language.hpp"

namespace shiftlab {

/// Default search bound for gap indices up to k: roomy for the built-ins, the horizon for tables.
inline std::int64_t default_gap_search_bound(const RestrictionFamily& family, std::int64_t k) {
  if (const auto h = family.horizon()) return *h;
  return (k + 2) * (k + 2) + 16;
}

/// N_1..N_k_max in one pass: N_k = min{m : m - max R_m >= k}.
///
/// The deficiency m - max R_m grows by at most one per step, so the first m reaching k hits it
/// exactly. Entries not reached within `search_bound` are empty.
inline std::vector<std::optional<std::int64_t>> gap_indices(const RestrictionFamily& family, std::int64_t k_max,
                                                            std::int64_t search_bound) {
  if (k_max < 1) throw usage_error("gap_indices: k_max must be >= 1");
  if (const auto h = family.horizon()) search_bound = std::min(search_bound, *h);
  std::vector<std::optional<std::int64_t>> out(static_cast<std::size_t>(k_max) + 1);
  std::int64_t reached = 0;
  for (std::int64_t m = 1; m <= search_bound && reached < k_max; ++m) {
    const auto deficiency = m - family.max_special(m);
    while (reached < deficiency && reached < k_max) out[static_cast<std::size_t>(++reached)] = m;
  }
  return out;
}

inline std::optional<std::int64_t> gap_index(const RestrictionFamily& family, std::int64_t k,
                                             std::int64_t search_bound) {
  if (k < 1) throw usage_error("gap_index: k must be >= 1");
  return gap_indices(family, k, search_bound)[static_cast<std::size_t>(k)];
}

inline std::optional<std::int64_t> gap_index(const RestrictionFamily& family, std::int64_t k) {
  return gap_index(family, k, default_gap_search_bound(family, k));
}

struct GapRow {
  std::int64_t k = 0;
  std::int64_t gap_index = 0;
  Rational ratio;  // k / N_k
};

/// Finite-scale table of k/N_k. `trend` only compares the sampled ratios; it says nothing about limits.
struct GapProfile {
  std::string family;
  std::vector<GapRow> rows;
  Rational min_ratio;
  Rational max_ratio;
  std::string trend;
};

inline GapProfile weak_spec_report(const RestrictionFamily& family, std::int64_t k_max,
                                   std::optional<std::int64_t> search_bound = std::nullopt) {
  if (k_max < 1) throw usage_error("weak_spec_report: k_max must be >= 1");
  const auto bound = search_bound.value_or(default_gap_search_bound(family, k_max));
  const auto indices = gap_indices(family, k_max, bound);
  GapProfile profile;
  profile.family = family.name();
  for (std::int64_t k = 1; k <= k_max; ++k) {
    const auto& nk = indices[static_cast<std::size_t>(k)];
    if (!nk) break;
    profile.rows.push_back(GapRow{k, *nk, Rational(k, *nk)});
  }
  if (profile.rows.empty())
    throw search_failure("weak_spec_report: N_1 not found within search bound " + std::to_string(bound));
  profile.min_ratio = profile.max_ratio = profile.rows.front().ratio;
  for (const auto& row : profile.rows) {
    profile.min_ratio = std::min(profile.min_ratio, row.ratio);
    profile.max_ratio = std::max(profile.max_ratio, row.ratio);
  }
  const auto& last = profile.rows.back();
  const auto& middle = profile.rows[profile.rows.size() / 2];
  if (static_cast<std::int64_t>(profile.rows.size()) < k_max)
    profile.trend = "incomplete: N_k not found for k > " + std::to_string(last.k);
  else if (last.ratio >= middle.ratio)
    profile.trend = "ratio k/N_k rising over the sampled range";
  else
    profile.trend = "ratio k/N_k falling over the sampled range";
  return profile;
}

/// θ(n) = r(n-1) + 1, the per-segment edit budget of almost_glue.
inline std::int64_t theta(const RestrictionFamily& family, std::int64_t n) {
  if (n < 1) throw usage_error("theta: n must be >= 1");
  return family.r(n - 1) + 1;
}

struct GlueResult {
  Word output;
  std::vector<std::int64_t> mistakes;     // Hamming distance per segment
  std::vector<std::int64_t> transitions;  // length of the word inserted before each segment
};

namespace detail {

inline std::size_t monochromatic_run(const Word& w, std::size_t begin) {
  std::size_t end = begin;
  while (end < w.size() && w[end].color == w[begin].color) ++end;
  return end;
}

inline void require_allowed(const Params& params, const RestrictionFamily& family, const Word& w,
                            const std::string& what) {
  if (!is_allowed(params, family, w)) throw usage_error(what + " is not allowed: '" + format_word(w) + "'");
}

}  // namespace detail

/// Glues allowed segments by editing every segment after the first into a free word: its first
/// symbol becomes O and the digits at R-positions of the following monochromatic run are zeroed.
inline GlueResult almost_glue(const Params& params, const RestrictionFamily& family, std::span<const Word> segments) {
  GlueResult result;
  for (std::size_t idx = 0; idx < segments.size(); ++idx) {
    const Word& seg = segments[idx];
    if (seg.empty()) throw usage_error("almost_glue: segment " + std::to_string(idx + 1) + " is empty");
    detail::require_allowed(params, family, seg, "almost_glue: segment " + std::to_string(idx + 1));
    result.transitions.push_back(0);
    if (idx == 0) {
      result.output = seg;
      result.mistakes.push_back(0);
      continue;
    }
    Word edited = seg;
    edited[0] = kMarker;
    if (edited.size() > 1 && !edited[1].is_marker()) {
      const auto end = detail::monochromatic_run(edited, 1);
      const auto len = static_cast<std::int64_t>(end - 1);
      family.require_within_horizon(len);
      for (std::int64_t j = 1; j <= len; ++j)
        if (family.entry(j) <= len) edited[static_cast<std::size_t>(j)].digit = 0;
    }
    std::int64_t changed = 0;
    for (std::size_t i = 0; i < seg.size(); ++i) changed += seg[i] != edited[i];
    result.mistakes.push_back(changed);
    result.output.insert(result.output.end(), edited.begin(), edited.end());
  }
  return result;
}

/// t(n) = 1 + max_{j<=n} (N_j - j); depends on |w| only.
inline std::int64_t weak_transition_length(const RestrictionFamily& family, std::int64_t n,
                                           std::optional<std::int64_t> search_bound = std::nullopt) {
  if (n < 0) throw usage_error("weak_transition_length: n must be >= 0");
  if (n == 0) return 1;
  const auto bound = search_bound.value_or(default_gap_search_bound(family, n));
  const auto indices = gap_indices(family, n, bound);
  std::int64_t worst = 0;
  for (std::int64_t j = 1; j <= n; ++j) {
    const auto& nj = indices[static_cast<std::size_t>(j)];
    if (!nj) throw search_failure("weak glue: gap index N_" + std::to_string(j) + " not found within " + std::to_string(bound));
    worst = std::max(worst, *nj - j);
  }
  return 1 + worst;
}

/// Builds v with |v| = t(|w|) and u·v·w allowed.
///
/// When w opens with a marker-free run of length j in color a, v = O^pad · O · (a,0)^(N_j - j):
/// the filler followed by that run is restricted because every position past N_j - j = max R_{N_j}
/// is free of constraints. Otherwise v is all markers.
inline GlueResult weak_glue(const Params& params, const RestrictionFamily& family, const Word& u, const Word& w,
                            std::optional<std::int64_t> search_bound = std::nullopt) {
  detail::require_allowed(params, family, u, "weak_glue: u");
  detail::require_allowed(params, family, w, "weak_glue: w");
  const auto n = static_cast<std::int64_t>(w.size());
  const auto t = weak_transition_length(family, n, search_bound);
  Word v;
  if (w.empty() || w.front().is_marker()) {
    v.assign(static_cast<std::size_t>(t), kMarker);
  } else {
    const auto j = static_cast<std::int64_t>(detail::monochromatic_run(w, 0));
    const auto nj = gap_index(family, j, search_bound.value_or(default_gap_search_bound(family, j)));
    if (!nj) throw search_failure("weak glue: gap index N_" + std::to_string(j) + " not found");
    const auto filler = *nj - j;
    v.assign(static_cast<std::size_t>(t - filler), kMarker);
    v.insert(v.end(), static_cast<std::size_t>(filler), Symbol{w.front().color, 0});
  }
  GlueResult result;
  result.output = u;
  result.output.insert(result.output.end(), v.begin(), v.end());
  result.output.insert(result.output.end(), w.begin(), w.end());
  result.mistakes = {0, 0};
  result.transitions = {0, t};
  return result;
}

/// Left-to-right weak gluing of several words: w_1 v_1 w_2 v_2 ... w_k.
inline GlueResult weak_glue_all(const Params& params, const RestrictionFamily& family, std::span<const Word> words,
                                std::optional<std::int64_t> search_bound = std::nullopt) {
  GlueResult result;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i == 0) {
      detail::require_allowed(params, family, words[0], "weak_glue: word 1");
      result.output = words[0];
      result.transitions.push_back(0);
    } else {
      auto step = weak_glue(params, family, result.output, words[i], search_bound);
      result.output = std::move(step.output);
      result.transitions.push_back(step.transitions.back());
    }
    result.mistakes.push_back(0);
  }
  return result;
}

}  // namespace shiftlab
