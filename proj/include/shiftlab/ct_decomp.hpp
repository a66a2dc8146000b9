#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "shiftlab/core.hpp"
#include "shiftlab/counting.hpp"
#include "shiftlab/language.hpp"
#include "shiftlab/spec_certify.hpp"

namespace shiftlab {

/// W = prefix · core · suffix with prefix monochromatic, core good and suffix always empty.
struct Decomposition {
  Word prefix;
  Word core;
  Word suffix;
};

/// Canonical split at the first marker.
inline Decomposition decompose(const Params& params, const RestrictionFamily& family, const Word& w) {
  detail::require_allowed(params, family, w, "decompose: word");
  const auto i = detail::first_marker(w);
  Decomposition d;
  d.prefix.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
  d.core.assign(w.begin() + static_cast<std::ptrdiff_t>(i), w.end());
  return d;
}

/// Good words glue with no gap: the concatenation is good again.
inline bool check_cond_II(const Params& params, const RestrictionFamily& family, std::span<const Word> goods) {
  Word joined;
  for (std::size_t i = 0; i < goods.size(); ++i) {
    if (!is_good(params, family, goods[i]))
      throw usage_error("check_cond_II: word " + std::to_string(i + 1) + " is not good");
    joined.insert(joined.end(), goods[i].begin(), goods[i].end());
  }
  return is_good(params, family, joined);
}

struct Extension {
  Word prefix;            // u' with u'·W good
  std::int64_t tau = 0;   // N_{M+1} + 1
};

/// Finds u' with |u'| <= N_{M+1} + 1 and u'·W good.
///
/// A good W needs nothing. Otherwise W opens with a marker-free run U of color a and length L <= M;
/// u' = O · (a,0)^ℓ for the least ℓ making (a,0)^ℓ·U restricted, and ℓ = N_L - L always works.
/// `pad_to` left-pads u' with markers to a requested length.
inline Extension extend_to_good(const Params& params, const RestrictionFamily& family, const Word& w, std::int64_t M,
                                std::optional<std::size_t> pad_to = std::nullopt) {
  if (M < 0) throw usage_error("extend_to_good: M must be >= 0");
  const auto d = decompose(params, family, w);
  const auto len = static_cast<std::int64_t>(d.prefix.size());
  if (len > M)
    throw usage_error("extend_to_good: prefix length " + std::to_string(len) + " exceeds M=" + std::to_string(M));
  const auto n_next = gap_index(family, M + 1);
  if (!n_next) throw search_failure("extend_to_good: gap index N_" + std::to_string(M + 1) + " not found");

  Extension ext;
  ext.tau = *n_next + 1;
  if (len > 0) {
    const auto nl = gap_index(family, len);
    if (!nl) throw search_failure("extend_to_good: gap index N_" + std::to_string(len) + " not found");
    const Symbol fill{d.prefix.front().color, 0};
    for (std::int64_t ell = 0; ell <= *nl - len; ++ell) {
      Word candidate(static_cast<std::size_t>(ell), fill);
      candidate.insert(candidate.end(), d.prefix.begin(), d.prefix.end());
      if (detail::restricted_unchecked(family, candidate, 0, candidate.size())) {
        ext.prefix.assign(1, kMarker);
        ext.prefix.insert(ext.prefix.end(), static_cast<std::size_t>(ell), fill);
        break;
      }
    }
  }
  if (pad_to) {
    if (*pad_to < ext.prefix.size())
      throw usage_error("extend_to_good: requested length " + std::to_string(*pad_to) + " is below the shortest extension " +
                        std::to_string(ext.prefix.size()));
    ext.prefix.insert(ext.prefix.begin(), *pad_to - ext.prefix.size(), kMarker);
  }
  return ext;
}

struct GrowthRow {
  int n = 0;
  double log_growth = 0.0;  // log(G_n)/n
  bool below_q_power = false;  // G_n <= q^n, exact
};

/// Finite-n comparison of log(G_n)/n against log q, with the condition verdict and, when the
/// condition fails, the growth witness.
struct EntropyComparison {
  Params params;
  std::string family;
  double log_q = 0.0;
  std::vector<GrowthRow> rows;
  ConditionReport condition;
  std::optional<GrowthWitness> witness;
};

inline EntropyComparison entropy_compare(const Params& params, const RestrictionFamily& family, int n_max) {
  if (n_max < 1) throw usage_error("entropy_compare: n_max must be >= 1");
  const CountTable table(params, family, n_max);
  EntropyComparison cmp;
  cmp.params = params;
  cmp.family = family.name();
  cmp.log_q = std::log(static_cast<double>(params.q));
  BigInt q_pow = 1;
  for (int n = 1; n <= n_max; ++n) {
    q_pow *= params.q;
    const auto& g = table.good_count(n);
    cmp.rows.push_back(GrowthRow{n, log_big(g) / n, g <= q_pow});
  }
  cmp.condition = check_condition(params, family);
  if (cmp.condition.verdict == Verdict::fails) cmp.witness = growth_witness(params, family, n_max);
  return cmp;
}

}  // namespace shiftlab
