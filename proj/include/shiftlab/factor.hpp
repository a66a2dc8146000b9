#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "shiftlab/core.hpp"
#include "shiftlab/counting.hpp"
#include "shiftlab/language.hpp"

namespace shiftlab {

/// Symbol-to-symbol map from the (p_from, q) alphabet onto the (p_to, q) alphabet.
class BlockMap {
 public:
  /// Colors above p_to collapse onto p_to; lower colors, digits and the marker are untouched.
  static BlockMap color_merge(int p_from, int p_to, int q) {
    const Params from(p_from, q);
    const Params to(p_to, q);
    if (p_from < p_to) throw usage_error("color_merge: source must have at least as many colors as target");
    BlockMap map(from, to);
    for (Symbol s : alphabet(from)) map.table_.push_back(Symbol{s.color > p_to ? p_to : s.color, s.digit});
    return map;
  }

  const Params& source() const { return from_; }
  const Params& target() const { return to_; }

  Symbol operator()(Symbol s) const {
    if (!symbol_in_alphabet(from_, s)) validate_word(from_, Word{s});
    return table_[symbol_index(from_, s)];
  }

  Word apply(const Word& w) const {
    Word out;
    out.reserve(w.size());
    for (Symbol s : w) out.push_back((*this)(s));
    return out;
  }

 private:
  BlockMap(Params from, Params to) : from_(from), to_(to) {}

  Params from_;
  Params to_;
  std::vector<Symbol> table_;
};

/// Whether the merge map sends B_n(X_from) exactly onto B_n(X_to).
inline bool verify_factor_language(int p_from, int p_to, int q, const RestrictionFamily& family, int n,
                                   EnumerationLimits limits = {}) {
  const auto map = BlockMap::color_merge(p_from, p_to, q);
  std::set<Word> image;
  bool into = true;
  for_each_allowed(map.source(), family, n, [&](const Word& w) { image.insert(map.apply(w)); }, limits);
  std::set<Word> target;
  for_each_allowed(map.target(), family, n, [&](const Word& w) { target.insert(w); }, limits);
  for (const auto& w : image) into = into && target.count(w) > 0;
  return into && image.size() == target.size();
}

/// Length-n words of the color-a subsystem (every top symbol equal to a): q^n.
inline BigInt subsystem_count(const Params& params, int color, std::int64_t n) {
  params.validate();
  if (color < 1 || color > params.p)
    throw usage_error("subsystem_count: color must lie in 1.." + std::to_string(params.p));
  if (n < 0) throw usage_error("subsystem_count: n must be >= 0");
  return ipow(params.q, static_cast<std::uint64_t>(n));
}

struct SubsystemEntry {
  int color = 0;
  int n = 0;
  BigInt count;
};

/// Outcome of the entropy-gap criterion. The verdict is read off the condition, not proved here.
struct DichotomyReport {
  Params params;
  std::string family;
  ConditionReport condition;
  bool intrinsically_ergodic = false;
  std::string verdict;
  std::vector<SubsystemEntry> subsystems;
  std::optional<GrowthWitness> witness;
};

inline DichotomyReport dichotomy_report(const Params& params, const RestrictionFamily& family, int sample_n = 8,
                                        int witness_n_max = 200) {
  if (!family.is_builtin()) throw usage_error("dichotomy_report: needs a built-in family (exact condition sum)");
  DichotomyReport rep;
  rep.params = params;
  rep.family = family.name();
  rep.condition = check_condition(params, family);
  if (rep.condition.verdict == Verdict::holds) {
    rep.intrinsically_ergodic = false;
    rep.verdict = "NOT intrinsically ergodic; " + std::to_string(params.p) +
                  " disjoint subsystems of entropy log q exhibited";
    for (int a = 1; a <= params.p; ++a) rep.subsystems.push_back({a, sample_n, subsystem_count(params, a, sample_n)});
  } else {
    rep.intrinsically_ergodic = true;
    rep.verdict = "intrinsically ergodic per the entropy-gap criterion; growth witness attached";
    rep.witness = growth_witness(params, family, witness_n_max);
  }
  return rep;
}

}  // namespace shiftlab
