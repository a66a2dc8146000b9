#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <future>
#include <optional>
#include <vector>

#include "shiftlab/core.hpp"

namespace shiftlab {

/// Color tag plus class flags of a word.
///
/// `color` is empty for the empty word and for polychromatic words.
struct WordClass {
  bool monochromatic = true;
  std::optional<int> color;
  bool restricted = false;
  bool free = false;
  bool good = false;
  bool allowed = false;
};

inline bool is_monochromatic(const Word& w) {
  return std::all_of(w.begin(), w.end(), [&](Symbol s) { return s.color == w.front().color; });
}

namespace detail {

// Assumes symbols already validated.
inline bool restricted_unchecked(const RestrictionFamily& family, const Word& w, std::size_t begin,
                                 std::size_t end) {
  if (begin == end) return true;
  const int color = w[begin].color;
  if (color == 0) return false;
  const auto n = static_cast<std::int64_t>(end - begin);
  family.require_within_horizon(n);
  for (std::size_t i = begin; i < end; ++i) {
    if (w[i].color != color) return false;
    if (w[i].digit != 0 && family.entry(static_cast<std::int64_t>(i - begin) + 1) <= n) return false;
  }
  return true;
}

inline bool good_unchecked(const RestrictionFamily& family, const Word& w, std::size_t begin) {
  if (begin == w.size()) return true;
  if (!w[begin].is_marker()) return false;
  std::size_t seg = begin + 1;
  for (std::size_t i = begin + 1; i <= w.size(); ++i) {
    if (i == w.size() || w[i].is_marker()) {
      if (!restricted_unchecked(family, w, seg, i)) return false;
      seg = i + 1;
    }
  }
  return true;
}

inline std::size_t first_marker(const Word& w) {
  return static_cast<std::size_t>(std::find_if(w.begin(), w.end(), [](Symbol s) { return s.is_marker(); }) -
                                  w.begin());
}

}  // namespace detail

/// Monochromatic of a color in 1..p with digit 0 at every position of R_{|W|}; the empty word counts.
inline bool is_restricted(const Params& params, const RestrictionFamily& family, const Word& w) {
  validate_word(params, w);
  return detail::restricted_unchecked(family, w, 0, w.size());
}

/// O followed by a (possibly empty) restricted word.
inline bool is_free(const Params& params, const RestrictionFamily& family, const Word& w) {
  validate_word(params, w);
  return !w.empty() && w.front().is_marker() && detail::restricted_unchecked(family, w, 1, w.size());
}

/// Concatenation of free words. Every free word holds exactly one marker, at its start, so the
/// split is forced: cut before each O and test each piece.
inline bool is_good(const Params& params, const RestrictionFamily& family, const Word& w) {
  validate_word(params, w);
  return detail::good_unchecked(family, w, 0);
}

/// A marker-free monochromatic prefix followed by a good word.
inline bool is_allowed(const Params& params, const RestrictionFamily& family, const Word& w) {
  validate_word(params, w);
  const auto i = detail::first_marker(w);
  for (std::size_t k = 1; k < i; ++k)
    if (w[k].color != w[0].color) return false;
  return detail::good_unchecked(family, w, i);
}

inline WordClass classify(const Params& params, const RestrictionFamily& family, const Word& w) {
  validate_word(params, w);
  WordClass c;
  c.monochromatic = is_monochromatic(w);
  if (c.monochromatic && !w.empty()) c.color = w.front().color;
  c.restricted = detail::restricted_unchecked(family, w, 0, w.size());
  c.free = !w.empty() && w.front().is_marker() && detail::restricted_unchecked(family, w, 1, w.size());
  c.good = detail::good_unchecked(family, w, 0);
  c.allowed = is_allowed(params, family, w);
  return c;
}

/// Left-to-right recognizer for the allowed words.
///
/// Inside a free block only two numbers matter: the length L of its restricted part and the
/// smallest entry(j) over positions carrying a nonzero digit. The part stays restricted while
/// L is below that entry, and once it fails it can never recover, so "dead" is absorbing.
class LanguageScanner {
 public:
  enum class Phase : std::uint8_t { empty, prefix, good, dead };

  struct State {
    Phase phase = Phase::empty;
    int color = 0;
    std::int64_t length = 0;
    std::int64_t min_entry = kNever;
    friend auto operator<=>(const State&, const State&) = default;
  };

  LanguageScanner(const Params& params, const RestrictionFamily& family)
      : params_(&params), family_(&family) {}

  bool push(Symbol s) {
    if (!symbol_in_alphabet(*params_, s)) validate_word(*params_, Word{s});
    switch (state_.phase) {
      case Phase::dead: return false;
      case Phase::empty:
        if (s.is_marker()) {
          open_block();
        } else {
          state_.phase = Phase::prefix;
          state_.color = s.color;
        }
        return true;
      case Phase::prefix:
        if (s.is_marker()) {
          open_block();
        } else if (s.color != state_.color) {
          state_ = State{Phase::dead};
        }
        return alive();
      case Phase::good:
        if (s.is_marker()) {
          open_block();
          return true;
        }
        if (state_.color == 0) state_.color = s.color;
        if (s.color != state_.color) {
          state_ = State{Phase::dead};
          return false;
        }
        ++state_.length;
        family_->require_within_horizon(state_.length);
        if (s.digit != 0) state_.min_entry = std::min(state_.min_entry, family_->entry(state_.length));
        if (state_.length >= state_.min_entry) state_ = State{Phase::dead};
        return alive();
    }
    return false;
  }

  bool push(const Word& w) {
    for (Symbol s : w)
      if (!push(s)) return false;
    return alive();
  }

  bool alive() const { return state_.phase != Phase::dead; }
  const State& state() const { return state_; }

 private:
  void open_block() { state_ = State{Phase::good, 0, 0, kNever}; }

  const Params* params_;
  const RestrictionFamily* family_;
  State state_;
};

struct EnumerationLimits {
  int cap = 10;
};

namespace detail {

inline void check_enumeration_length(int n, const EnumerationLimits& limits) {
  if (n < 0) throw usage_error("enumeration length must be >= 0");
  if (n > limits.cap)
    throw resource_error("enumeration of length " + std::to_string(n) + " exceeds the cap " +
                         std::to_string(limits.cap));
}

template <class Visitor>
void extend_allowed(const std::vector<Symbol>& symbols, const LanguageScanner& scanner, Word& prefix,
                    std::size_t n, Visitor& visit) {
  if (prefix.size() == n) {
    visit(static_cast<const Word&>(prefix));
    return;
  }
  for (Symbol s : symbols) {
    LanguageScanner next = scanner;
    if (!next.push(s)) continue;
    prefix.push_back(s);
    extend_allowed(symbols, next, prefix, n, visit);
    prefix.pop_back();
  }
}

}  // namespace detail

/// Visits every allowed word of length n exactly once, in lexicographic order.
///
/// Depth-first over allowed prefixes; this relies on the language being factorial, which the
/// test suite checks independently.
template <class Visitor>
void for_each_allowed(const Params& params, const RestrictionFamily& family, int n, Visitor&& visit,
                      EnumerationLimits limits = {}) {
  detail::check_enumeration_length(n, limits);
  family.require_within_horizon(n);
  const auto symbols = alphabet(params);
  Word prefix;
  prefix.reserve(static_cast<std::size_t>(n));
  LanguageScanner scanner(params, family);
  detail::extend_allowed(symbols, scanner, prefix, static_cast<std::size_t>(n), visit);
}

inline std::vector<Word> enumerate_allowed(const Params& params, const RestrictionFamily& family, int n,
                                           EnumerationLimits limits = {}) {
  std::vector<Word> out;
  for_each_allowed(params, family, n, [&](const Word& w) { out.push_back(w); }, limits);
  return out;
}

/// Counts allowed n-words by enumeration, sharding on the first symbol across `threads` workers.
inline std::uint64_t count_allowed_enumerated(const Params& params, const RestrictionFamily& family, int n,
                                              EnumerationLimits limits = {}, unsigned threads = 1) {
  detail::check_enumeration_length(n, limits);
  family.require_within_horizon(n);
  if (n == 0) return 1;
  const auto symbols = alphabet(params);
  auto count_shard = [&](std::size_t first, std::size_t stride) {
    std::uint64_t total = 0;
    auto tally = [&](const Word&) { ++total; };
    for (std::size_t i = first; i < symbols.size(); i += stride) {
      LanguageScanner scanner(params, family);
      if (!scanner.push(symbols[i])) continue;
      Word prefix{symbols[i]};
      detail::extend_allowed(symbols, scanner, prefix, static_cast<std::size_t>(n), tally);
    }
    return total;
  };
  threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(symbols.size()));
  if (threads == 1) return count_shard(0, 1);
  std::vector<std::future<std::uint64_t>> shards;
  for (unsigned t = 0; t < threads; ++t) shards.push_back(std::async(std::launch::async, count_shard, t, threads));
  std::uint64_t total = 0;
  for (auto& f : shards) total += f.get();
  return total;
}

}  // namespace shiftlab
