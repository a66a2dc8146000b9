#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shiftlab/error.hpp"
#include "shiftlab/exact.hpp"

namespace shiftlab {

/// Number of nonzero colors p and number of digits q.
struct Params {
  int p = 2;
  int q = 4;

  Params() = default;
  Params(int colors, int digits) : p(colors), q(digits) { validate(); }

  void validate() const {
    if (p < 2 || q < 2) throw usage_error("parameters require p >= 2 and q >= 2");
    if (p > 1024 || q > 1024) throw usage_error("parameters above 1024 are not supported");
  }

  /// 1 + p*q symbols: the marker plus every (color, digit) with color in 1..p.
  int alphabet_size() const { return 1 + p * q; }

  friend bool operator==(const Params&, const Params&) = default;
};

/// One column of a two-row word: color on top, digit underneath.
struct Symbol {
  int color = 0;
  int digit = 0;

  constexpr bool is_marker() const { return color == 0; }
  friend constexpr auto operator<=>(const Symbol&, const Symbol&) = default;
};

inline constexpr Symbol kMarker{0, 0};

using Word = std::vector<Symbol>;

inline bool symbol_in_alphabet(const Params& params, Symbol s) {
  if (s.color == 0) return s.digit == 0;
  return s.color >= 1 && s.color <= params.p && s.digit >= 0 && s.digit < params.q;
}

inline void validate_word(const Params& params, const Word& w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!symbol_in_alphabet(params, w[i])) {
      throw usage_error("symbol " + std::to_string(w[i].color) + ":" + std::to_string(w[i].digit) +
                        " at position " + std::to_string(i + 1) + " is outside the alphabet (p=" +
                        std::to_string(params.p) + ", q=" + std::to_string(params.q) + ")");
    }
  }
}

/// Alphabet in lexicographic (color, digit) order; the marker comes first.
inline std::vector<Symbol> alphabet(const Params& params) {
  std::vector<Symbol> out;
  out.reserve(static_cast<std::size_t>(params.alphabet_size()));
  out.push_back(kMarker);
  for (int a = 1; a <= params.p; ++a)
    for (int d = 0; d < params.q; ++d) out.push_back(Symbol{a, d});
  return out;
}

inline std::size_t symbol_index(const Params& params, Symbol s) {
  return s.is_marker() ? 0 : 1 + static_cast<std::size_t>((s.color - 1) * params.q + s.digit);
}

/// Renders a word as space-separated "c:d" tokens with the marker written as "O".
inline std::string format_word(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    if (w[i].is_marker()) {
      out += 'O';
    } else {
      out += std::to_string(w[i].color);
      out += ':';
      out += std::to_string(w[i].digit);
    }
  }
  return out;
}

inline Word parse_word(std::string_view text) {
  Word w;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    if (token == "O") {
      w.push_back(kMarker);
      continue;
    }
    const auto colon = token.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == token.size())
      throw usage_error("bad symbol token '" + token + "' (expected c:d or O)");
    try {
      std::size_t used_c = 0;
      std::size_t used_d = 0;
      const std::string c = token.substr(0, colon);
      const std::string d = token.substr(colon + 1);
      const int color = std::stoi(c, &used_c);
      const int digit = std::stoi(d, &used_d);
      if (used_c != c.size() || used_d != d.size()) throw std::invalid_argument(token);
      w.push_back(Symbol{color, digit});
    } catch (const std::logic_error&) {
      throw usage_error("bad symbol token '" + token + "' (expected c:d or O)");
    }
  }
  return w;
}

inline Word parse_word(std::string_view text, const Params& params) {
  Word w = parse_word(text);
  validate_word(params, w);
  return w;
}

enum class FamilyKind { squares, prefix, custom_table };

inline constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::max();

/// Nested special-position sets R_1 ⊆ R_2 ⊆ ..., encoded by entry(j) = min{n : j ∈ R_n}.
///
/// Positions are 1-based. Built-in families are unbounded; a custom table carries a horizon
/// and every query past it is refused.
class RestrictionFamily {
 public:
  /// R_n = [1, n] ∩ {k²}.
  static RestrictionFamily squares() { return RestrictionFamily(FamilyKind::squares); }
  /// R_n = {1, ..., ⌊√n⌋}.
  static RestrictionFamily prefix() { return RestrictionFamily(FamilyKind::prefix); }

  /// entries: (j, entry(j)) pairs; positions not listed never become special.
  static RestrictionFamily custom(std::int64_t horizon,
                                  const std::vector<std::pair<std::int64_t, std::int64_t>>& entries) {
    if (horizon < 1) throw usage_error("custom family: horizon must be >= 1");
    if (horizon > 10'000'000) throw resource_error("custom family: horizon above 10^7");
    RestrictionFamily f(FamilyKind::custom_table);
    f.horizon_ = horizon;
    f.entries_.assign(static_cast<std::size_t>(horizon) + 1, kNever);
    for (const auto& [j, e] : entries) {
      if (j < 1 || j > horizon)
        throw usage_error("custom family: position " + std::to_string(j) + " outside 1.." +
                          std::to_string(horizon));
      if (e < j)
        throw usage_error("custom family: entry(" + std::to_string(j) + ") = " + std::to_string(e) +
                          " is below its position");
      if (f.entries_[static_cast<std::size_t>(j)] != kNever)
        throw usage_error("custom family: duplicate position " + std::to_string(j));
      f.entries_[static_cast<std::size_t>(j)] = e > horizon ? kNever : e;
    }
    if (f.entries_[1] != 1) throw usage_error("custom family: entry(1) must equal 1 (R_1 = {1})");

    f.r_.assign(static_cast<std::size_t>(horizon) + 1, 0);
    f.max_.assign(static_cast<std::size_t>(horizon) + 1, 0);
    for (std::int64_t j = 1; j <= horizon; ++j) {
      const auto e = f.entries_[static_cast<std::size_t>(j)];
      if (e != kNever) {
        f.r_[static_cast<std::size_t>(e)] += 1;
        auto& m = f.max_[static_cast<std::size_t>(e)];
        m = std::max(m, j);
      }
    }
    for (std::int64_t n = 1; n <= horizon; ++n) {
      const auto i = static_cast<std::size_t>(n);
      f.r_[i] += f.r_[i - 1];
      f.max_[i] = std::max(f.max_[i], f.max_[i - 1]);
    }
    return f;
  }

  FamilyKind kind() const { return kind_; }
  bool is_builtin() const { return kind_ != FamilyKind::custom_table; }

  std::string name() const {
    switch (kind_) {
      case FamilyKind::squares: return "squares";
      case FamilyKind::prefix: return "prefix";
      case FamilyKind::custom_table: return "custom-table";
    }
    return "unknown";
  }

  std::optional<std::int64_t> horizon() const {
    if (kind_ == FamilyKind::custom_table) return horizon_;
    return std::nullopt;
  }

  void require_within_horizon(std::int64_t n) const {
    if (kind_ == FamilyKind::custom_table && n > horizon_)
      throw usage_error("custom family: length " + std::to_string(n) + " is beyond the horizon " +
                        std::to_string(horizon_));
  }

  /// entry(j) for j >= 1, kNever when j never becomes special.
  std::int64_t entry(std::int64_t j) const {
    if (j < 1) throw usage_error("entry: position must be >= 1");
    switch (kind_) {
      case FamilyKind::squares: return is_perfect_square(j) ? j : kNever;
      case FamilyKind::prefix: return j > 3'037'000'499 ? kNever : j * j;
      case FamilyKind::custom_table:
        require_within_horizon(j);
        return entries_[static_cast<std::size_t>(j)];
    }
    return kNever;
  }

  /// j ∈ R_n.
  bool special(std::int64_t j, std::int64_t n) const {
    if (n < 1 || j < 1 || j > n)
      throw usage_error("special: need 1 <= j <= n (got j=" + std::to_string(j) +
                        ", n=" + std::to_string(n) + ")");
    require_within_horizon(n);
    return entry(j) <= n;
  }

  /// r(n) = |R_n|, with r(0) = 0.
  std::int64_t r(std::int64_t n) const {
    if (n < 0) throw usage_error("r: length must be >= 0");
    if (n == 0) return 0;
    require_within_horizon(n);
    if (kind_ == FamilyKind::custom_table) return r_[static_cast<std::size_t>(n)];
    return isqrt(n);
  }

  /// max R_n; R_1 = {1} keeps this well defined for n >= 1.
  std::int64_t max_special(std::int64_t n) const {
    if (n < 1) throw usage_error("max_special: length must be >= 1");
    require_within_horizon(n);
    switch (kind_) {
      case FamilyKind::squares: {
        const auto s = isqrt(n);
        return s * s;
      }
      case FamilyKind::prefix: return isqrt(n);
      case FamilyKind::custom_table: return max_[static_cast<std::size_t>(n)];
    }
    return 1;
  }

  /// Finite (j, entry) listing up to the horizon, used for serialization.
  std::vector<std::pair<std::int64_t, std::int64_t>> custom_entries() const {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (std::int64_t j = 1; j <= horizon_ && kind_ == FamilyKind::custom_table; ++j)
      if (entries_[static_cast<std::size_t>(j)] != kNever) out.emplace_back(j, entries_[static_cast<std::size_t>(j)]);
    return out;
  }

 private:
  explicit RestrictionFamily(FamilyKind kind) : kind_(kind) {}

  FamilyKind kind_;
  std::int64_t horizon_ = 0;
  std::vector<std::int64_t> entries_;
  std::vector<std::int64_t> r_;
  std::vector<std::int64_t> max_;
};

inline RestrictionFamily builtin_family(std::string_view name) {
  if (name == "squares") return RestrictionFamily::squares();
  if (name == "prefix") return RestrictionFamily::prefix();
  throw usage_error("unknown family '" + std::string(name) + "' (expected squares or prefix)");
}

}  // namespace shiftlab
