#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shiftlab/error.hpp"
#include "shiftlab/exact.hpp"

namespace shiftlab {

// Product system over {a, b, c}: row i of a point lives in X_i, and b's persist downward.

inline void validate_abc(std::string_view word) {
  for (char ch : word)
    if (ch != 'a' && ch != 'b' && ch != 'c')
      throw usage_error(std::string("symbol '") + ch + "' is outside {a,b,c}");
}

/// 2^m·⌈log2(l+1)⌉, saturating at UINT64_MAX.
inline std::uint64_t xm_gap_bound(int m, std::uint64_t l) {
  const auto c = ceil_log2(l + 1);
  if (c == 0) return 0;
  if (m >= 63) return std::numeric_limits<std::uint64_t>::max();
  const unsigned __int128 v = (static_cast<unsigned __int128>(1) << m) * c;
  return v > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                       : static_cast<std::uint64_t>(v);
}

/// True iff `word` has no factor bc, cb, or x a^k y^l (x, y ∈ {b,c}, l >= 1,
/// 1 <= k <= 2^m⌈log2(l+1)⌉). Checking the maximal y-run after each bounded a-run suffices
/// because the bound grows with l. Such words extend by a^∞, so this is language membership.
inline bool xm_is_allowed(std::string_view word, int m) {
  if (m < 0) throw usage_error("xm_is_allowed: m must be >= 0");
  validate_abc(word);
  const auto n = word.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    if ((word[i] == 'b' && word[i + 1] == 'c') || (word[i] == 'c' && word[i + 1] == 'b')) return false;
  std::size_t i = 0;
  while (i < n) {
    if (word[i] != 'a') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && word[j] == 'a') ++j;
    if (i > 0 && j < n) {
      std::size_t end = j;
      while (end < n && word[end] == word[j]) ++end;
      if (j - i <= xm_gap_bound(m, end - j)) return false;
    }
    i = j;
  }
  return true;
}

/// rows × cols truncation of a point of the product space, over {a, b, c}.
class MatrixWindow {
 public:
  MatrixWindow() = default;
  MatrixWindow(std::size_t rows, std::size_t cols, char fill = 'a') : rows_(rows), cols_(cols), cells_(rows * cols, fill) {
    validate_abc(std::string_view(&fill, 1));
  }

  static MatrixWindow from_rows(const std::vector<std::string>& rows) {
    MatrixWindow w(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != w.cols_) throw usage_error("window rows must have equal length");
      validate_abc(rows[i]);
      std::copy(rows[i].begin(), rows[i].end(), w.cells_.begin() + static_cast<std::ptrdiff_t>(i * w.cols_));
    }
    return w;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  char at(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, char ch) { cells_[i * cols_ + j] = ch; }
  std::string_view row(std::size_t i) const { return std::string_view(cells_).substr(i * cols_, cols_); }

  std::vector<std::string> to_rows() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < rows_; ++i) out.emplace_back(row(i));
    return out;
  }

  friend bool operator==(const MatrixWindow&, const MatrixWindow&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::string cells_;
};

/// Row i lies in X_i and every entry below row i is b or equal to the entry above it.
inline bool window_valid(const MatrixWindow& w) {
  for (std::size_t i = 0; i < w.rows(); ++i) {
    if (!xm_is_allowed(w.row(i), static_cast<int>(std::min<std::size_t>(i, 64)))) return false;
    if (i == 0) continue;
    for (std::size_t j = 0; j < w.cols(); ++j)
      if (w.at(i, j) != 'b' && w.at(i, j) != w.at(i - 1, j)) return false;
  }
  return true;
}

/// Largest n with x(i, shift_x + j) = y(i, shift_y + j) for all in-window i + j < n.
/// With no disagreement the answer is capped at rows + (cols - shift) - 1.
inline std::int64_t agreement_depth_at(const MatrixWindow& x, std::size_t shift_x, const MatrixWindow& y,
                                       std::size_t shift_y, std::int64_t limit) {
  const auto rows = std::min(x.rows(), y.rows());
  const auto cols_x = x.cols() > shift_x ? x.cols() - shift_x : 0;
  const auto cols_y = y.cols() > shift_y ? y.cols() - shift_y : 0;
  const auto cols = std::min(cols_x, cols_y);
  std::int64_t depth = std::min<std::int64_t>(limit, static_cast<std::int64_t>(rows + cols) - 1);
  for (std::size_t i = 0; i < rows && static_cast<std::int64_t>(i) < depth; ++i)
    for (std::size_t j = 0; j < cols && static_cast<std::int64_t>(i + j) < depth; ++j)
      if (x.at(i, shift_x + j) != y.at(i, shift_y + j)) depth = static_cast<std::int64_t>(i + j);
  return std::max<std::int64_t>(depth, 0);
}

/// ρ(x, y) < 2^-n iff depth >= n.
inline std::int64_t rho_agreement_depth(const MatrixWindow& x, const MatrixWindow& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw usage_error("rho: window dimensions differ");
  return agreement_depth_at(x, 0, y, 0, std::numeric_limits<std::int64_t>::max());
}

/// Smallest n with 2^-n <= eps: depth >= n certifies ρ < 2^-n <= eps.
inline std::int64_t closeness_depth(const Rational& eps) {
  if (eps <= 0) throw usage_error("epsilon must be positive");
  std::int64_t n = 0;
  while (inverse_power_of_two(static_cast<std::uint64_t>(n)) > eps) ++n;
  return n;
}

/// Largest d with eps < 2^-d (0 when eps >= 1): ρ <= eps forces depth >= d.
inline std::int64_t forced_depth(const Rational& eps) {
  if (eps <= 0) throw usage_error("epsilon must be positive");
  std::int64_t d = 0;
  while (eps < inverse_power_of_two(static_cast<std::uint64_t>(d + 1))) ++d;
  return d;
}

/// Smallest n >= 1 with 2^-n < eps.
inline std::int64_t gap_scale(const Rational& eps) {
  if (eps <= 0 || eps > 1) throw usage_error("epsilon must lie in (0, 1]");
  std::int64_t n = 1;
  while (inverse_power_of_two(static_cast<std::uint64_t>(n)) >= eps) ++n;
  return n;
}

/// M_ε(l) = 2^m(⌈log2(l+m)⌉ + 1) + m with m = 2^n, n = gap_scale(ε).
inline std::uint64_t weak_gap_function(const Rational& eps, std::uint64_t l) {
  const auto n = gap_scale(eps);
  if (n > 5) throw resource_error("weak_gap_function: epsilon below 2^-5 overflows 64-bit gap lengths");
  const std::uint64_t m = std::uint64_t{1} << n;
  return (std::uint64_t{1} << m) * (ceil_log2(l + m) + 1) + m;
}

/// One orbit segment of a segment list: a source point window traced over columns [alpha, beta].
struct ProductSegment {
  MatrixWindow source;
  std::int64_t alpha = 0;
  std::int64_t beta = 0;
};

struct ProductGlue {
  MatrixWindow window;
  std::int64_t m = 0;       // rows copied from the sources
  std::int64_t period = 0;  // r = alpha_1 + beta_K + m
};

/// Glues segments whose gaps satisfy alpha_k - beta_{k-1} >= M_ε(beta_k - alpha_k) (beta_0 = 0).
///
/// Rows below m copy source k on columns with (j mod r) ∈ [alpha_k, beta_k + m] and hold a
/// elsewhere; rows from m down are all b. The output has m + 1 rows and `cols` columns (one
/// period by default).
inline ProductGlue weak_glue_product(std::span<const ProductSegment> segments, const Rational& eps,
                                     std::optional<std::size_t> cols = std::nullopt) {
  const auto n = gap_scale(eps);
  if (n > 5) throw resource_error("weak_glue_product: epsilon below 2^-5 needs 2^64-wide gaps");
  const std::int64_t m = std::int64_t{1} << n;
  std::int64_t prev_beta = 0;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const auto& s = segments[k];
    const auto label = "segment " + std::to_string(k + 1);
    if (s.alpha > s.beta) throw usage_error(label + ": alpha exceeds beta");
    if (s.alpha <= prev_beta) throw usage_error(label + ": alpha must exceed the previous beta");
    const auto need = weak_gap_function(eps, static_cast<std::uint64_t>(s.beta - s.alpha));
    if (static_cast<std::uint64_t>(s.alpha - prev_beta) < need)
      throw usage_error(label + ": gap " + std::to_string(s.alpha - prev_beta) + " is below M_eps = " + std::to_string(need));
    if (static_cast<std::int64_t>(s.source.rows()) < m || static_cast<std::int64_t>(s.source.cols()) <= s.beta + m)
      throw usage_error(label + ": source window too small (needs " + std::to_string(m) + " rows and " +
                        std::to_string(s.beta + m + 1) + " columns)");
    prev_beta = s.beta;
  }
  ProductGlue out;
  out.m = m;
  if (segments.empty()) {
    out.period = 1;
    out.window = MatrixWindow(static_cast<std::size_t>(m) + 1, cols.value_or(static_cast<std::size_t>(m) + 1), 'a');
    for (std::size_t j = 0; j < out.window.cols(); ++j) out.window.set(static_cast<std::size_t>(m), j, 'b');
    return out;
  }
  out.period = segments.front().alpha + segments.back().beta + m;
  const auto width = cols.value_or(static_cast<std::size_t>(out.period));
  out.window = MatrixWindow(static_cast<std::size_t>(m) + 1, width, 'a');
  for (std::size_t j = 0; j < width; ++j) {
    out.window.set(static_cast<std::size_t>(m), j, 'b');
    const auto jj = static_cast<std::int64_t>(j) % out.period;
    for (const auto& s : segments) {
      if (jj < s.alpha || jj > s.beta + m) continue;
      for (std::int64_t i = 0; i < m; ++i)
        out.window.set(static_cast<std::size_t>(i), j, s.source.at(static_cast<std::size_t>(i), static_cast<std::size_t>(jj)));
      break;
    }
  }
  return out;
}

struct TracingResult {
  bool ok = false;
  std::vector<std::int64_t> mistake_times;
};

/// Compares S^j y with S^j x for alpha <= j <= beta; time j is good when the agreement depth
/// reaches closeness_depth(eps). Passes when at most `mistake_budget` times are bad
/// (0 = exact tracing).
inline TracingResult verify_tracing(const MatrixWindow& y, const ProductSegment& seg, const Rational& eps,
                                    std::uint64_t mistake_budget = 0) {
  if (seg.alpha < 0 || seg.alpha > seg.beta) throw usage_error("verify_tracing: need 0 <= alpha <= beta");
  const auto depth = closeness_depth(eps);
  const auto need_cols = static_cast<std::size_t>(seg.beta + depth);
  const auto need_rows = static_cast<std::size_t>(depth);
  if (y.rows() < need_rows || seg.source.rows() < need_rows || y.cols() < need_cols || seg.source.cols() < need_cols)
    throw usage_error("window too small: tracing needs " + std::to_string(need_rows) + " rows and " +
                      std::to_string(need_cols) + " columns");
  TracingResult res;
  for (auto j = seg.alpha; j <= seg.beta; ++j) {
    const auto d = agreement_depth_at(y, static_cast<std::size_t>(j), seg.source, static_cast<std::size_t>(j), depth);
    if (d < depth) res.mistake_times.push_back(j);
  }
  res.ok = res.mistake_times.size() <= mistake_budget;
  return res;
}

/// Catalog mistake functions g(n, ε); none of them depends on ε.
class MistakeFunction {
 public:
  enum class Kind { sqrt, log, affine, zero };

  /// ⌈√n⌉
  static MistakeFunction sqrt_budget(Rational eps0 = 1) { return MistakeFunction(Kind::sqrt, std::move(eps0)); }
  /// ⌈log2(n+1)⌉
  static MistakeFunction log_budget(Rational eps0 = 1) { return MistakeFunction(Kind::log, std::move(eps0)); }
  /// Identically zero: no mistakes allowed.
  static MistakeFunction zero(Rational eps0 = 1) { return MistakeFunction(Kind::zero, std::move(eps0)); }
  /// ⌈c·n^α⌉ with c > 0, 0 <= α < 1.
  static MistakeFunction affine(double c, double alpha, Rational eps0 = 1) {
    if (!(c > 0) || !(alpha >= 0) || !(alpha < 1)) throw usage_error("affine mistake function needs c > 0 and 0 <= alpha < 1");
    MistakeFunction g(Kind::affine, std::move(eps0));
    g.c_ = c;
    g.alpha_ = alpha;
    return g;
  }

  static MistakeFunction from_name(std::string_view name, Rational eps0 = 1) {
    if (name == "sqrt") return sqrt_budget(std::move(eps0));
    if (name == "log") return log_budget(std::move(eps0));
    if (name == "zero") return zero(std::move(eps0));
    throw usage_error("unknown mistake function '" + std::string(name) + "' (expected sqrt, log or zero)");
  }

  Kind kind() const { return kind_; }
  const Rational& eps0() const { return eps0_; }
  double c() const { return c_; }
  double alpha() const { return alpha_; }

  std::string id() const {
    switch (kind_) {
      case Kind::sqrt: return "sqrt";
      case Kind::log: return "log";
      case Kind::zero: return "zero";
      case Kind::affine: return "affine";
    }
    return "unknown";
  }

  std::uint64_t operator()(std::uint64_t n, const Rational& /*eps*/) const {
    switch (kind_) {
      case Kind::zero: return 0;
      case Kind::sqrt: {
        const auto s = static_cast<std::uint64_t>(isqrt(static_cast<std::int64_t>(n)));
        return s * s == n ? s : s + 1;
      }
      case Kind::log: return ceil_log2(n + 1);
      case Kind::affine: return static_cast<std::uint64_t>(std::ceil(c_ * std::pow(static_cast<double>(n), alpha_)));
    }
    return 0;
  }

 private:
  MistakeFunction(Kind kind, Rational eps0) : kind_(kind), eps0_(std::move(eps0)) {
    if (eps0_ <= 0) throw usage_error("mistake function threshold eps0 must be positive");
  }

  Kind kind_;
  Rational eps0_;
  double c_ = 0.0;
  double alpha_ = 0.0;
};

namespace detail {

struct SmallFraction {
  unsigned __int128 num;
  unsigned __int128 den;

  explicit SmallFraction(const Rational& r) {
    const BigInt n = numerator_of(r);
    const BigInt d = denominator_of(r);
    const BigInt limit = BigInt(1) << 62;
    if (n <= 0 || n >= limit || d >= limit) throw resource_error("epsilon " + to_string(r) + " is too fine for the scanner");
    num = n.convert_to<std::uint64_t>();
    den = d.convert_to<std::uint64_t>();
  }

  /// value < m·eps
  bool below(std::uint64_t value, std::uint64_t m) const { return value * den < static_cast<unsigned __int128>(m) * num; }
};

/// T such that g(m) < m·eps for every m >= T, from the shape of each catalog function.
inline std::uint64_t analytic_tail_start(const MistakeFunction& g, const Rational& eps) {
  const SmallFraction f(eps);
  switch (g.kind()) {
    case MistakeFunction::Kind::zero: return 1;
    case MistakeFunction::Kind::sqrt: {
      // g = s on ((s-1)², s²]; ((s-1)²+1)eps - s is nondecreasing once s >= 1 + 1/(2 eps).
      auto s = static_cast<std::uint64_t>(1 + (f.den + 2 * f.num - 1) / (2 * f.num));
      while (!f.below(s, (s - 1) * (s - 1) + 1)) ++s;
      return (s - 1) * (s - 1) + 1;
    }
    case MistakeFunction::Kind::log: {
      // g = b on [2^(b-1), 2^b); b < 2^(b-1) eps propagates to every later b.
      for (std::uint64_t b = 1; b < 63; ++b)
        if (f.below(b, std::uint64_t{1} << (b - 1))) return std::uint64_t{1} << (b - 1);
      throw resource_error("k_g: epsilon too small for the log budget");
    }
    case MistakeFunction::Kind::affine: {
      // m·eps - c·m^α - 1 increases once m >= (cα/eps)^(1/(1-α)); past its first root ⌈c m^α⌉ < m eps.
      const double e = eps.convert_to<double>();
      const double c = g.c();
      const double a = g.alpha();
      const double start = std::max(1.0, std::ceil(std::pow(c * a / e, 1.0 / (1.0 - a))));
      auto good = [&](double m) { return c * std::pow(m, a) + 1 <= m * e; };
      double hi = start;
      while (!good(hi)) {
        hi *= 2;
        if (hi > 1e15) throw resource_error("k_g: affine tail beyond 1e15");
      }
      double lo = start;
      while (hi - lo > 1) {
        const double mid = std::floor((lo + hi) / 2);
        if (good(mid)) hi = mid; else lo = mid;
      }
      return static_cast<std::uint64_t>(hi) + 1;
    }
  }
  return 1;
}

}  // namespace detail

inline constexpr std::uint64_t kKgScanLimit = 200'000'000;

/// k_g(eps): least n >= 1 with g(m, eps) < m·eps for all m >= n. Exact below the analytic tail
/// start T, then re-scanned on [T, 4T].
inline std::uint64_t k_g(const MistakeFunction& g, const Rational& eps) {
  if (eps <= 0 || eps >= g.eps0())
    throw usage_error("k_g: epsilon " + to_string(eps) + " must lie in (0, " + to_string(g.eps0()) + ")");
  const detail::SmallFraction f(eps);
  const auto tail = detail::analytic_tail_start(g, eps);
  if (tail > kKgScanLimit / 4) throw resource_error("k_g: tail start " + std::to_string(tail) + " is beyond the scan limit");
  std::uint64_t last_fail = 0;
  for (std::uint64_t m = 1; m < tail; ++m)
    if (!f.below(g(m, eps), m)) last_fail = m;
  for (std::uint64_t m = tail; m <= 4 * tail; ++m)
    if (!f.below(g(m, eps), m))
      throw std::logic_error("k_g: tail bound violated at m=" + std::to_string(m) + " for " + g.id());
  return last_fail + 1;
}

}  // namespace shiftlab
