#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "shiftlab/core.hpp"
#include "shiftlab/counting.hpp"
#include "shiftlab/ct_decomp.hpp"
#include "shiftlab/exact.hpp"
#include "shiftlab/factor.hpp"
#include "shiftlab/product.hpp"
#include "shiftlab/refute.hpp"
#include "shiftlab/refute_check.hpp"
#include "shiftlab/spec_certify.hpp"

namespace shiftlab::io {

using json = nlohmann::json;  // std::map-backed, so keys come out sorted

inline json to_json(const Rational& r) {
  return json{{"num", numerator_of(r).str()}, {"den", denominator_of(r).str()}};
}

inline json to_json(const BigInt& x) { return x.str(); }

inline Rational rational_from_json(const json& j) {
  if (j.is_object()) return Rational(BigInt(j.at("num").get<std::string>()), BigInt(j.at("den").get<std::string>()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw usage_error("expected a rational as {num, den}, a string or an integer");
}

inline json to_json(const Params& p) { return json{{"p", p.p}, {"q", p.q}}; }

inline json to_json(const ConditionReport& r) {
  json out{{"params", to_json(r.params)},
           {"family", r.family},
           {"verdict", to_string(r.verdict)},
           {"lhs_partial", to_json(r.lhs_partial)},
           {"cutoff", r.cutoff}};
  out["lhs_exact"] = r.lhs_exact ? to_json(*r.lhs_exact) : json(nullptr);
  out["tail_bound"] = r.tail_bound ? to_json(*r.tail_bound) : json(nullptr);
  return out;
}

inline json to_json(const GrowthWitness& w) {
  return json{{"N", w.N}, {"z", to_json(w.z)}, {"verified_range", w.verified_range}};
}

inline json to_json(const GapProfile& g) {
  json rows = json::array();
  for (const auto& r : g.rows) rows.push_back(json{{"k", r.k}, {"N_k", r.gap_index}, {"ratio", to_json(r.ratio)}});
  return json{{"family", g.family},
              {"rows", rows},
              {"min_ratio", to_json(g.min_ratio)},
              {"max_ratio", to_json(g.max_ratio)},
              {"trend", g.trend}};
}

inline json to_json(const GlueResult& g) {
  return json{{"output", format_word(g.output)}, {"mistakes", g.mistakes}, {"transitions", g.transitions}};
}

inline json to_json(const Decomposition& d) {
  return json{{"prefix", format_word(d.prefix)}, {"core", format_word(d.core)}, {"suffix", format_word(d.suffix)}};
}

inline json to_json(const EntropyComparison& c) {
  json rows = json::array();
  for (const auto& r : c.rows) rows.push_back(json{{"n", r.n}, {"log_growth", r.log_growth}, {"G_n_le_q_pow_n", r.below_q_power}});
  json out{{"params", to_json(c.params)}, {"family", c.family}, {"log_q", c.log_q}, {"rows", rows}, {"condition", to_json(c.condition)}};
  out["witness"] = c.witness ? to_json(*c.witness) : json(nullptr);
  return out;
}

inline json to_json(const DichotomyReport& d) {
  json subs = json::array();
  for (const auto& s : d.subsystems) subs.push_back(json{{"color", s.color}, {"n", s.n}, {"count", to_json(s.count)}});
  json out{{"params", to_json(d.params)},
           {"family", d.family},
           {"condition", to_json(d.condition)},
           {"intrinsically_ergodic", d.intrinsically_ergodic},
           {"verdict", d.verdict},
           {"subsystems", subs}};
  out["witness"] = d.witness ? to_json(*d.witness) : json(nullptr);
  return out;
}

inline json to_json(const MatrixWindow& w) { return json(w.to_rows()); }

inline MatrixWindow window_from_json(const json& j) {
  if (!j.is_array()) throw usage_error("a window must be an array of row strings");
  return MatrixWindow::from_rows(j.get<std::vector<std::string>>());
}

inline json to_json(const TracingResult& t) { return json{{"ok", t.ok}, {"mistake_times", t.mistake_times}}; }

/// {"segments": [{"source": [rows...], "alpha": a, "beta": b}, ...], "cols": optional}
inline std::vector<ProductSegment> product_spec_from_json(const json& j) {
  std::vector<ProductSegment> out;
  for (const auto& s : j.at("segments"))
    out.push_back(ProductSegment{window_from_json(s.at("source")), s.at("alpha").get<std::int64_t>(), s.at("beta").get<std::int64_t>()});
  return out;
}

inline json to_json(const WindowConstraint& c) {
  return json{{"kind", c.kind},
              {"rows", json::array({c.row_lo, c.row_hi})},
              {"cols", json::array({c.col_lo.str(), c.col_hi.str()})},
              {"block", c.block.str()},
              {"symbols", c.symbols}};
}

inline json to_json(const RefutationCertificate& c) {
  const auto& p = c.params;
  json params{{"n", p.n}, {"eps", to_json(p.eps)}, {"N", p.N}, {"M", p.M}, {"eps1", to_json(p.eps1)}, {"m", p.m}, {"s", to_json(p.s)}};
  json bounds = json::object();
  for (const auto& [name, value] : c.boundaries) bounds[name] = value.str();
  json steps = json::array();
  for (const auto& s : c.steps)
    steps.push_back(json{{"id", s.id}, {"rule", s.rule}, {"statement", s.statement}, {"premises", s.premises}, {"constraint", to_json(s.constraint)}});
  return json{{"mistake_function", c.g.id()},
              {"eps0", to_json(c.g.eps0())},
              {"params", params},
              {"boundary_formula", c.boundary_formula},
              {"boundaries", bounds},
              {"window", json{{"rows", c.window_rows}, {"cols", c.window_cols.str()}}},
              {"steps", steps},
              {"contradiction", json{{"between", json::array({c.contradiction.first, c.contradiction.second})},
                                     {"statement", c.contradiction.statement}}}};
}

inline json to_json(const ReplayResult& r) {
  json steps = json::array();
  for (const auto& s : r.steps) steps.push_back(json{{"id", s.id}, {"ok", s.ok}, {"detail", s.detail}});
  return json{{"ok", r.ok}, {"steps", steps}};
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw usage_error("'" + path + "' is not valid JSON: " + e.what());
  }
}

/// {"kind": "custom-table", "horizon": H, "entries": [[j, e], ...]}; unlisted j <= H are never special.
inline RestrictionFamily family_from_json(const json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "squares" || kind == "prefix") return builtin_family(kind);
    if (kind != "custom-table") throw usage_error("unknown family kind '" + kind + "'");
    std::vector<std::pair<std::int64_t, std::int64_t>> entries;
    for (const auto& e : j.at("entries")) entries.emplace_back(e.at(0).get<std::int64_t>(), e.at(1).get<std::int64_t>());
    return RestrictionFamily::custom(j.at("horizon").get<std::int64_t>(), entries);
  } catch (const json::exception& e) {
    throw usage_error(std::string("malformed family table: ") + e.what());
  }
}

/// A built-in family name, or a path to a family table.
inline RestrictionFamily resolve_family(const std::string& spec) {
  if (spec == "squares" || spec == "prefix") return builtin_family(spec);
  if (!std::filesystem::exists(spec)) throw usage_error("unknown family '" + spec + "' (expected squares, prefix or a table path)");
  return family_from_json(read_json_file(spec));
}

}  // namespace shiftlab::io
