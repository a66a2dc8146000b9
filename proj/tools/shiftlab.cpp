#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shiftlab/json.hpp"
#include "shiftlab/shiftlab.hpp"

namespace {

using shiftlab::io::json;
using namespace shiftlab;

enum Exit { kOk = 0, kViolated = 1, kUsage = 2, kResource = 3 };

struct Common {
  int p = 2;
  int q = 4;
  std::string family = "squares";
  std::string format;
  std::string out;
  bool force = false;
};

struct Emitter {
  const Common& common;

  void text(const std::string& body) const {
    if (common.out.empty()) {
      std::cout << body;
      return;
    }
    std::ofstream f(common.out);
    if (!f) throw usage_error("cannot write '" + common.out + "'");
    f << body;
  }

  void json_doc(const json& doc) const { text(doc.dump(2) + "\n"); }
};

unsigned thread_count() {
  if (const char* env = std::getenv("SHIFTLAB_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
    throw usage_error(std::string("SHIFTLAB_THREADS must be a positive integer, got '") + env + "'");
  }
  return 1;
}

EnumerationLimits limits_for(const Common& c, int n) {
  EnumerationLimits lim;
  lim.cap = 12;
  if (c.force) {
    if (n > lim.cap) std::cerr << "warning: --force lifts the enumeration cap; length " << n << " may take very long\n";
    lim.cap = std::max(lim.cap, n);
  }
  return lim;
}

Params params_of(const Common& c) {
  Params prm{c.p, c.q};
  prm.validate();
  return prm;
}

void add_common(CLI::App* cmd, Common& c, bool with_family = true) {
  cmd->add_option("--p", c.p, "number of colors")->capture_default_str();
  cmd->add_option("--q", c.q, "digits per color")->capture_default_str();
  if (with_family) cmd->add_option("--family", c.family, "squares, prefix, or a family table (JSON)")->capture_default_str();
  cmd->add_option("--format", c.format, "json, csv or text");
  cmd->add_option("--out", c.out, "write the report to this path instead of stdout");
  cmd->add_flag("--force", c.force, "lift the enumeration cap");
}

std::string format_or(const Common& c, const std::string& fallback, std::initializer_list<const char*> allowed) {
  const auto f = c.format.empty() ? fallback : c.format;
  for (const char* a : allowed)
    if (f == a) return f;
  throw usage_error("unsupported --format '" + f + "' for this command");
}

// ---- count ---------------------------------------------------------------

int run_count(const Common& c, int n, int brute) {
  const auto prm = params_of(c);
  const auto fam = io::resolve_family(c.family);
  const CountTable table(prm, fam, n);
  int mismatch = -1;
  if (brute > 0) {
    if (brute > n) throw usage_error("--brute-check must not exceed --n");
    const auto lim = limits_for(c, brute);
    for (int k = 0; k <= brute && mismatch < 0; ++k)
      if (BigInt(count_allowed_enumerated(prm, fam, k, lim, thread_count())) != table.allowed_count(k)) mismatch = k;
  }
  const auto fmt = format_or(c, "csv", {"csv", "json"});
  Emitter out{c};
  if (fmt == "csv") {
    std::ostringstream s;
    s << "n,F_n,G_n,B_n,log_B_n_over_n\n";
    for (int k = 1; k <= n; ++k) {
      const auto e = entropy_estimate(table, k);
      s << k << ',' << table.free_count(k) << ',' << table.good_count(k) << ',' << table.allowed_count(k) << ','
        << e.value << '\n';
    }
    out.text(s.str());
  } else {
    json rows = json::array();
    for (int k = 1; k <= n; ++k) {
      const auto e = entropy_estimate(table, k);
      rows.push_back(json{{"n", k},
                          {"F_n", table.free_count(k).str()},
                          {"G_n", table.good_count(k).str()},
                          {"B_n", table.allowed_count(k).str()},
                          {"log_B_n_over_n", e.value},
                          {"bracket_holds", e.bracket_holds}});
    }
    out.json_doc(json{{"params", io::to_json(prm)}, {"family", fam.name()}, {"rows", rows}, {"brute_checked_to", brute}});
  }
  if (mismatch >= 0) {
    std::cerr << "counting recurrence: enumeration disagrees with |B_n| at n=" << mismatch << '\n';
    return kViolated;
  }
  return kOk;
}

// ---- enumerate -----------------------------------------------------------

int run_enumerate(const Common& c, int n) {
  const auto prm = params_of(c);
  const auto fam = io::resolve_family(c.family);
  const auto words = enumerate_allowed(prm, fam, n, limits_for(c, n));
  const auto fmt = format_or(c, "text", {"text", "json"});
  Emitter out{c};
  if (fmt == "text") {
    std::ostringstream s;
    for (const auto& w : words) s << format_word(w) << '\n';
    out.text(s.str());
  } else {
    json arr = json::array();
    for (const auto& w : words) arr.push_back(format_word(w));
    out.json_doc(json{{"n", n}, {"count", words.size()}, {"words", arr}});
  }
  return kOk;
}

// ---- gaps ----------------------------------------------------------------

int run_gaps(const Common& c, int k_max, std::int64_t bound) {
  format_or(c, "json", {"json"});
  const auto fam = io::resolve_family(c.family);
  const auto profile = weak_spec_report(fam, k_max, bound > 0 ? std::optional<std::int64_t>(bound) : std::nullopt);
  json doc = io::to_json(profile);
  json t = json::array();
  for (const auto& row : profile.rows) t.push_back(json{{"n", row.k}, {"t_n", weak_transition_length(fam, row.k, bound > 0 ? std::optional<std::int64_t>(bound) : std::nullopt)}});
  doc["transition_lengths"] = t;
  Emitter{c}.json_doc(doc);
  return kOk;
}

// ---- condition / dichotomy ----------------------------------------------

int run_condition(const Common& c, std::int64_t cutoff) {
  format_or(c, "json", {"json"});
  const auto rep = check_condition(params_of(c), io::resolve_family(c.family), cutoff);
  Emitter{c}.json_doc(io::to_json(rep));
  return kOk;
}

int run_dichotomy(const Common& c, int sample_n, int witness_n) {
  format_or(c, "json", {"json"});
  const auto prm = params_of(c);
  const auto fam = io::resolve_family(c.family);
  auto rep = dichotomy_report(prm, fam, sample_n, witness_n);
  json doc = io::to_json(rep);
  doc["entropy_comparison"] = io::to_json(entropy_compare(prm, fam, witness_n));
  Emitter{c}.json_doc(doc);
  if (rep.condition.verdict == Verdict::fails && !rep.witness) {
    std::cerr << "growth witness: no (N, z) found up to n=" << witness_n << '\n';
    return kViolated;
  }
  return kOk;
}

// ---- glue ----------------------------------------------------------------

int run_glue(const Common& c, const std::string& mode, const std::vector<std::string>& texts) {
  format_or(c, "json", {"json"});
  const auto prm = params_of(c);
  const auto fam = io::resolve_family(c.family);
  std::vector<Word> words;
  for (const auto& t : texts) words.push_back(parse_word(t, prm));
  if (words.empty()) throw usage_error("glue: give at least one --word");
  GlueResult res;
  bool ok = true;
  std::string failed;
  if (mode == "almost") {
    res = almost_glue(prm, fam, words);
    for (std::size_t i = 0; i < words.size(); ++i)
      if (res.mistakes[i] > theta(fam, static_cast<std::int64_t>(words[i].size()))) {
        ok = false;
        failed = "almost-spec mistake bound theta(n) = r(n-1)+1 exceeded on segment " + std::to_string(i + 1);
      }
  } else if (mode == "weak") {
    res = weak_glue_all(prm, fam, words);
  } else {
    throw usage_error("glue: --mode must be almost or weak");
  }
  if (ok && !is_allowed(prm, fam, res.output)) {
    ok = false;
    failed = "glued word is not allowed";
  }
  json doc = io::to_json(res);
  doc["mode"] = mode;
  doc["allowed"] = ok;
  Emitter{c}.json_doc(doc);
  if (!ok) {
    std::cerr << failed << '\n';
    return kViolated;
  }
  return kOk;
}

// ---- ct-check ------------------------------------------------------------

int run_ct_check(const Common& c, const std::string& word_text, int M, int max_len, int pairs, std::uint64_t seed) {
  format_or(c, "json", {"json"});
  const auto prm = params_of(c);
  const auto fam = io::resolve_family(c.family);
  Emitter out{c};
  if (!word_text.empty()) {
    const auto w = parse_word(word_text, prm);
    const auto d = decompose(prm, fam, w);
    Word joined = d.prefix;
    joined.insert(joined.end(), d.core.begin(), d.core.end());
    const bool round_trip = joined == w && is_monochromatic(d.prefix) && (d.core.empty() || is_good(prm, fam, d.core));
    json doc{{"word", format_word(w)}, {"decomposition", io::to_json(d)}, {"condition_I", round_trip}};
    bool ext_ok = true;
    if (static_cast<int>(d.prefix.size()) <= M) {
      const auto ext = extend_to_good(prm, fam, w, M);
      Word ext_w = ext.prefix;
      ext_w.insert(ext_w.end(), w.begin(), w.end());
      ext_ok = is_good(prm, fam, ext_w) && static_cast<std::int64_t>(ext.prefix.size()) <= ext.tau;
      doc["extension"] = json{{"prefix", format_word(ext.prefix)}, {"tau", ext.tau}, {"ok", ext_ok}};
    } else {
      doc["extension"] = nullptr;
    }
    out.json_doc(doc);
    if (!round_trip) std::cerr << "CT condition (I): decomposition does not reassemble\n";
    if (!ext_ok) std::cerr << "CT condition (III): extension is not good within tau = N_{M+1}+1\n";
    return round_trip && ext_ok ? kOk : kViolated;
  }

  const auto lim = limits_for(c, max_len);
  std::int64_t checked_I = 0, failed_I = 0, checked_III = 0, failed_III = 0;
  for (int n = 1; n <= max_len; ++n) {
    for (const auto& w : enumerate_allowed(prm, fam, n, lim)) {
      const auto d = decompose(prm, fam, w);
      Word joined = d.prefix;
      joined.insert(joined.end(), d.core.begin(), d.core.end());
      ++checked_I;
      failed_I += !(joined == w && is_monochromatic(d.prefix) && (d.core.empty() || is_good(prm, fam, d.core)));
      for (int m = static_cast<int>(d.prefix.size()); m <= M; ++m) {
        const auto ext = extend_to_good(prm, fam, w, m);
        Word e = ext.prefix;
        e.insert(e.end(), w.begin(), w.end());
        ++checked_III;
        failed_III += !(is_good(prm, fam, e) && static_cast<std::int64_t>(ext.prefix.size()) <= ext.tau);
      }
    }
  }
  std::mt19937_64 rng(seed);
  std::vector<Word> goods;
  for (int n = 1; n <= std::min(max_len, 5); ++n)
    for (const auto& w : enumerate_allowed(prm, fam, n, lim))
      if (is_good(prm, fam, w)) goods.push_back(w);
  std::int64_t failed_II = 0;
  for (int i = 0; i < pairs && !goods.empty(); ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, goods.size() - 1);
    const Word pair[2] = {goods[pick(rng)], goods[pick(rng)]};
    failed_II += !check_cond_II(prm, fam, pair);
  }
  out.json_doc(json{{"params", io::to_json(prm)},
                    {"family", fam.name()},
                    {"max_length", max_len},
                    {"M", M},
                    {"condition_I", json{{"checked", checked_I}, {"failed", failed_I}}},
                    {"condition_II", json{{"checked", goods.empty() ? 0 : pairs}, {"failed", failed_II}, {"seed", seed}}},
                    {"condition_III", json{{"checked", checked_III}, {"failed", failed_III}}}});
  if (failed_I) std::cerr << "CT condition (I) failed on " << failed_I << " words\n";
  if (failed_II) std::cerr << "CT condition (II) failed on " << failed_II << " pairs\n";
  if (failed_III) std::cerr << "CT condition (III) failed on " << failed_III << " cases\n";
  return failed_I || failed_II || failed_III ? kViolated : kOk;
}

// ---- factor --------------------------------------------------------------

int run_factor(const Common& c, int p_from, int p_to, int n_max) {
  format_or(c, "json", {"json"});
  const auto fam = io::resolve_family(c.family);
  json rows = json::array();
  bool ok = true;
  for (int n = 1; n <= n_max; ++n) {
    const bool onto = verify_factor_language(p_from, p_to, c.q, fam, n, limits_for(c, n));
    ok = ok && onto;
    rows.push_back(json{{"n", n}, {"image_equals_target", onto}});
  }
  Emitter{c}.json_doc(json{{"p_from", p_from}, {"p_to", p_to}, {"q", c.q}, {"family", fam.name()}, {"rows", rows}});
  if (!ok) {
    std::cerr << "factor map: image of B_n differs from the target language\n";
    return kViolated;
  }
  return kOk;
}

// ---- counterexample ------------------------------------------------------

int run_cx_glue(const Common& c, const std::string& eps_text, const std::string& spec_path) {
  format_or(c, "json", {"json"});
  const auto eps = parse_rational(eps_text);
  const auto spec = io::read_json_file(spec_path);
  std::vector<ProductSegment> segments;
  std::optional<std::size_t> cols;
  try {
    segments = io::product_spec_from_json(spec);
    if (spec.contains("cols")) cols = spec.at("cols").get<std::size_t>();
  } catch (const json::exception& e) {
    throw usage_error(std::string("malformed segment list: ") + e.what());
  }
  const auto glued = weak_glue_product(segments, eps, cols);
  const bool valid = window_valid(glued.window);
  json tracing = json::array();
  bool traced = true;
  for (const auto& seg : segments) {
    const bool fits = glued.window.cols() >= static_cast<std::size_t>(seg.beta + closeness_depth(eps));
    if (!fits) {
      tracing.push_back(nullptr);
      continue;
    }
    const auto t = verify_tracing(glued.window, seg, eps);
    traced = traced && t.ok;
    tracing.push_back(io::to_json(t));
  }
  Emitter{c}.json_doc(json{{"eps", io::to_json(eps)},
                           {"m", glued.m},
                           {"period", glued.period},
                           {"window", io::to_json(glued.window)},
                           {"window_valid", valid},
                           {"tracing", tracing}});
  if (!valid) std::cerr << "glued window violates the X_m rules or b persistence\n";
  if (!traced) std::cerr << "glued window does not trace every segment within eps\n";
  return valid && traced ? kOk : kViolated;
}

int run_cx_refute(const Common& c, const std::string& g_name, const std::string& eps0_text) {
  format_or(c, "json", {"json"});
  const auto g = MistakeFunction::from_name(g_name, parse_rational(eps0_text));
  const auto cert = refute_almost_spec(g);
  const auto replay = replay_certificate(cert);
  Emitter{c}.json_doc(json{{"certificate", io::to_json(cert)}, {"replay", io::to_json(replay)}});
  if (!replay.ok) {
    for (const auto& s : replay.steps)
      if (!s.ok) std::cerr << "refutation step " << s.id << " failed: " << s.detail << '\n';
    return kViolated;
  }
  return kOk;
}

// ---- config --------------------------------------------------------------

/// Appends flags from a JSON config for every key not already given on the command line.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") path = args[i + 1];
  for (const auto& a : args)
    if (a.rfind("--config=", 0) == 0) path = a.substr(9);
  if (path.empty()) return args;
  const auto cfg = io::read_json_file(path);
  if (!cfg.is_object()) throw usage_error("config file must hold a JSON object of flag values");
  std::set<std::string> given;
  for (const auto& a : args)
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  for (const auto& [key, value] : cfg.items()) {
    if (given.count(key) || key == "config") continue;
    const auto flag = "--" + key;
    auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array()) {
      for (const auto& v : value) {
        args.push_back(flag);
        args.push_back(scalar(v));
      }
    } else {
      args.push_back(flag);
      args.push_back(scalar(value));
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shiftlab: exact computations on the X_R shift family and the product counterexample"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON file of flag values; command-line flags win");
  std::function<int()> action;

  Common common;
  int n = 20, brute = 0, k_max = 20, sample_n = 8, witness_n = 200, M = 4, max_len = 4, pairs = 1000;
  int p_from = 3, p_to = 2;
  std::int64_t cutoff = 64, bound = 0;
  std::uint64_t seed = 20240601;
  std::string mode = "almost", word, eps = "0.3", spec, g_name = "sqrt", eps0 = "1";
  std::vector<std::string> words;

  auto* count = app.add_subcommand("count", "exact F_n, G_n, |B_n| table");
  add_common(count, common);
  count->add_option("--n", n, "largest length")->capture_default_str();
  count->add_option("--brute-check", brute, "compare |B_n| with enumeration for n <= K");
  count->callback([&] { action = [&] { return run_count(common, n, brute); }; });

  auto* cond = app.add_subcommand("condition", "evaluate 1 + p*sum q^-r(j) <= q");
  add_common(cond, common);
  cond->add_option("--cutoff", cutoff, "partial-sum cutoff")->capture_default_str();
  cond->callback([&] { action = [&] { return run_condition(common, cutoff); }; });

  auto* gaps = app.add_subcommand("gaps", "gap indices N_k, ratios k/N_k and transition lengths t(n)");
  add_common(gaps, common);
  gaps->add_option("--k-max", k_max, "largest k")->capture_default_str();
  gaps->add_option("--bound", bound, "search bound for N_k (default: automatic)");
  gaps->callback([&] { action = [&] { return run_gaps(common, k_max, bound); }; });

  auto* glue = app.add_subcommand("glue", "glue allowed words (almost: edits, weak: transitions)");
  add_common(glue, common);
  glue->add_option("--mode", mode, "almost or weak")->capture_default_str();
  glue->add_option("--word", words, "word such as \"1:2 1:0 O 2:3\"; repeat for each segment");
  glue->callback([&] { action = [&] { return run_glue(common, mode, words); }; });

  auto* ct = app.add_subcommand("ct-check", "check the decomposition conditions (I), (II), (III)");
  add_common(ct, common);
  ct->add_option("--word", word, "check a single word");
  ct->add_option("--M", M, "prefix length bound")->capture_default_str();
  ct->add_option("--max-length", max_len, "exhaustive word length")->capture_default_str();
  ct->add_option("--pairs", pairs, "random good pairs for (II)")->capture_default_str();
  ct->add_option("--seed", seed, "seed for (II) sampling")->capture_default_str();
  ct->callback([&] { action = [&] { return run_ct_check(common, word, M, max_len, pairs, seed); }; });

  auto* factor = app.add_subcommand("factor", "check the color-merge factor map on B_n");
  add_common(factor, common, true);
  factor->add_option("--p-from", p_from, "source colors")->capture_default_str();
  factor->add_option("--p-to", p_to, "target colors")->capture_default_str();
  factor->add_option("--n", n, "largest length")->capture_default_str();
  factor->callback([&] { action = [&] { return run_factor(common, p_from, p_to, n); }; });

  auto* dich = app.add_subcommand("dichotomy", "entropy-gap criterion with subsystem counts or growth witness");
  add_common(dich, common);
  dich->add_option("--sample-n", sample_n, "subsystem word length")->capture_default_str();
  dich->add_option("--witness-n-max", witness_n, "range for the growth witness")->capture_default_str();
  dich->callback([&] { action = [&] { return run_dichotomy(common, sample_n, witness_n); }; });

  auto* enumerate = app.add_subcommand("enumerate", "list allowed words of length n");
  add_common(enumerate, common);
  enumerate->add_option("--n", n, "word length")->required();
  enumerate->callback([&] { action = [&] { return run_enumerate(common, n); }; });

  auto* cx = app.add_subcommand("counterexample", "the product system over {a,b,c}");
  cx->require_subcommand(1);
  auto* cx_glue = cx->add_subcommand("glue", "glue orbit segments by the periodic formula");
  add_common(cx_glue, common, false);
  cx_glue->add_option("--eps", eps, "epsilon in (0, 1]")->capture_default_str();
  cx_glue->add_option("--spec", spec, "JSON file listing the segments")->required();
  cx_glue->callback([&] { action = [&] { return run_cx_glue(common, eps, spec); }; });
  auto* cx_ref = cx->add_subcommand("refute", "certificate that no mistake function works");
  add_common(cx_ref, common, false);
  cx_ref->add_option("--g", g_name, "sqrt, log or zero")->capture_default_str();
  cx_ref->add_option("--eps0", eps0, "threshold eps0")->capture_default_str();
  cx_ref->callback([&] { action = [&] { return run_cx_refute(common, g_name, eps0); }; });

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
    if (common.force) std::cerr << "warning: --force given; resource caps are relaxed\n";
    return action ? action() : kUsage;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const resource_error& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return kResource;
  } catch (const search_failure& e) {
    std::cerr << "search failed: " << e.what() << '\n';
    return kViolated;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kViolated;
  }
}
