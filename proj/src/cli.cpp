#include "vope/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <regex>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"
#include "vope/borcherds.hpp"
#include "vope/engine.hpp"
#include "vope/error.hpp"
#include "vope/oracle.hpp"
#include "vope/parser.hpp"
#include "vope/render.hpp"
#include "vope/wick.hpp"

namespace vope {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public Error {
 public:
  using Error::Error;
};

enum class Format { text, json, latex };

struct Options {
  std::string format = "text";
  std::string preset = "auto";
  std::string algebra_file;
  std::optional<std::uint64_t> budget;
};

struct Command {
  std::string name;
  std::vector<std::string> args;
  std::string window = "-2..3,-2..3,-2..3";
  std::optional<int> cutoff;
  std::vector<std::string> bindings;
  std::vector<std::string> hw;
  int level = 6;
  std::string script;
};

bool additive(const std::string& cmd) {
  return cmd == "ope" || cmd == "nf" || cmd == "rp" || cmd == "wick-left" || cmd == "wick-right";
}

// positions of expression arguments
std::vector<std::size_t> expr_positions(const Command& c) {
  if (c.name == "rp") return {0, 2};
  std::vector<std::size_t> out(c.args.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = k;
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Algebra load_preset(const std::string& name) {
  if (name == "virasoro") return preset_virasoro();
  if (name == "su2") return preset_su2();
  if (name == "free-boson") return preset_free_boson();
  throw UsageError("unknown preset '" + name + "'");
}

// J^n selects su(2), a bare J the free boson, anything else Virasoro
std::string guess_preset(const std::string& text) {
  if (text.find("J^") != std::string::npos) return "su2";
  static const std::regex bare_j("(^|[^A-Za-z0-9])J([^A-Za-z0-9^]|$)");
  if (std::regex_search(text, bare_j)) return "free-boson";
  return "virasoro";
}

std::uint64_t parse_budget(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || s[0] == '-')
    throw UsageError("invalid step budget '" + s + "'");
  return v;
}

Window parse_window(const std::string& s) {
  static const std::regex re(
      R"(\s*(-?\d+)\.\.(-?\d+)\s*,\s*(-?\d+)\.\.(-?\d+)\s*,\s*(-?\d+)\.\.(-?\d+)\s*)");
  std::smatch m;
  if (!std::regex_match(s, m, re))
    throw UsageError("window must look like p1..p2,q1..q2,r1..r2, got '" + s + "'");
  int v[6];
  for (int k = 0; k < 6; ++k) {
    if (m[k + 1].length() > 4) throw UsageError("window bound out of range in '" + s + "'");
    v[k] = std::stoi(m[k + 1].str());
  }
  if (v[0] > v[1] || v[2] > v[3] || v[4] > v[5])
    throw UsageError("empty window range in '" + s + "'");
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

std::pair<std::string, Gaussian> parse_binding(const std::string& s) {
  auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError("binding must be name=value, got '" + s + "'");
  static const auto none = std::make_shared<const ParamSpace>(std::vector<std::string>{});
  try {
    return {s.substr(0, eq), parse_scalar(s.substr(eq + 1), none).to_constant()};
  } catch (const Error& e) {
    throw UsageError("bad value in '" + s + "': " + e.what());
  }
}

std::map<std::string, Gaussian> parse_bindings(const std::vector<std::string>& items) {
  std::map<std::string, Gaussian> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (part.empty()) continue;
      auto [k, v] = parse_binding(part);
      out[k] = v;
    }
  }
  return out;
}

// Split a script line into words; single or double quotes group.
std::vector<std::string> split_words(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool in_word = false;
  char quote = 0;
  for (char c : line) {
    if (quote) {
      if (c == quote)
        quote = 0;
      else
        cur += c;
    } else if (c == '"' || c == '\'') {
      quote = c;
      in_word = true;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (in_word) out.push_back(cur);
      cur.clear();
      in_word = false;
    } else {
      cur += c;
      in_word = true;
    }
  }
  if (quote) throw UsageError("unterminated quote");
  if (in_word) out.push_back(cur);
  return out;
}

Json terms_json(const Algebra& alg, const NormalForm& nf) {
  Json terms = Json::array();
  for (const auto& [m, c] : nf.terms())
    terms.push_back({{"coeff", c.to_string()}, {"monomial", to_text(alg, m)}});
  return terms;
}

Json nf_json(const Algebra& alg, const NormalForm& nf) {
  Json j;
  j["value"] = to_text(alg, nf);
  auto w = alg.weight(nf);
  j["weight"] = w ? Json(*w) : Json(nullptr);
  j["terms"] = terms_json(alg, nf);
  return j;
}

Json series_json(const Algebra& alg, const SingularSeries& s) {
  Json poles = Json::array();
  for (auto it = s.poles().rbegin(); it != s.poles().rend(); ++it)
    poles.push_back({{"order", it->first},
                     {"value", to_text(alg, it->second)},
                     {"terms", terms_json(alg, it->second)}});
  return poles;
}

std::string window_text(const Window& w) {
  auto r = [](int a, int b) { return "[" + std::to_string(a) + "," + std::to_string(b) + "]"; };
  return r(w.p_lo, w.p_hi) + "x" + r(w.q_lo, w.q_hi) + "x" + r(w.r_lo, w.r_hi);
}

// Label of an argument in `A(z) B(w)` displays.
std::string label(const std::string& s) {
  if (s.size() >= 2 && s.front() == ':' && s.back() == ':') return s;
  if (s.find_first_of(" +-*/") == std::string::npos) return s;
  return "(" + s + ")";
}

struct Outcome {
  std::map<std::string, int> indices;
  Json json;
  std::string text;
  std::string latex;
  bool ok = true;
};

class Session {
 public:
  Session(Options opts, std::ostream& out, std::ostream& err)
      : opts_(std::move(opts)), out_(out), err_(err) {}

  // Selects the algebra unless one is active; `hint` feeds the auto preset.
  void activate(const std::string& hint, const std::string& algebra_text = {}) {
    if (alg_) return;
    if (!algebra_text.empty()) {
      alg_ = parse_algebra(algebra_text);
    } else if (!opts_.algebra_file.empty()) {
      alg_ = parse_algebra(read_file(opts_.algebra_file));
    } else {
      alg_ = load_preset(opts_.preset == "auto" ? guess_preset(hint) : opts_.preset);
    }
    EngineOptions eo;
    if (const char* env = std::getenv("VOPE_STEP_BUDGET"); env && *env)
      eo.step_budget = parse_budget(env);
    if (opts_.budget) eo.step_budget = *opts_.budget;
    eng_ = std::make_unique<Engine>(*alg_, eo);
    scope_ = Scope::of(*alg_);
  }

  bool active() const { return alg_.has_value(); }

  void let(const std::string& name, const std::string& text) {
    static const std::regex ident("[A-Za-z][A-Za-z0-9]*");
    if (!std::regex_match(name, ident)) throw UsageError("invalid name '" + name + "'");
    if (scope_.generator(name) >= 0 || scope_.params->index_of(name) >= 0 || name == "d" ||
        name == "i" || name == "I" || name == "sum")
      throw UsageError("'" + name + "' is already taken");
    scope_.lets.insert_or_assign(name, parse_arg(text, scope_));
  }

  // Runs a command and prints it; returns the exit code.
  int run(const Command& cmd, Format fmt) {
    std::vector<Outcome> outcomes = evaluate(cmd);
    bool ok = std::all_of(outcomes.begin(), outcomes.end(), [](const Outcome& o) { return o.ok; });
    print(cmd, fmt, outcomes, ok);
    return ok ? exit_ok : exit_check_failed;
  }

 private:
  static Value parse_arg(const std::string& text, const Scope& scope) {
    try {
      return parse_value(text, scope);
    } catch (const ParseError& e) {
      throw UsageError("in '" + text + "': " + e.what());
    }
  }

  std::vector<Outcome> evaluate(const Command& cmd) {
    const auto pos = expr_positions(cmd);
    std::vector<std::string> args = cmd.args;

    // sum(v){...} whose variable also occurs in another argument: the
    // whole command is summed over v
    std::vector<std::string> lifted;
    std::vector<std::size_t> lifted_args;
    for (std::size_t p : pos) {
      auto s = split_sum(cmd.args[p]);
      if (!s) continue;
      bool linked = false;
      for (std::size_t q : pos) {
        if (q == p) continue;
        auto fi = free_indices_of(cmd.args[q], scope_);
        if (std::find(fi.begin(), fi.end(), s->first) != fi.end()) linked = true;
      }
      if (!linked) continue;
      if (!additive(cmd.name))
        throw UsageError("a sum over several arguments needs a linear command (ope, nf, rp, wick-*)");
      if (std::find(lifted.begin(), lifted.end(), s->first) == lifted.end())
        lifted.push_back(s->first);
      lifted_args.push_back(p);
      args[p] = s->second;
    }

    Scope probe = scope_;
    for (const auto& v : lifted) probe.indices[v] = 1;
    std::vector<std::string> free;
    for (std::size_t p : pos)
      for (const auto& v : free_indices_of(args[p], probe))
        if (std::find(free.begin(), free.end(), v) == free.end()) free.push_back(v);
    if ((!free.empty() || !lifted.empty()) && scope_.index_range <= 0)
      throw UsageError("index variables need indexed generators such as J^1");

    std::vector<Outcome> out;
    for_each_assignment(free, [&](const std::map<std::string, int>& fixed) {
      Scope s = scope_;
      for (const auto& [k, v] : fixed) s.indices[k] = v;
      Outcome o = lifted.empty() ? single(cmd, args, s)
                                 : summed(cmd, args, s, lifted, lifted_args);
      o.indices = fixed;
      out.push_back(std::move(o));
    });
    return out;
  }

  static std::vector<std::string> free_indices_of(const std::string& text, const Scope& scope) {
    try {
      return free_indices(text, scope);
    } catch (const ParseError& e) {
      throw UsageError("in '" + text + "': " + e.what());
    }
  }

  void for_each_assignment(const std::vector<std::string>& vars,
                           const std::function<void(const std::map<std::string, int>&)>& f) const {
    std::map<std::string, int> a;
    for (const auto& v : vars) a[v] = 1;
    while (true) {
      f(a);
      std::size_t k = vars.size();
      while (k > 0) {
        int& x = a[vars[k - 1]];
        if (x < scope_.index_range) {
          ++x;
          break;
        }
        x = 1;
        --k;
      }
      if (k == 0) return;
    }
  }

  NormalForm normal(const std::string& text, const Scope& s) {
    return eng_->normalize(parse_arg(text, s).field());
  }

  int rp_index(const Command& cmd) const {
    try {
      std::size_t used = 0;
      int m = std::stoi(cmd.args[1], &used);
      if (used == cmd.args[1].size()) return m;
    } catch (const std::exception&) {
    }
    throw UsageError("product index must be an integer, got '" + cmd.args[1] + "'");
  }

  using Algebraic = std::variant<NormalForm, SingularSeries>;

  Algebraic compute(const Command& cmd, const std::vector<std::string>& args, const Scope& s) {
    if (cmd.name == "nf") return normal(args[0], s);
    if (cmd.name == "rp") return eng_->residue_product(normal(args[0], s), rp_index(cmd), normal(args[2], s));
    NormalForm a = normal(args[0], s), b = normal(args[1], s);
    if (cmd.name == "ope") return SingularSeries::from_contraction(eng_->contraction(a, b));
    NormalForm c = normal(args[2], s);
    if (cmd.name == "wick-left") return wick_left(*eng_, a, b, c);
    return wick_right(*eng_, a, b, c);
  }

  // `A(z) B(w)` labels; arguments bound by a lifted sum keep their text
  std::pair<std::string, std::string> labels(const Command& cmd, const std::vector<std::string>& args,
                                             const Scope& s, const std::vector<std::size_t>& raw,
                                             const std::vector<std::string>& lifted) const {
    std::vector<std::string> shown(args.size());
    for (std::size_t k = 0; k < args.size(); ++k) {
      const auto fi = free_indices(args[k], scope_);
      const bool keep = fi.empty() || std::find(raw.begin(), raw.end(), k) != raw.end() ||
                        std::any_of(lifted.begin(), lifted.end(), [&](const std::string& v) {
                          return std::find(fi.begin(), fi.end(), v) != fi.end();
                        });
      shown[k] = keep ? args[k] : to_text(*alg_, parse_value(args[k], s).field());
    }
    if (cmd.name == "ope") return {label(shown[0]), label(shown[1])};
    if (cmd.name == "wick-left")
      return {label(shown[0]), ":" + label(shown[1]) + " " + label(shown[2]) + ":"};
    return {":" + label(shown[0]) + " " + label(shown[1]) + ":", label(shown[2])};
  }

  Outcome render(const Command& cmd, const Algebraic& v, std::pair<std::string, std::string> lab,
                 const std::string& prefix) const {
    Outcome o;
    if (const auto* nf = std::get_if<NormalForm>(&v)) {
      o.json = nf_json(*alg_, *nf);
      o.text = to_text(*alg_, *nf);
      o.latex = to_latex(*alg_, *nf);
    } else {
      const auto& series = std::get<SingularSeries>(v);
      o.json["left"] = lab.first;
      o.json["right"] = lab.second;
      o.json["poles"] = series_json(*alg_, series);
      o.text = prefix + to_text(*alg_, series, lab.first, lab.second);
      o.latex = to_latex(*alg_, series, lab.first, lab.second);
    }
    (void)cmd;
    return o;
  }

  Outcome summed(const Command& cmd, const std::vector<std::string>& args, const Scope& s,
                 const std::vector<std::string>& lifted, const std::vector<std::size_t>& lifted_args) {
    NormalForm nf;
    SingularSeries series;
    const bool is_nf = cmd.name == "nf" || cmd.name == "rp";
    for_each_assignment(lifted, [&](const std::map<std::string, int>& a) {
      Scope t = s;
      for (const auto& [k, v] : a) t.indices[k] = v;
      Algebraic v = compute(cmd, args, t);
      if (is_nf) {
        nf += std::get<NormalForm>(v);
      } else {
        for (const auto& [n, c] : std::get<SingularSeries>(v).poles()) series.add(n, c);
      }
    });
    std::string prefix;
    std::pair<std::string, std::string> lab;
    if (!is_nf) {
      lab = labels(cmd, args, s, lifted_args, lifted);
      for (const auto& v : lifted) {
        // wrap the side that carries v, or prefix the whole display
        const bool left = lab.first.find("^" + v) != std::string::npos;
        const bool right = lab.second.find("^" + v) != std::string::npos;
        if (left && !right)
          lab.first = "sum(" + v + "){" + lab.first + "}";
        else if (right && !left)
          lab.second = "sum(" + v + "){" + lab.second + "}";
        else
          prefix += "sum(" + v + ") ";
      }
    }
    if (is_nf) return render(cmd, nf, {}, {});
    return render(cmd, series, lab, prefix);
  }

  Outcome single(const Command& cmd, const std::vector<std::string>& args, const Scope& s) {
    if (additive(cmd.name)) {
      Algebraic v = compute(cmd, args, s);
      std::pair<std::string, std::string> lab;
      if (std::holds_alternative<SingularSeries>(v)) lab = labels(cmd, args, s, {}, {});
      return render(cmd, v, lab, {});
    }
    if (cmd.name == "check-borcherds") return borcherds(cmd, args, s);
    if (cmd.name == "check-algebra") return algebra_check(cmd);
    if (cmd.name == "oracle-verify") return oracle(cmd, args, s);
    throw UsageError("unknown command '" + cmd.name + "'");
  }

  Outcome borcherds(const Command& cmd, const std::vector<std::string>& args, const Scope& s) {
    const Window w = parse_window(cmd.window);
    NormalForm a = normal(args[0], s), b = normal(args[1], s), c = normal(args[2], s);
    BorcherdsReport rep = check_borcherds(*eng_, a, b, c, w);
    Outcome o;
    o.ok = rep.ok();
    o.json["ok"] = rep.ok();
    o.json["window"] = window_text(w);
    o.json["checked"] = rep.checked;
    o.json["checked_classical"] = rep.checked_classical;
    Json vs = Json::array();
    for (const auto& v : rep.violations)
      vs.push_back({{"p", v.p}, {"q", v.q}, {"r", v.r},
                    {"lhs", to_text(*alg_, v.sides.lhs)}, {"rhs", to_text(*alg_, v.sides.rhs)}});
    o.json["violations"] = vs;
    std::ostringstream t;
    if (rep.ok()) {
      t << "ok: Borcherds identity holds at all " << rep.checked << " (p,q,r) in "
        << window_text(w);
    } else {
      t << "FAILED: " << rep.violations.size() << " of " << rep.checked
        << " (p,q,r) violate the Borcherds identity";
      for (std::size_t k = 0; k < std::min<std::size_t>(rep.violations.size(), 10); ++k) {
        const auto& v = rep.violations[k];
        t << "\n  (" << v.p << "," << v.q << "," << v.r << "): lhs = " << to_text(*alg_, v.sides.lhs)
          << ", rhs = " << to_text(*alg_, v.sides.rhs);
      }
    }
    o.text = o.latex = t.str();
    return o;
  }

  Outcome algebra_check(const Command& cmd) {
    int cutoff = 0;
    for (const auto& g : alg_->generators()) cutoff = std::max(cutoff, g.weight);
    if (cmd.cutoff) cutoff = *cmd.cutoff;
    ConsistencyReport rep;
    try {
      rep = check_algebra_consistency(*alg_, cutoff, eng_->options());
    } catch (const AlgebraError& e) {
      throw UsageError(e.what());
    }
    Outcome o;
    o.ok = rep.ok();
    o.json["ok"] = rep.ok();
    o.json["cutoff"] = cutoff;
    o.json["checked"] = rep.checked;
    Json skew = Json::array();
    for (const auto& v : rep.skew)
      skew.push_back({{"left", alg_->name(v.left)}, {"right", alg_->name(v.right)}, {"m", v.m},
                      {"table", to_text(*alg_, v.table_value)},
                      {"skew", to_text(*alg_, v.skew_value)}});
    Json bor = Json::array();
    for (const auto& v : rep.borcherds)
      bor.push_back({{"a", alg_->name(v.a)}, {"b", alg_->name(v.b)}, {"c", alg_->name(v.c)},
                     {"p", v.v.p}, {"q", v.v.q}, {"r", v.v.r},
                     {"lhs", to_text(*alg_, v.v.sides.lhs)}, {"rhs", to_text(*alg_, v.v.sides.rhs)}});
    o.json["skew"] = skew;
    o.json["borcherds"] = bor;
    o.json["aborted"] = rep.aborted;
    std::ostringstream t;
    if (rep.ok()) {
      t << "ok: skew symmetry and Borcherds identity hold (" << rep.checked
        << " checks, cutoff " << cutoff << ")";
    } else {
      t << "FAILED: " << rep.skew.size() << " skew, " << rep.borcherds.size() << " Borcherds, "
        << rep.aborted.size() << " aborted of " << rep.checked << " checks";
      for (const auto& v : rep.skew)
        t << "\n  skew " << alg_->name(v.right) << "_(" << v.m << ") " << alg_->name(v.left)
          << ": table " << to_text(*alg_, v.table_value) << ", skew symmetry gives "
          << to_text(*alg_, v.skew_value);
      std::size_t shown = 0;
      for (const auto& v : rep.borcherds) {
        if (++shown > 10) break;
        t << "\n  Borcherds (" << alg_->name(v.a) << "," << alg_->name(v.b) << ","
          << alg_->name(v.c) << ") at (" << v.v.p << "," << v.v.q << "," << v.v.r
          << "): lhs = " << to_text(*alg_, v.v.sides.lhs)
          << ", rhs = " << to_text(*alg_, v.v.sides.rhs);
      }
      for (const auto& a : rep.aborted) t << "\n  aborted: " << a;
    }
    o.text = o.latex = t.str();
    return o;
  }

  Outcome oracle(const Command& cmd, const std::vector<std::string>& args, const Scope& s) {
    if (cmd.level < 0 || cmd.level > 10) throw UsageError("--level must be in 0..10");
    const Bindings b = parse_bindings(cmd.bindings);
    HighestWeight hw;
    for (const auto& [name, v] : parse_bindings(cmd.hw)) {
      if (alg_->generator_index(name) < 0) throw UsageError("--hw: unknown generator '" + name + "'");
      hw.zero_mode[name] = v;
    }
    const FieldExpr e = parse_arg(args[0], s).field();
    const NormalForm nf = eng_->normalize(e);
    GradedModule mod = build_module(*alg_, b, hw, cmd.level);
    OracleReport rep = verify_against_symbolic(nf, e, mod, cmd.level);

    Outcome o;
    o.ok = rep.ok();
    o.json["ok"] = rep.ok();
    o.json["normal_form"] = to_text(*alg_, nf);
    Json bj = Json::object();
    for (const auto& [k, v] : b) bj[k] = v.to_string();
    o.json["bindings"] = bj;
    o.json["level"] = cmd.level;
    Json dims = Json::array();
    for (int l = 0; l <= cmd.level; ++l) dims.push_back(mod.dim(l));
    o.json["dims"] = dims;
    o.json["checked"] = rep.checked;
    std::ostringstream t;
    if (rep.ok()) {
      o.json["mismatch"] = nullptr;
      t << "ok: modes of " << to_text(*alg_, nf) << " agree on " << rep.checked
        << " (n, state) pairs up to level " << cmd.level;
    } else {
      const auto& m = *rep.mismatch;
      o.json["mismatch"] = {{"n", m.n},
                            {"state", mod.label(m.state)},
                            {"expected", to_text(mod, m.expected)},
                            {"actual", to_text(mod, m.actual)}};
      t << "FAILED: mode " << m.n << " on " << mod.label(m.state) << ": expression gives "
        << to_text(mod, m.expected) << ", normal form gives " << to_text(mod, m.actual);
    }
    o.text = o.latex = t.str();
    return o;
  }

  void print(const Command& cmd, Format fmt, const std::vector<Outcome>& outcomes, bool ok) {
    auto prefix = [](const Outcome& o) {
      std::string p;
      for (const auto& [k, v] : o.indices) p += (p.empty() ? "[" : ",") + k + "=" + std::to_string(v);
      return p.empty() ? p : p + "] ";
    };
    if (fmt == Format::json) {
      Json doc;
      doc["schema"] = "vope-output/1";
      doc["command"] = cmd.name;
      doc["args"] = cmd.args;
      Json alg;
      alg["params"] = alg_->params()->names();
      Json gens = Json::array();
      for (const auto& g : alg_->generators()) gens.push_back({{"name", g.name}, {"weight", g.weight}});
      alg["generators"] = gens;
      doc["algebra"] = alg;
      doc["ok"] = ok;
      Json results = Json::array();
      for (const auto& o : outcomes) {
        Json r;
        r["indices"] = Json::object();
        for (const auto& [k, v] : o.indices) r["indices"][k] = v;
        for (const auto& [k, v] : o.json.items()) r[k] = v;
        results.push_back(r);
      }
      doc["results"] = results;
      out_ << doc.dump(2) << "\n";
      return;
    }
    for (const auto& o : outcomes) out_ << prefix(o) << (fmt == Format::latex ? o.latex : o.text) << "\n";
  }

  Options opts_;
  std::ostream& out_;
  std::ostream& err_;
  std::optional<Algebra> alg_;
  std::unique_ptr<Engine> eng_;
  Scope scope_;
};

// Fills `cmd` from argv-style words; throws CLI::Error.
void parse_command(CLI::App& app, std::vector<std::string> words) {
  std::reverse(words.begin(), words.end());
  app.parse(words);
}

std::unique_ptr<CLI::App> make_app(Options& opts, Command& cmd, bool script_line) {
  auto app = std::make_unique<CLI::App>("Exact OPE, normal-form and Borcherds-identity computations",
                                        "vope");
  app->require_subcommand(1);
  app->fallthrough();
  app->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"text", "json", "latex"}));
  if (!script_line) {
    app->add_option("--preset", opts.preset, "Built-in algebra")
        ->check(CLI::IsMember({"auto", "virasoro", "su2", "free-boson"}));
    app->add_option("--algebra", opts.algebra_file, "Algebra definition file");
    app->add_option("--budget", opts.budget, "Rewrite step budget per computation");
  }

  auto exprs = [&](CLI::App* sub, std::vector<std::string> names) {
    sub->add_option("args", cmd.args, "Expressions")->expected(static_cast<int>(names.size()))->required();
  };
  exprs(app->add_subcommand("ope", "Singular part of A(z) B(w)"), {"a", "b"});
  exprs(app->add_subcommand("nf", "Normal form of an expression"), {"e"});
  exprs(app->add_subcommand("rp", "Residue product a_(m) b"), {"a", "m", "b"});
  exprs(app->add_subcommand("wick-left", "Contraction of A(z) with :BC:(w)"), {"a", "b", "c"});
  exprs(app->add_subcommand("wick-right", "Contraction of :AB:(z) with C(w)"), {"a", "b", "c"});
  auto* cb = app->add_subcommand("check-borcherds", "Borcherds identity on a triple");
  exprs(cb, {"a", "b", "c"});
  cb->add_option("--window", cmd.window, "p1..p2,q1..q2,r1..r2");
  auto* ca = app->add_subcommand("check-algebra", "Skew symmetry and Borcherds identity of the OPE table");
  ca->add_option("--cutoff", cmd.cutoff, "Weight cutoff (default: largest generator weight)");
  auto* ov = app->add_subcommand("oracle-verify", "Compare modes of an expression and its normal form");
  exprs(ov, {"e"});
  ov->add_option("--bindings", cmd.bindings, "Parameter values, e.g. c=1/2")->required();
  ov->add_option("--level", cmd.level, "Level cutoff of the module");
  ov->add_option("--hw", cmd.hw, "Zero-mode eigenvalues on the highest-weight vector, e.g. T=0");
  if (!script_line) {
    auto* run = app->add_subcommand("run", "Run a script");
    run->add_option("file", cmd.script, "Script file")->required();
  }
  for (auto* sub : app->get_subcommands([](CLI::App*) { return true; })) sub->callback([&cmd, sub] { cmd.name = sub->get_name(); });
  return app;
}

Format format_of(const Options& o) {
  if (o.format == "json") return Format::json;
  if (o.format == "latex") return Format::latex;
  return Format::text;
}

int report(std::ostream& err, const std::string& where, const std::exception& e, int code) {
  err << "error: " << where << e.what() << "\n";
  return code;
}

template <typename F>
int guarded(std::ostream& err, const std::string& where, F&& f) {
  try {
    return f();
  } catch (const BudgetExceeded& e) {
    return report(err, where, e, exit_internal);
  } catch (const ParseError& e) {
    return report(err, where, e, exit_usage);
  } catch (const DomainError& e) {
    return report(err, where, e, exit_usage);
  } catch (const AlgebraError& e) {
    return report(err, where, e, exit_usage);
  } catch (const CutoffError& e) {
    return report(err, where, e, exit_usage);
  } catch (const UsageError& e) {
    return report(err, where, e, exit_usage);
  } catch (const std::exception& e) {
    return report(err, where, e, exit_internal);
  }
}

struct ScriptLine {
  std::size_t number;
  std::string text;
  bool open;  // inside an unclosed brace
};

// Logical lines: comments stripped, lines inside an open brace joined.
std::vector<ScriptLine> script_lines(const std::string& text) {
  std::vector<ScriptLine> out;
  std::stringstream ss(text);
  std::string raw;
  std::size_t n = 0;
  int depth = 0;
  while (std::getline(ss, raw)) {
    ++n;
    char quote = 0;
    std::string line;
    for (char c : raw) {
      if (quote) {
        if (c == quote) quote = 0;
      } else if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '#') {
        break;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}') {
        --depth;
      }
      line += c;
    }
    const bool continued = !out.empty() && out.back().open;
    if (continued)
      out.back().text += "\n" + line;
    else
      out.push_back({n, line, false});
    if (depth <= 0) depth = 0;
    out.back().open = depth > 0;
  }
  return out;
}

int run_script(const Options& opts, const std::string& path, std::ostream& out, std::ostream& err) {
  const std::string text = read_file(path);
  Session session(opts, out, err);
  std::string algebra_text;
  int worst = exit_ok;
  bool queries = false;
  std::size_t algebra_lines = 0;

  for (const auto& line : script_lines(text)) {
    const std::string where = path + ":" + std::to_string(line.number) + ": ";
    std::vector<std::string> words;
    int code = guarded(err, where, [&]() -> int {
      words = split_words(line.text);
      return exit_ok;
    });
    if (code != exit_ok) return code;
    if (words.empty()) continue;

    // `ope A B { ... }` is a statement, `ope A B` a query
    const bool statement = is_algebra_keyword(words[0]) &&
                           (words[0] != "ope" || line.text.find('{') != std::string::npos);
    if (statement) {
      if (queries) {
        err << "error: " << where << "algebra statements must come before queries\n";
        return exit_usage;
      }
      // pad so that parse errors report script line numbers
      for (; algebra_lines + 1 < line.number; ++algebra_lines) algebra_text += "\n";
      algebra_text += line.text + "\n";
      algebra_lines += 1 + static_cast<std::size_t>(std::count(line.text.begin(), line.text.end(), '\n'));
      continue;
    }
    if (!queries) {
      queries = true;
      code = guarded(err, path + ":", [&]() -> int {
        session.activate(text, algebra_text);
        return exit_ok;
      });
      if (code != exit_ok) return code;
    }

    code = guarded(err, where, [&]() -> int {
      if (words[0] == "let") {
        if (words.size() < 4 || words[2] != "=") throw UsageError("expected: let NAME = EXPR");
        std::string rhs;
        for (std::size_t k = 3; k < words.size(); ++k) rhs += (k > 3 ? " " : "") + words[k];
        session.let(words[1], rhs);
        return exit_ok;
      }
      Options o = opts;
      Command cmd;
      auto app = make_app(o, cmd, true);
      try {
        parse_command(*app, words);
      } catch (const CLI::Error& e) {
        throw UsageError(e.what());
      }
      if (cmd.name.empty()) throw UsageError("no command");
      return session.run(cmd, format_of(o));
    });
    if (code == exit_usage || code == exit_internal) return code;
    worst = std::max(worst, code);
  }
  return worst;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opts;
  Command cmd;
  auto app = make_app(opts, cmd, false);
  try {
    parse_command(*app, args);
  } catch (const CLI::CallForHelp& e) {
    out << app->help();
    return exit_ok;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }

  if (cmd.name == "run") return guarded(err, "", [&]() -> int { return run_script(opts, cmd.script, out, err); });
  return guarded(err, "", [&]() -> int {
    Session session(opts, out, err);
    std::string hint;
    for (const auto& a : cmd.args) hint += a + " ";
    session.activate(hint);
    return session.run(cmd, format_of(opts));
  });
}

}  // namespace vope
