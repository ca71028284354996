#include "dtlf/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "dtlf/evalsem.hpp"
#include "dtlf/findom.hpp"
#include "dtlf/logic.hpp"
#include "dtlf/subtype.hpp"
#include "json.hpp"

namespace dtlf::cli {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void apply_bases(syntax::BaseRegistry& reg, const std::string& bases) {
  for (const auto& line : split_on(bases, ';')) {
    if (line.empty()) continue;
    std::istringstream is(line);
    std::vector<std::string> words;
    std::string w;
    while (is >> w) words.push_back(w);
    if (words.size() < 4 || words[0] != "base" || words[2] != "=")
      throw Error("malformed base declaration: " + line);
    if (reg.has(words[1])) continue;
    reg.declare(words[1], {words.begin() + 3, words.end()});
  }
}

std::string lower_str(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

const char* verdict_name(checker::Verdict::Kind k) {
  switch (k) {
    case checker::Verdict::Kind::Derivable: return "Derivable";
    case checker::Verdict::Kind::Unknown: return "Unknown";
    default: return "IllTyped";
  }
}

std::string describe_error(const Error& e) {
  std::string s = e.what();
  if (e.pos >= 0) s += " (at offset " + std::to_string(e.pos) + ")";
  return s;
}

CmdResult error_result(const Error& e) { return {2, "error: " + describe_error(e) + "\n"}; }

json trace_json(const checker::Verdict& v) {
  json arr = json::array();
  for (const auto& s : v.trace)
    arr.push_back({{"rule", s.rule}, {"note", s.note}, {"premises", s.premises}});
  return arr;
}

// Exhaustive conjunctive formulas of a bounded size, ordered ASTs
// deduplicated by print. Size is the node count of the formula tree.
class ConjGen {
 public:
  explicit ConjGen(const syntax::BaseRegistry& reg) : reg_(reg) {}

  std::vector<logic::FormulaPtr> all(const syntax::TypePtr& tau, int max_size) {
    std::vector<logic::FormulaPtr> out;
    std::set<std::string> seen;
    for (int s = 1; s <= max_size; ++s)
      for (const auto& f : exact(tau, s))
        if (seen.insert(logic::print_formula(f)).second) out.push_back(f);
    return out;
  }

 private:
  const syntax::BaseRegistry& reg_;
  std::map<std::string, std::vector<logic::FormulaPtr>> memo_;

  const std::vector<logic::FormulaPtr>& exact(const syntax::TypePtr& tau, int s) {
    std::string key = syntax::print_type(tau) + "#" + std::to_string(s);
    auto hit = memo_.find(key);
    if (hit != memo_.end()) return hit->second;
    std::vector<logic::FormulaPtr> out;
    if (s == 1) {
      out.push_back(logic::f_true());
      out.push_back(logic::f_false());
      if (tau->kind == syntax::PureType::Kind::Base)
        for (const auto& c : reg_.carrier(tau->name))
          out.push_back(logic::mk_atomf(tau->name, c));
    } else if (s >= 2) {
      if (tau->kind == syntax::PureType::Kind::Prod) {
        for (const auto& f : exact(tau->left, s - 1)) out.push_back(logic::mk_pi1f(f));
        for (const auto& f : exact(tau->right, s - 1)) out.push_back(logic::mk_pi2f(f));
      }
      if (tau->kind == syntax::PureType::Kind::Rec) {
        syntax::TypePtr un = syntax::unfold_rec(tau);
        for (const auto& f : exact(un, s - 1)) out.push_back(logic::mk_foldf(f));
      }
      if (tau->kind == syntax::PureType::Kind::Arrow) {
        for (int a = 1; a <= s - 2; ++a)
          for (const auto& p : exact(tau->left, a))
            for (const auto& q : exact(tau->right, s - 1 - a))
              out.push_back(logic::mk_arrowf(p, q));
      }
      // n-ary conjunctions over size compositions
      std::vector<logic::FormulaPtr> stack;
      build_ands(tau, s - 1, 0, stack, out);
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

  void build_ands(const syntax::TypePtr& tau, int budget, int depth,
                  std::vector<logic::FormulaPtr>& stack,
                  std::vector<logic::FormulaPtr>& out) {
    if (budget == 0) {
      if (depth >= 2) out.push_back(logic::mk_andf(stack));
      return;
    }
    for (int part = 1; part <= budget - (depth < 1 ? 1 : 0); ++part) {
      if (budget - part == 0 && depth + 1 < 2) continue;
      for (const auto& f : exact(tau, part)) {
        stack.push_back(f);
        build_ands(tau, budget - part, depth + 1, stack, out);
        stack.pop_back();
      }
    }
  }
};

}  // namespace

syntax::BaseRegistry make_registry(const RunConfig& cfg) {
  syntax::BaseRegistry reg;
  apply_bases(reg, cfg.bases);
  return reg;
}

CmdResult cmd_entail(const std::string& tau_s, const std::string& psi_s,
                     const std::string& phi_s, const RunConfig& cfg) {
  try {
    auto reg = make_registry(cfg);
    auto tau = syntax::parse_type(tau_s, reg);
    auto psi = logic::parse_formula(psi_s, reg);
    auto phi = logic::parse_formula(phi_s, reg);
    logic::validate_formula(tau, psi, reg);
    logic::validate_formula(tau, phi, reg);
    auto psi_t = logic::truncate(psi, cfg.opts.k);
    auto phi_t = logic::truncate(phi, cfg.opts.k);
    bool ent = logic::entail_fin(tau, psi_t, phi_t, reg);

    auto compiled_str = [&](const logic::FormulaPtr& f) -> std::string {
      auto c = logic::compile(tau, f, reg);
      return c.empty() ? "EMPTY" : findom::to_sexp(*c.up);
    };

    if (cfg.json) {
      json lhs = json::array(), rhs = json::array();
      for (const auto& c : logic::dnf_clauses(tau, psi_t, reg))
        lhs.push_back({{"formula", logic::print_formula(c)}, {"d", compiled_str(c)}});
      for (const auto& clause : logic::cnf_clauses(tau, phi_t, reg)) {
        json row = json::array();
        for (const auto& c : clause)
          row.push_back({{"formula", logic::print_formula(c)}, {"d", compiled_str(c)}});
        rhs.push_back(row);
      }
      json j = {{"cmd", "entail"},
                {"k", cfg.opts.k},
                {"verdict", ent ? "entails" : "not-entails"},
                {"lhs", lhs},
                {"rhs", rhs}};
      return {ent ? 0 : 1, j.dump(2) + "\n"};
    }
    std::ostringstream os;
    os << (ent ? "ENTAILS" : "NOT-ENTAILS") << '\n';
    int i = 0;
    for (const auto& c : logic::dnf_clauses(tau, psi_t, reg))
      os << "  lhs[" << i++ << "] " << logic::print_formula(c) << "  d=" << compiled_str(c)
         << '\n';
    i = 0;
    for (const auto& clause : logic::cnf_clauses(tau, phi_t, reg)) {
      int l = 0;
      for (const auto& c : clause)
        os << "  rhs[" << i << "][" << l++ << "] " << logic::print_formula(c)
           << "  d=" << compiled_str(c) << '\n';
      ++i;
    }
    return {ent ? 0 : 1, os.str()};
  } catch (const Error& e) {
    return error_result(e);
  }
}

CmdResult cmd_consistent(const std::string& tau_s, const std::string& phi_s,
                         const RunConfig& cfg) {
  try {
    auto reg = make_registry(cfg);
    auto tau = syntax::parse_type(tau_s, reg);
    auto phi = logic::parse_formula(phi_s, reg);
    logic::validate_formula(tau, phi, reg);
    auto phi_t = logic::truncate(phi, cfg.opts.k);
    if (logic::classify(phi_t) != logic::FormulaClass::Conjunctive)
      throw Error("formula is not in the conjunctive fragment after truncation: " +
                  logic::print_formula(phi_t));
    auto c = logic::compile(tau, phi_t, reg);
    if (cfg.json) {
      json j = {{"cmd", "consistent"},
                {"k", cfg.opts.k},
                {"verdict", c.empty() ? "inconsistent" : "consistent"}};
      if (!c.empty()) j["d"] = findom::to_sexp(*c.up);
      return {c.empty() ? 1 : 0, j.dump(2) + "\n"};
    }
    if (c.empty()) return {1, "INCONSISTENT\n"};
    return {0, "CONSISTENT d=" + findom::to_sexp(*c.up) + "\n"};
  } catch (const Error& e) {
    return error_result(e);
  }
}

CmdResult cmd_compile(const std::string& tau_s, const std::string& phi_s,
                      const RunConfig& cfg) {
  try {
    auto reg = make_registry(cfg);
    auto tau = syntax::parse_type(tau_s, reg);
    auto phi = logic::parse_formula(phi_s, reg);
    logic::validate_formula(tau, phi, reg);
    auto phi_t = logic::truncate(phi, cfg.opts.k);
    if (logic::classify(phi_t) != logic::FormulaClass::Conjunctive)
      throw Error("formula is not in the conjunctive fragment after truncation: " +
                  logic::print_formula(phi_t));
    auto c = logic::compile(tau, phi_t, reg);
    std::string d = c.empty() ? "EMPTY" : findom::to_sexp(*c.up);
    if (cfg.json) {
      json j = {{"cmd", "compile"}, {"k", cfg.opts.k}, {"d", d}};
      return {c.empty() ? 1 : 0, j.dump(2) + "\n"};
    }
    return {c.empty() ? 1 : 0, d + "\n"};
  } catch (const Error& e) {
    return error_result(e);
  }
}

CmdResult cmd_check(const std::string& path, const RunConfig& cfg) {
  try {
    auto file = checker::parse_judgment_file(read_file(path));
    apply_bases(file.reg, cfg.bases);
    std::ostringstream os;
    json cases = json::array();
    bool any_unknown = false, any_illtyped = false;
    for (const auto& jc : file.cases) {
      checker::CheckOptions opts = jc.has_opts ? jc.opts : cfg.opts;
      checker::Verdict v = checker::check_normal(jc.j, opts, file.reg);
      if (v.kind == checker::Verdict::Kind::IllTyped) any_illtyped = true;
      if (v.kind == checker::Verdict::Kind::Unknown) any_unknown = true;
      if (cfg.json) {
        json c = {{"name", jc.name},
                  {"judgment", checker::print_judgment(jc.j)},
                  {"verdict", verdict_name(v.kind)},
                  {"options",
                   {{"k", opts.k}, {"nfix", opts.n_fix}, {"fuel", opts.fuel},
                    {"rank", opts.rank}}},
                  {"trace", trace_json(v)}};
        if (!v.reason.empty()) c["reason"] = v.reason;
        cases.push_back(c);
      } else {
        os << "case " << jc.name << ": " << checker::print_judgment(jc.j) << '\n';
        os << "  verdict: " << verdict_name(v.kind) << '\n';
        if (!v.reason.empty()) os << "  reason: " << v.reason << '\n';
        os << "  resources: k=" << opts.k << " nfix=" << opts.n_fix << " fuel=" << opts.fuel
           << " rank=" << opts.rank << '\n';
        std::istringstream tr(checker::print_trace(v));
        std::string line;
        while (std::getline(tr, line)) os << "    " << line << '\n';
      }
    }
    int code = any_illtyped ? 2 : (any_unknown ? 1 : 0);
    if (cfg.json) return {code, json({{"cmd", "check"}, {"cases", cases}}).dump(2) + "\n"};
    return {code, os.str()};
  } catch (const Error& e) {
    return error_result(e);
  }
}

CmdResult cmd_eval(const std::string& term_s, const std::string& tau_s,
                   const RunConfig& cfg) {
  try {
    auto reg = make_registry(cfg);
    auto t = syntax::parse_term(term_s, reg);
    auto tau = syntax::parse_type(tau_s, reg);
    // no static gate: the evaluator checks shapes dynamically, so terms the
    // bidirectional checker cannot synthesize (unascribed redexes) still run
    auto v = evalsem::eval(t, {}, cfg.opts.fuel, reg);
    auto d = evalsem::lower(v, tau, cfg.opts.fuel, cfg.opts.rank, reg);
    if (cfg.json) {
      json j = {{"cmd", "eval"},
                {"fuel", cfg.opts.fuel},
                {"rank", cfg.opts.rank},
                {"d", findom::to_sexp(d)}};
      return {0, j.dump(2) + "\n"};
    }
    return {0, findom::to_sexp(d) + "\n"};
  } catch (const Error& e) {
    return error_result(e);
  }
}

CmdResult cmd_oracle(const std::string& tau_s, const std::string& psi_s,
                     const std::string& phi_s, const RunConfig& cfg) {
  try {
    auto reg = make_registry(cfg);
    auto tau = syntax::parse_type(tau_s, reg);
    int rank = cfg.opts.rank;
    if (rank > 3) throw Error("oracle rank above the supported cap of 3");

    if (phi_s.empty()) {
      // sweep mode: psi_s is a size bound
      int bound;
      try {
        size_t used = 0;
        bound = std::stoi(psi_s, &used);
        if (used != psi_s.size()) throw std::invalid_argument(psi_s);
      } catch (const std::exception&) {
        throw Error("oracle sweep expects an integer size bound, got: " + psi_s);
      }
      ConjGen gen(reg);
      auto fs = gen.all(tau, bound);
      if (fs.size() > 5000)
        throw Error("sweep too large (" + std::to_string(fs.size()) +
                    " formulas); tighten the size bound");
      auto universe = findom::enumerate(tau, rank, reg);
      size_t n = fs.size(), m = universe.size();
      std::vector<std::vector<bool>> sig(n, std::vector<bool>(m));
      std::vector<std::optional<findom::FinPtr>> comp(n);
      for (size_t i = 0; i < n; ++i) {
        for (size_t d = 0; d < m; ++d) sig[i][d] = evalsem::sat(tau, universe[d], fs[i], reg);
        auto c = logic::compile(tau, fs[i], reg);
        if (!c.empty()) comp[i] = *c.up;
      }
      long long total = 0, agree = 0;
      std::vector<std::string> bad;
      for (size_t i = 0; i < n; ++i) {
        bool oc = std::find(sig[i].begin(), sig[i].end(), true) != sig[i].end();
        bool dc = logic::consistent_f(tau, fs[i], reg);
        ++total;
        if (oc == dc) {
          ++agree;
        } else if (bad.size() < 10) {
          bad.push_back("consistency disagrees on " + logic::print_formula(fs[i]));
        }
      }
      long long spot = 0;
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
          bool oracle = true;
          for (size_t d = 0; d < m && oracle; ++d)
            if (sig[i][d] && !sig[j][d]) oracle = false;
          // entail_conj over the cached compilations
          bool dec = !comp[i] ? true : (!comp[j] ? false : findom::leq_nt(*comp[j], *comp[i]));
          if (++spot % 1009 == 0 && dec != logic::entail_conj(tau, fs[i], fs[j], reg))
            throw Error("internal: cached entailment diverged from entail_conj");
          ++total;
          if (dec == oracle) {
            ++agree;
          } else if (bad.size() < 10) {
            bad.push_back("entailment disagrees on " + logic::print_formula(fs[i]) +
                          "  |-  " + logic::print_formula(fs[j]));
          }
        }
      if (cfg.json) {
        json j = {{"cmd", "oracle"},       {"mode", "sweep"},
                  {"formulas", n},         {"rank", rank},
                  {"agree", agree},        {"total", total},
                  {"disagreements", bad}};
        return {bad.empty() ? 0 : 1, j.dump(2) + "\n"};
      }
      std::ostringstream os;
      os << "formulas: " << n << " (size <= " << bound << ")\n";
      for (const auto& b : bad) os << "  DISAGREE: " << b << '\n';
      os << "agree: " << agree << "/" << total << '\n';
      return {bad.empty() ? 0 : 1, os.str()};
    }

    // single query: decision procedure vs. oracle
    auto psi = logic::parse_formula(psi_s, reg);
    auto phi = logic::parse_formula(phi_s, reg);
    logic::validate_formula(tau, psi, reg);
    logic::validate_formula(tau, phi, reg);
    auto psi_t = logic::truncate(psi, cfg.opts.k);
    auto phi_t = logic::truncate(phi, cfg.opts.k);
    bool dec = logic::entail_fin(tau, psi_t, phi_t, reg);
    bool oracle = evalsem::oracle_entail(tau, psi_t, phi_t, rank, reg);
    int agree = dec == oracle ? 1 : 0;
    if (cfg.json) {
      json j = {{"cmd", "oracle"},
                {"mode", "single"},
                {"entail_fin", dec ? "entails" : "not-entails"},
                {"oracle_entail", oracle ? "entails" : "not-entails"},
                {"agree", agree},
                {"total", 1}};
      return {agree ? 0 : 1, j.dump(2) + "\n"};
    }
    std::ostringstream os;
    os << "entail_fin: " << (dec ? "ENTAILS" : "NOT-ENTAILS") << '\n';
    os << "oracle_entail: " << (oracle ? "ENTAILS" : "NOT-ENTAILS") << '\n';
    os << "agree: " << agree << "/1\n";
    return {agree ? 0 : 1, os.str()};
  } catch (const Error& e) {
    return error_result(e);
  }
}

CmdResult cmd_corpus(const std::vector<std::string>& paths, const RunConfig& cfg) {
  try {
    std::ostringstream os;
    json results = json::array();
    int passed = 0, total = 0;
    for (const auto& path : paths) {
      auto file = checker::parse_judgment_file(read_file(path));
      apply_bases(file.reg, cfg.bases);
      for (const auto& jc : file.cases) {
        checker::CheckOptions opts = jc.has_opts ? jc.opts : cfg.opts;
        checker::Verdict v = checker::check_normal(jc.j, opts, file.reg);
        std::string got = lower_str(verdict_name(v.kind));
        std::string want = jc.expect.empty() ? "derivable" : lower_str(jc.expect);
        bool ok = got == want;
        ++total;
        if (ok) ++passed;
        if (cfg.json) {
          json c = {{"file", path},
                    {"name", jc.name},
                    {"expected", want},
                    {"got", got},
                    {"pass", ok}};
          if (!v.reason.empty()) c["reason"] = v.reason;
          results.push_back(c);
        } else {
          os << (ok ? "PASS" : "FAIL") << ' ' << path << ':' << jc.name << "  got " << got
             << ", expected " << want << '\n';
          if (!ok && !v.reason.empty()) os << "  reason: " << v.reason << '\n';
        }
      }
    }
    if (cfg.json) {
      json j = {{"cmd", "corpus"}, {"passed", passed}, {"total", total},
                {"results", results}};
      return {passed == total ? 0 : 1, j.dump(2) + "\n"};
    }
    os << "corpus: " << passed << "/" << total << " passed\n";
    return {passed == total ? 0 : 1, os.str()};
  } catch (const Error& e) {
    return error_result(e);
  }
}

int run_main(int argc, char** argv) {
  CLI::App app{"refinement and temporal specification checker for a lazy recursive language"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string bases_file;
  app.add_option("--k", cfg.opts.k, "truncation depth for temporal schemas")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--nfix", cfg.opts.n_fix, "fixpoint iteration budget")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--fuel", cfg.opts.fuel, "evaluation fuel")->check(CLI::NonNegativeNumber);
  app.add_option("--rank", cfg.opts.rank, "finite-element enumeration rank")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--json", cfg.json, "emit json");
  app.add_option("--bases", bases_file, "file of base declarations: base Name = c1 c2 ...");

  std::vector<std::string> args;
  std::string member_formula;

  auto* entail = app.add_subcommand("entail", "decide psi |- phi at a type");
  entail->add_option("input", args, "either <file> holding 'tau ; psi ; phi', or tau psi phi");
  auto* consistent = app.add_subcommand("consistent", "decide consistency of a conjunctive formula");
  consistent->add_option("input", args, "either <file> holding 'tau ; phi', or tau phi");
  auto* compilec = app.add_subcommand("compile", "compile a conjunctive formula to its least element");
  compilec->add_option("input", args, "either <file> holding 'tau ; phi', or tau phi");
  auto* checkc = app.add_subcommand("check", "check a judgment file");
  checkc->add_option("file", args, "judgment file")->expected(1);
  auto* evalc = app.add_subcommand("eval", "evaluate a closed term and print its lowering");
  evalc->add_option("input", args, "term and pure type")->expected(2);
  evalc->add_option("--member", member_formula, "also test membership in a formula");
  auto* oracle = app.add_subcommand("oracle", "compare the decision procedures with the semantic oracle");
  oracle->add_option("input", args, "tau psi phi for one query, or tau <size-bound> for a sweep");
  auto* corpus = app.add_subcommand("corpus", "run judgment files against their expectations");
  corpus->add_option("files", args, "judgment files")->expected(-1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (!bases_file.empty()) {
      std::string text = read_file(bases_file);
      std::string joined;
      for (const auto& line : split_on(text, '\n')) {
        if (line.empty()) continue;
        if (!joined.empty()) joined += ';';
        joined += line;
      }
      cfg.bases = joined;
    }

    CmdResult r;
    if (entail->parsed()) {
      if (args.size() == 1) {
        auto parts = split_on(read_file(args[0]), ';');
        if (parts.size() != 3) throw Error("entail file must hold 'tau ; psi ; phi'");
        r = cmd_entail(parts[0], parts[1], parts[2], cfg);
      } else if (args.size() == 3) {
        r = cmd_entail(args[0], args[1], args[2], cfg);
      } else {
        throw Error("entail expects a file or tau psi phi");
      }
    } else if (consistent->parsed() || compilec->parsed()) {
      std::string tau, phi;
      if (args.size() == 1) {
        auto parts = split_on(read_file(args[0]), ';');
        if (parts.size() != 2) throw Error("input file must hold 'tau ; phi'");
        tau = parts[0];
        phi = parts[1];
      } else if (args.size() == 2) {
        tau = args[0];
        phi = args[1];
      } else {
        throw Error("expected a file or tau phi");
      }
      r = consistent->parsed() ? cmd_consistent(tau, phi, cfg) : cmd_compile(tau, phi, cfg);
    } else if (checkc->parsed()) {
      r = cmd_check(args[0], cfg);
    } else if (evalc->parsed()) {
      r = cmd_eval(args[0], args[1], cfg);
      if (r.code == 0 && !member_formula.empty()) {
        auto reg = make_registry(cfg);
        auto t = syntax::parse_term(args[0], reg);
        auto tau = syntax::parse_type(args[1], reg);
        auto phi = logic::parse_formula(member_formula, reg);
        logic::validate_formula(tau, phi, reg);
        auto phi_t = logic::truncate(phi, cfg.opts.k);
        auto v = evalsem::eval(t, {}, cfg.opts.fuel, reg);
        auto m = evalsem::member(v, tau, phi_t, cfg.opts.fuel, cfg.opts.rank, reg);
        r.out += std::string("member: ") +
                 (m == evalsem::Tri::Holds ? "Holds" : "Unknown") + "\n";
        if (m != evalsem::Tri::Holds) r.code = 1;
      }
    } else if (oracle->parsed()) {
      if (args.size() == 2) {
        r = cmd_oracle(args[0], args[1], "", cfg);
      } else if (args.size() == 3) {
        r = cmd_oracle(args[0], args[1], args[2], cfg);
      } else {
        throw Error("oracle expects tau psi phi or tau <size-bound>");
      }
    } else if (corpus->parsed()) {
      if (args.empty()) throw Error("corpus expects at least one file");
      r = cmd_corpus(args, cfg);
    } else {
      return 2;
    }
    std::cout << r.out;
    return r.code;
  } catch (const Error& e) {
    std::cerr << "error: " << describe_error(e) << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace dtlf::cli
