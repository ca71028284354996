#include "dtlf/checker.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace dtlf::checker {

namespace {

using findom::FinPtr;
using logic::FormulaPtr;
using syntax::TermPtr;
using syntax::TypePtr;

struct ConjEntry {
  std::string var;
  TypePtr tau;
  FormulaPtr psi;  // Conjunctive
  FinPtr d;        // compile(psi), not Empty
};
using ConjCtx = std::vector<ConjEntry>;

size_t pool_size(const evalsem::ProbePool& pool) {
  size_t n = 0;
  for (const auto& [k, v] : pool.extra) n += v.size();
  return n;
}

void collect_names(const TermPtr& t, std::set<std::string>& out) {
  if (!t) return;
  switch (t->kind) {
    case syntax::Term::Kind::Var:
      out.insert(t->name);
      return;
    case syntax::Term::Kind::Lam:
    case syntax::Term::Kind::Fix:
      out.insert(t->name);
      collect_names(t->a, out);
      return;
    case syntax::Term::Kind::Case:
      collect_names(t->a, out);
      for (const auto& [c, b] : t->branches) collect_names(b, out);
      return;
    default:
      collect_names(t->a, out);
      collect_names(t->b, out);
      return;
  }
}

bool contains_refine(const subtype::RefPtr& t) {
  switch (t->kind) {
    case subtype::RefType::Kind::Refine:
      return true;
    case subtype::RefType::Kind::PureT:
      return false;
    default:
      return contains_refine(t->left) || contains_refine(t->right);
  }
}

// Variable-for-variable renaming; replacement is fresh, so no capture.
TermPtr rename_var(const TermPtr& t, const std::string& from, const std::string& to) {
  if (!t) return t;
  using K = syntax::Term::Kind;
  switch (t->kind) {
    case K::Var:
      return t->name == from ? syntax::mk_var(to) : t;
    case K::Lam:
    case K::Fix: {
      if (t->name == from) return t;  // shadowed
      TermPtr body = rename_var(t->a, from, to);
      if (t->kind == K::Lam) return syntax::mk_lam(t->name, body);
      return syntax::mk_fix(t->name, body, t->invariants);
    }
    case K::Case: {
      std::vector<std::pair<std::string, TermPtr>> bs;
      for (const auto& [c, b] : t->branches) bs.emplace_back(c, rename_var(b, from, to));
      return syntax::mk_case(rename_var(t->a, from, to), bs);
    }
    case K::App:
      return syntax::mk_app(rename_var(t->a, from, to), rename_var(t->b, from, to));
    case K::Pair:
      return syntax::mk_pair(rename_var(t->a, from, to), rename_var(t->b, from, to));
    case K::Proj:
      return syntax::mk_proj(t->index, rename_var(t->a, from, to));
    case K::Fold:
      return syntax::mk_fold(rename_var(t->a, from, to));
    case K::Unfold:
      return syntax::mk_unfold(rename_var(t->a, from, to));
    case K::Ascribe:
      return syntax::mk_ascribe(rename_var(t->a, from, to), t->tau, t->ref);
    default:
      return t;
  }
}

// Join-closure of the step arguments of a finite function element; the
// candidate mediators for applications of a context variable.
std::vector<FinPtr> arg_closure(const FinPtr& f) {
  std::vector<FinPtr> out;
  if (f->kind != findom::FinElt::Kind::Fun) return out;
  auto add = [&](const FinPtr& d) {
    if (findom::is_botlike(d)) return false;
    for (const auto& e : out)
      if (findom::equal(e, d)) return false;
    out.push_back(d);
    return true;
  };
  for (const auto& [a, r] : f->steps) add(a);
  bool grew = true;
  while (grew) {
    grew = false;
    size_t n = out.size();
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) {
        auto s = findom::sup_nt(out[i], out[j]);
        if (s && add(*s)) grew = true;
      }
  }
  std::sort(out.begin(), out.end(),
            [](const FinPtr& a, const FinPtr& b) { return findom::compare(a, b) < 0; });
  return out;
}

struct Session {
  const CheckOptions& opts;
  const syntax::BaseRegistry& reg;
  evalsem::ProbePool& pool;
  evalsem::Evaluator ev;
  std::vector<TraceStep> trace;
  std::map<std::string, int> memo;  // -1 running, -2 failed, >=0 trace index
  std::string last_failure;

  Session(const CheckOptions& o, const syntax::BaseRegistry& r, evalsem::ProbePool& p)
      : opts(o), reg(r), pool(p), ev(r) {
    ev.rank = o.rank;
    ev.pool = &p;
  }

  int push(const std::string& rule, const std::string& note, std::vector<int> prem = {}) {
    trace.push_back(TraceStep{rule, note, std::move(prem)});
    return static_cast<int>(trace.size()) - 1;
  }

  syntax::PureContext pure_ctx(const ConjCtx& G) const {
    syntax::PureContext out;
    out.reserve(G.size());
    for (const auto& e : G) out.emplace_back(e.var, e.tau);
    return out;
  }

  evalsem::SemEnv env_of(const ConjCtx& G) const {
    evalsem::SemEnv env;
    for (const auto& e : G) env.vars[e.var] = evalsem::v_approx(e.d, e.tau);
    return env;
  }

  std::string goal_key(const ConjCtx& G, const TermPtr& M, const TypePtr& tau,
                       const FinPtr& dphi) const {
    std::ostringstream os;
    for (const auto& e : G)
      os << e.var << '=' << findom::to_sexp(e.d) << '@' << syntax::print_type(e.tau) << ';';
    os << "|-" << syntax::print_term(M) << ':' << findom::to_sexp(dphi) << '@'
       << syntax::print_type(tau);
    return os.str();
  }

  void note_failure(const ConjCtx& G, const TermPtr& M, const FormulaPtr& phi,
                    const std::string& why) {
    std::ostringstream os;
    os << why << " at " << syntax::print_term(M) << " : " << logic::print_formula(phi);
    last_failure = os.str();
  }

  std::optional<int> check_elem(const ConjCtx& G, const TermPtr& M, const TypePtr& tau,
                                const FormulaPtr& phi) {
    logic::Compiled cphi = logic::compile(tau, phi, reg);
    if (cphi.empty()) {
      note_failure(G, M, phi, "goal formula has empty extension");
      return std::nullopt;
    }
    FinPtr dphi = *cphi.up;
    if (findom::is_botlike(dphi)) return push("top", logic::print_formula(phi));

    std::string key = goal_key(G, M, tau, dphi);
    auto hit = memo.find(key);
    if (hit != memo.end()) {
      if (hit->second >= 0) return hit->second;
      if (hit->second == -1) {
        note_failure(G, M, phi, "cyclic subgoal");
        return std::nullopt;
      }
      return std::nullopt;
    }
    memo[key] = -1;
    std::optional<int> res = rules(G, M, tau, phi, dphi);
    if (!res && opts.use_semantic_fallback) res = semantic(G, M, tau, phi, dphi);
    memo[key] = res ? *res : -2;
    if (!res && last_failure.empty()) note_failure(G, M, phi, "no rule applies");
    return res;
  }

  std::optional<int> rules(const ConjCtx& G, const TermPtr& M, const TypePtr& tau,
                           const FormulaPtr& phi, const FinPtr& dphi) {
    using K = syntax::Term::Kind;
    switch (M->kind) {
      case K::Var: {
        for (auto it = G.rbegin(); it != G.rend(); ++it) {
          if (it->var != M->name) continue;
          if (findom::leq_nt(dphi, it->d))
            return push("var", M->name + " : " + logic::print_formula(phi));
          note_failure(G, M, phi, "context entry too weak");
          return std::nullopt;
        }
        note_failure(G, M, phi, "variable not in context");
        return std::nullopt;
      }
      case K::Const: {
        auto hit = reg.find_const(M->name);
        if (!hit) {
          note_failure(G, M, phi, "unknown constant");
          return std::nullopt;
        }
        FinPtr a = findom::fe_atom(hit->first, M->name, hit->second);
        if (findom::leq_nt(dphi, a))
          return push("const", M->name + " : " + logic::print_formula(phi));
        note_failure(G, M, phi, "constant does not satisfy the goal");
        return std::nullopt;
      }
      case K::Lam: {
        if (tau->kind != syntax::PureType::Kind::Arrow ||
            dphi->kind != findom::FinElt::Kind::Fun) {
          note_failure(G, M, phi, "lambda against a non-arrow goal");
          return std::nullopt;
        }
        std::vector<int> prem;
        for (const auto& [a, r] : dphi->steps) {
          ConjCtx G2 = G;
          G2.push_back({M->name, tau->left, logic::char_formula(tau->left, a, reg), a});
          auto s = check_elem(G2, M->a, tau->right,
                              logic::char_formula(tau->right, r, reg));
          if (!s) return std::nullopt;
          prem.push_back(*s);
        }
        return push("lam", logic::print_formula(phi), std::move(prem));
      }
      case K::Pair: {
        if (tau->kind != syntax::PureType::Kind::Prod ||
            dphi->kind != findom::FinElt::Kind::Pair) {
          note_failure(G, M, phi, "pair against a non-product goal");
          return std::nullopt;
        }
        auto s1 = check_elem(G, M->a, tau->left,
                             logic::char_formula(tau->left, dphi->left, reg));
        if (!s1) return std::nullopt;
        auto s2 = check_elem(G, M->b, tau->right,
                             logic::char_formula(tau->right, dphi->right, reg));
        if (!s2) return std::nullopt;
        return push("pair", logic::print_formula(phi), {*s1, *s2});
      }
      case K::Fold: {
        if (tau->kind != syntax::PureType::Kind::Rec ||
            dphi->kind != findom::FinElt::Kind::Fold) {
          note_failure(G, M, phi, "fold against a non-recursive goal");
          return std::nullopt;
        }
        TypePtr un = syntax::unfold_rec(tau);
        auto s = check_elem(G, M->a, un, logic::char_formula(un, dphi->inner, reg));
        if (!s) return std::nullopt;
        return push("fold", logic::print_formula(phi), {*s});
      }
      case K::Unfold: {
        TypePtr rho;
        try {
          rho = syntax::infer_pure(pure_ctx(G), M->a, reg);
        } catch (const Error& e) {
          note_failure(G, M, phi, e.what());
          return std::nullopt;
        }
        auto s = check_elem(G, M->a, rho, logic::mk_foldf(phi));
        if (!s) return std::nullopt;
        return push("unfold", logic::print_formula(phi), {*s});
      }
      case K::Proj: {
        TypePtr rho;
        try {
          rho = syntax::infer_pure(pure_ctx(G), M->a, reg);
        } catch (const Error& e) {
          note_failure(G, M, phi, e.what());
          return std::nullopt;
        }
        FormulaPtr lifted = M->index == 1 ? logic::mk_pi1f(phi) : logic::mk_pi2f(phi);
        auto s = check_elem(G, M->a, rho, lifted);
        if (!s) return std::nullopt;
        return push("proj", logic::print_formula(phi), {*s});
      }
      case K::App:
        return rule_app(G, M, tau, phi, dphi);
      case K::Case:
        return rule_case(G, M, tau, phi);
      case K::Fix:
        return rule_fix(G, M, tau, phi);
      case K::Ascribe: {
        // Try the ascription as a stepping stone, then transparently.
        if (M->ref) {
          FormulaPtr chi = logic::truncate(subtype::char_type(M->ref).second, opts.k);
          for (const auto& chi_i : logic::dnf_clauses(tau, chi, reg)) {
            if (!logic::entail_conj(tau, chi_i, phi, reg)) continue;
            if (auto s = check_elem(G, M->a, tau, chi_i))
              return push("ascribe", logic::print_formula(chi_i), {*s});
          }
        }
        auto s = check_elem(G, M->a, tau, phi);
        if (!s) return std::nullopt;
        return push("ascribe", logic::print_formula(phi), {*s});
      }
    }
    return std::nullopt;
  }

  std::optional<int> rule_app(const ConjCtx& G, const TermPtr& M, const TypePtr& tau,
                              const FormulaPtr& phi, const FinPtr& dphi) {
    TypePtr ft;
    try {
      ft = syntax::infer_pure(pure_ctx(G), M->a, reg);
    } catch (const Error& e) {
      note_failure(G, M, phi, e.what());
      return std::nullopt;
    }
    if (ft->kind != syntax::PureType::Kind::Arrow) {
      note_failure(G, M, phi, "application head is not a function");
      return std::nullopt;
    }
    TypePtr sigma = ft->left;

    std::vector<FormulaPtr> cands;
    std::set<std::string> seen;
    auto add = [&](const FormulaPtr& f) {
      if (logic::classify(f) != logic::FormulaClass::Conjunctive) return;
      std::string p = logic::print_formula(f);
      if (seen.insert(p).second) cands.push_back(f);
    };

    // 1. the argument's own ascription
    if (M->b->kind == syntax::Term::Kind::Ascribe && M->b->ref) {
      FormulaPtr chi = logic::truncate(subtype::char_type(M->b->ref).second, opts.k);
      for (const auto& c : logic::dnf_clauses(sigma, chi, reg)) add(c);
    }
    // 2. domains suggested by the head's own refinement
    if (M->a->kind == syntax::Term::Kind::Var) {
      for (auto it = G.rbegin(); it != G.rend(); ++it) {
        if (it->var != M->a->name) continue;
        for (const auto& a : arg_closure(it->d))
          if (findom::leq_nt(dphi, findom::apply_nt(it->d, a)))
            add(logic::char_formula(sigma, a, reg));
        break;
      }
    }
    if (M->a->kind == syntax::Term::Kind::Ascribe && M->a->ref) {
      FormulaPtr chi = logic::truncate(subtype::char_type(M->a->ref).second, opts.k);
      collect_arrow_domains(chi, sigma, add);
    }
    // 3. the argument's bounded evaluation
    try {
      evalsem::SemEnv env = env_of(G);
      evalsem::ValPtr vN = ev.eval(M->b, env, opts.fuel);
      FinPtr dN = ev.lower(vN, sigma, opts.fuel);
      pool.add_decomposed(sigma, dN);
      add(logic::char_formula(sigma, dN, reg));
    } catch (const Error&) {
    }
    // 4. the trivial mediator
    add(logic::f_true());

    for (const auto& psi : cands) {
      auto s1 = check_elem(G, M->a, ft, logic::mk_arrowf(psi, phi));
      if (!s1) continue;
      auto s2 = check_elem(G, M->b, sigma, psi);
      if (!s2) continue;
      return push("app", "mediator " + logic::print_formula(psi), {*s1, *s2});
    }
    note_failure(G, M, phi, "no mediating refinement for the argument");
    return std::nullopt;
  }

  void collect_arrow_domains(const FormulaPtr& f, const TypePtr& sigma,
                             const std::function<void(const FormulaPtr&)>& add) {
    if (f->kind == logic::Formula::Kind::Arrow) {
      for (const auto& c : logic::dnf_clauses(sigma, f->a, reg)) add(c);
      return;
    }
    if (f->kind == logic::Formula::Kind::And)
      for (const auto& i : f->items) collect_arrow_domains(i, sigma, add);
  }

  std::optional<int> rule_case(const ConjCtx& G, const TermPtr& M, const TypePtr& tau,
                               const FormulaPtr& phi) {
    TypePtr bt;
    try {
      bt = syntax::infer_pure(pure_ctx(G), M->a, reg);
    } catch (const Error& e) {
      note_failure(G, M, phi, e.what());
      return std::nullopt;
    }
    if (bt->kind != syntax::PureType::Kind::Base) {
      note_failure(G, M, phi, "case scrutinee is not base-typed");
      return std::nullopt;
    }
    std::vector<std::string> order;
    try {
      evalsem::SemEnv env = env_of(G);
      evalsem::ValPtr v = ev.eval(M->a, env, opts.fuel);
      v = ev.force(v);
      if (v->kind == evalsem::SemValue::Kind::Approx &&
          v->d->kind == findom::FinElt::Kind::Atom)
        order.push_back(v->d->cname);
    } catch (const Error&) {
    }
    for (const auto& c : reg.carrier(bt->name))
      if (std::find(order.begin(), order.end(), c) == order.end()) order.push_back(c);

    for (const auto& b : order) {
      const TermPtr* branch = nullptr;
      for (const auto& [c, body] : M->branches)
        if (c == b) branch = &body;
      if (!branch) continue;
      auto s1 = check_elem(G, M->a, bt, logic::mk_atomf(bt->name, b));
      if (!s1) continue;
      auto s2 = check_elem(G, *branch, tau, phi);
      if (!s2) continue;
      return push("case", "scrutinee <" + b + ">", {*s1, *s2});
    }
    note_failure(G, M, phi, "no branch closes under a derivable scrutinee constant");
    return std::nullopt;
  }

  std::optional<int> rule_fix(const ConjCtx& G, const TermPtr& M, const TypePtr& tau,
                              const FormulaPtr& phi) {
    std::vector<FormulaPtr> chain;
    if (!M->invariants.empty()) {
      chain.push_back(logic::f_true());
      for (const auto& inv : M->invariants) {
        if (logic::classify(inv) != logic::FormulaClass::Conjunctive) {
          note_failure(G, M, phi, "fix invariant is not Conjunctive");
          return std::nullopt;
        }
        chain.push_back(logic::truncate(inv, opts.k));
      }
    } else {
      subtype::RefContext rctx;
      for (const auto& e : G) rctx.emplace_back(e.var, subtype::mk_refine(e.tau, e.psi));
      auto found =
          fix_iterate(rctx, M->name, M->a, tau, phi, opts, reg, &pool);
      if (!found) {
        note_failure(G, M, phi, "no invariant chain within the iteration bound");
        return std::nullopt;
      }
      chain = *found;
      for (const auto& psi : chain) {
        auto c = logic::compile(tau, psi, reg);
        if (!c.empty()) pool.add_decomposed(tau, *c.up);
      }
    }

    if (!logic::entail_conj(tau, chain.back(), phi, reg)) {
      note_failure(G, M, phi, "invariant chain does not reach the goal");
      return std::nullopt;
    }
    std::vector<int> prem;
    for (size_t i = 0; i + 1 < chain.size(); ++i) {
      auto c = logic::compile(tau, chain[i], reg);
      if (c.empty()) continue;  // vacuous link: uninhabited binding
      ConjCtx G2 = G;
      G2.push_back({M->name, tau, chain[i], *c.up});
      auto s = check_elem(G2, M->a, tau, chain[i + 1]);
      if (!s) {
        note_failure(G, M, phi,
                     "invariant link fails: " + logic::print_formula(chain[i]) + " => " +
                         logic::print_formula(chain[i + 1]));
        return std::nullopt;
      }
      prem.push_back(*s);
    }
    std::ostringstream note;
    note << (M->invariants.empty() ? "iterated" : "annotated") << " chain of length "
         << chain.size();
    return push("fix", note.str(), std::move(prem));
  }

  std::optional<int> semantic(const ConjCtx& G, const TermPtr& M, const TypePtr& tau,
                              const FormulaPtr& phi, const FinPtr& dphi) {
    try {
      evalsem::SemEnv env = env_of(G);
      evalsem::ValPtr v = ev.eval(M, env, opts.fuel);
      try {
        FinPtr dM = ev.lower(v, tau, opts.fuel);
        pool.add_decomposed(tau, dM);
      } catch (const Error&) {
      }
      if (ev.member(v, tau, phi, opts.fuel) == evalsem::Tri::Holds)
        return push("semantic-witness", logic::print_formula(phi));
    } catch (const Error&) {
    }
    return std::nullopt;
  }
};

Verdict run_once(const Judgment& j, const CheckOptions& opts,
                 const syntax::BaseRegistry& reg, evalsem::ProbePool& pool) {
  Verdict out;
  out.kind = Verdict::Kind::Unknown;

  syntax::PureContext pctx;
  for (const auto& [x, T] : j.ctx) pctx.emplace_back(x, subtype::underlying(T));
  TypePtr gtau_pure = subtype::underlying(j.goal);
  try {
    syntax::check_pure(pctx, j.term, gtau_pure, reg);
  } catch (const Error& e) {
    out.kind = Verdict::Kind::IllTyped;
    out.reason = e.what();
    return out;
  }

  Session s(opts, reg, pool);

  auto [gtau, gphi] = subtype::char_type(j.goal);
  std::vector<std::pair<TypePtr, std::vector<std::pair<FormulaPtr, FinPtr>>>> entries;
  try {
    logic::validate_formula(gtau, gphi, reg);
    FormulaPtr gphi_t = logic::truncate(gphi, opts.k);

    // Context entries: validate, truncate, split into consistent disjuncts.
    std::vector<std::string> names;
    for (const auto& [x, T] : j.ctx) {
      auto [t_x, p_x] = subtype::char_type(T);
      logic::validate_formula(t_x, p_x, reg);
      FormulaPtr p_t = logic::truncate(p_x, opts.k);
      std::vector<std::pair<FormulaPtr, FinPtr>> live;
      for (const auto& c : logic::dnf_clauses(t_x, p_t, reg)) {
        auto comp = logic::compile(t_x, c, reg);
        if (!comp.empty()) live.emplace_back(c, *comp.up);
      }
      if (live.empty()) {
        out.kind = Verdict::Kind::Derivable;
        s.push("vacuous-context", x + " has no inhabitant");
        out.trace = std::move(s.trace);
        return out;
      }
      names.push_back(x);
      entries.emplace_back(t_x, std::move(live));
    }

    long long combos = 1;
    for (const auto& [t, live] : entries) {
      combos *= static_cast<long long>(live.size());
      if (combos > opts.disjunct_limit) {
        out.reason = "context disjunct split exceeds the limit of " +
                     std::to_string(opts.disjunct_limit);
        return out;
      }
    }

    auto goal_cnf = logic::cnf_clauses(gtau, gphi_t, reg);
    // Pre-compile goal disjuncts, dropping unsatisfiable ones.
    std::vector<std::vector<std::pair<FormulaPtr, FinPtr>>> clauses;
    for (const auto& clause : goal_cnf) {
      std::vector<std::pair<FormulaPtr, FinPtr>> live;
      for (const auto& f : clause) {
        auto c = logic::compile(gtau, f, reg);
        if (!c.empty()) live.emplace_back(f, *c.up);
      }
      if (live.empty()) {
        out.reason = "goal has an unsatisfiable conjunct: " +
                     logic::print_formula(logic::mk_orf(clause));
        return out;
      }
      clauses.push_back(std::move(live));
    }
    for (const auto& clause : clauses)
      for (const auto& [f, d] : clause) pool.add_decomposed(gtau, d);

    // Walk the cartesian product of context disjuncts.
    std::vector<size_t> pick(entries.size(), 0);
    while (true) {
      ConjCtx G;
      for (size_t i = 0; i < entries.size(); ++i) {
        const auto& [psi, d] = entries[i].second[pick[i]];
        G.push_back({names[i], entries[i].first, psi, d});
        pool.add_decomposed(entries[i].first, d);
      }

      std::optional<FinPtr> dterm;
      evalsem::ValPtr vterm;
      try {
        vterm = s.ev.eval(j.term, s.env_of(G), opts.fuel);
        dterm = s.ev.lower(vterm, gtau, opts.fuel);
        pool.add_decomposed(gtau, *dterm);
      } catch (const Error&) {
      }

      for (const auto& clause : clauses) {
        std::vector<size_t> order;
        for (size_t i = 0; i < clause.size(); ++i)
          if (dterm && findom::leq_nt(clause[i].second, *dterm)) order.push_back(i);
        for (size_t i = 0; i < clause.size(); ++i)
          if (std::find(order.begin(), order.end(), i) == order.end()) order.push_back(i);

        std::optional<int> closed;
        for (size_t i : order) {
          closed = s.check_elem(G, j.term, gtau, clause[i].first);
          if (closed) break;
        }
        if (!closed && opts.use_semantic_fallback && vterm) {
          std::vector<FormulaPtr> ds;
          for (const auto& [f, d] : clause) ds.push_back(f);
          try {
            if (s.ev.member(vterm, gtau, logic::mk_orf(ds), opts.fuel) ==
                evalsem::Tri::Holds)
              closed = s.push("semantic-witness",
                              logic::print_formula(logic::mk_orf(ds)));
          } catch (const Error&) {
          }
        }
        if (!closed) {
          out.reason = s.last_failure.empty() ? "no derivation found" : s.last_failure;
          return out;
        }
        s.push("goal-clause", "", {*closed});
      }

      // next combination
      size_t i = 0;
      for (; i < pick.size(); ++i) {
        if (++pick[i] < entries[i].second.size()) break;
        pick[i] = 0;
      }
      if (i == pick.size()) break;
      if (entries.empty()) break;
    }
  } catch (const Error& e) {
    out.reason = e.what();
    return out;
  }

  out.kind = Verdict::Kind::Derivable;
  out.trace = std::move(s.trace);
  return out;
}

}  // namespace

Verdict check(const Judgment& j, const CheckOptions& opts, const syntax::BaseRegistry& reg) {
  evalsem::ProbePool pool;
  Verdict last;
  for (int round = 0; round < 3; ++round) {
    size_t before = pool_size(pool);
    last = run_once(j, opts, reg, pool);
    if (last.kind != Verdict::Kind::Unknown) return last;
    if (pool_size(pool) == before) return last;
  }
  return last;
}

std::optional<std::vector<logic::FormulaPtr>> fix_iterate(
    const subtype::RefContext& ctx, const std::string& x, const syntax::TermPtr& body,
    const syntax::TypePtr& tau, const logic::FormulaPtr& target, const CheckOptions& opts,
    const syntax::BaseRegistry& reg, const evalsem::ProbePool* pool) {
  if (logic::classify(target) != logic::FormulaClass::Conjunctive) return std::nullopt;
  evalsem::Evaluator ev(reg);
  ev.rank = opts.rank;
  ev.pool = pool;

  evalsem::SemEnv env;
  try {
    for (const auto& [y, T] : ctx) {
      auto [t_y, p_y] = subtype::char_type(T);
      FormulaPtr p_t = logic::truncate(p_y, opts.k);
      findom::FinPtr d = findom::fe_bot();
      if (logic::classify(p_t) == logic::FormulaClass::Conjunctive) {
        auto c = logic::compile(t_y, p_t, reg);
        if (!c.empty()) d = *c.up;
      }
      env.vars[y] = evalsem::v_approx(d, t_y);
    }

    std::vector<logic::FormulaPtr> chain{logic::f_true()};
    findom::FinPtr prev = findom::fe_bot();
    if (logic::entail_conj(tau, chain.back(), target, reg)) return chain;
    for (int j = 0; j < opts.n_fix; ++j) {
      evalsem::SemEnv env2 = env;
      env2.vars[x] = evalsem::v_approx(prev, tau);
      evalsem::ValPtr v = ev.eval(body, env2, opts.fuel);
      findom::FinPtr d = ev.lower(v, tau, opts.fuel);
      logic::FormulaPtr psi = logic::char_formula(tau, d, reg);
      chain.push_back(psi);
      if (logic::entail_conj(tau, psi, target, reg)) return chain;
      if (findom::equal(d, prev)) return std::nullopt;  // stationary below the target
      prev = d;
    }
  } catch (const Error&) {
    return std::nullopt;
  }
  return std::nullopt;
}

std::vector<Judgment> eta_expand(const Judgment& j, const syntax::BaseRegistry& reg) {
  std::vector<Judgment> out;
  std::set<std::string> used;
  for (const auto& [x, T] : j.ctx) used.insert(x);
  collect_names(j.term, used);
  int fresh = 0;

  std::function<void(const Judgment&)> go = [&](const Judgment& cur) {
    switch (cur.goal->kind) {
      case subtype::RefType::Kind::ProdT: {
        // a literal pair splits into its components, anything else projects
        TermPtr lt, rt;
        if (cur.term->kind == syntax::Term::Kind::Pair) {
          lt = cur.term->a;
          rt = cur.term->b;
        } else {
          lt = syntax::mk_proj(1, cur.term);
          rt = syntax::mk_proj(2, cur.term);
        }
        go({cur.ctx, lt, cur.goal->left});
        go({cur.ctx, rt, cur.goal->right});
        return;
      }
      case subtype::RefType::Kind::ArrowT: {
        const auto& dom = cur.goal->left;
        if (contains_refine(dom) && dom->kind != subtype::RefType::Kind::Refine &&
            dom->kind != subtype::RefType::Kind::PureT)
          throw Error("eta_expand: arrow domain is not a normal type: " +
                      subtype::print_reftype(dom));
        std::string x;
        do {
          x = "_e" + std::to_string(++fresh);
        } while (used.count(x));
        used.insert(x);
        Judgment next;
        next.ctx = cur.ctx;
        next.ctx.emplace_back(x, dom);
        // a literal lambda is renamed into the context rather than applied,
        // keeping the expansion inside the bidirectional fragment
        if (cur.term->kind == syntax::Term::Kind::Lam)
          next.term = rename_var(cur.term->a, cur.term->name, x);
        else
          next.term = syntax::mk_app(cur.term, syntax::mk_var(x));
        next.goal = cur.goal->right;
        go(next);
        return;
      }
      default:
        out.push_back(cur);
        return;
    }
  };
  go(j);
  return out;
}

Verdict check_normal(const Judgment& j, const CheckOptions& opts,
                     const syntax::BaseRegistry& reg) {
  std::vector<Judgment> parts;
  try {
    parts = eta_expand(j, reg);
  } catch (const Error& e) {
    Verdict v;
    v.kind = Verdict::Kind::Unknown;
    v.reason = e.what();
    return v;
  }
  Verdict merged;
  merged.kind = Verdict::Kind::Derivable;
  for (const auto& part : parts) {
    Verdict v = check(part, opts, reg);
    if (v.kind != Verdict::Kind::Derivable) return v;
    int offset = static_cast<int>(merged.trace.size());
    for (auto& step : v.trace) {
      for (auto& p : step.premises) p += offset;
      merged.trace.push_back(std::move(step));
    }
  }
  return merged;
}

std::string print_judgment(const Judgment& j) {
  std::ostringstream os;
  for (size_t i = 0; i < j.ctx.size(); ++i) {
    if (i) os << ", ";
    os << j.ctx[i].first << " : " << subtype::print_reftype(j.ctx[i].second);
  }
  if (!j.ctx.empty()) os << ' ';
  os << "|- " << syntax::print_term(j.term) << " : " << subtype::print_reftype(j.goal);
  return os.str();
}

std::string print_trace(const Verdict& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.trace.size(); ++i) {
    const auto& s = v.trace[i];
    os << '[' << i << "] " << s.rule;
    if (!s.note.empty()) os << ' ' << s.note;
    if (!s.premises.empty()) {
      os << " (premises:";
      for (int p : s.premises) os << ' ' << p;
      os << ')';
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace dtlf::checker
