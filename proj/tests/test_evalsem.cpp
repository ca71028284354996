#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "dtlf/evalsem.hpp"
#include "dtlf/findom.hpp"
#include "dtlf/logic.hpp"
#include "dtlf/syntax.hpp"
#include "generators.hpp"

using namespace dtlf;
using namespace dtlf::evalsem;

namespace {

syntax::BaseRegistry reg;

syntax::TypePtr T(const std::string& s) { return syntax::parse_type(s, reg); }
syntax::TermPtr M(const std::string& s) { return syntax::parse_term(s, reg); }
logic::FormulaPtr F(const std::string& s) { return logic::parse_formula(s, reg); }

findom::FinPtr run(const std::string& src, const std::string& ty, int fuel, int rank = 1) {
  Evaluator ev(reg);
  ev.rank = rank;
  return ev.lower(ev.eval(M(src), SemEnv{}, fuel), T(ty), fuel);
}

const char* kFilterApp =
    "(\\p. (fix g. \\x. if p (hd x) then (hd x) :: (g (tl x)) else g (tl x)"
    " : Stream Bool -> Stream Bool)) (\\x. x) ((fix s. tt :: s) : Stream Bool)";

}  // namespace

TEST_CASE("evaluation pins") {
  CHECK(findom::to_sexp(run("fix x. x", "Bool", 8)) == "(bot)");
  CHECK(findom::to_sexp(run("fix x. x", "Bool", 0)) == "(bot)");
  CHECK(findom::to_sexp(run("hd ((tt :: (fix s. s)) : Stream Bool)", "Bool", 2)) ==
        "(atom tt)");
  CHECK(findom::to_sexp(run("if tt then ff else tt", "Bool", 1)) == "(atom ff)");
  CHECK(findom::to_sexp(run("if (fix x. x) then tt else tt", "Bool", 8)) == "(bot)");
}

TEST_CASE("environment lookup") {
  Evaluator ev(reg);
  SemEnv env;
  env.vars["x"] = v_approx(findom::fe_atom("Bool", "tt", 0), T("Bool"));
  auto v = ev.eval(M("if x then ff else tt"), env, 4);
  CHECK(findom::to_sexp(ev.lower(v, T("Bool"), 4)) == "(atom ff)");
}

TEST_CASE("lowering pins") {
  auto id = run("\\x. x", "Bool -> Bool", 4, 1);
  auto want_id_r = findom::mk_fun_nt(
      {{findom::fe_atom("Bool", "tt", 0), findom::fe_atom("Bool", "tt", 0)},
       {findom::fe_atom("Bool", "ff", 1), findom::fe_atom("Bool", "ff", 1)}});
  REQUIRE(want_id_r.ok());
  CHECK(findom::equal(id, findom::canonicalize(want_id_r.fun)));

  CHECK(findom::to_sexp(lower(v_approx(findom::fe_bot()), T("Bool"), 4, 1, reg)) ==
        "(bot)");

  auto konst = run("\\x. tt", "Bool -> Bool", 4, 1);
  auto want_k_r = findom::mk_fun_nt({{findom::fe_bot(), findom::fe_atom("Bool", "tt", 0)}});
  REQUIRE(want_k_r.ok());
  CHECK(findom::equal(konst, findom::canonicalize(want_k_r.fun)));

  // a cons cell lowers through one fold layer per fuel unit
  CHECK(findom::to_sexp(run("((fix s. tt :: s) : Stream Bool)", "Stream Bool", 2)) ==
        "(fold (pair (atom tt) (fold (pair (atom tt) (bot)))))");
  CHECK(findom::to_sexp(run("((fix s. tt :: s) : Stream Bool)", "Stream Bool", 0)) ==
        "(bot)");
}

TEST_CASE("membership pins") {
  Evaluator ev(reg);
  CHECK(ev.member(ev.eval(M("tt"), SemEnv{}, 2), T("Bool"), F("<tt>"), 2) == Tri::Holds);
  CHECK(ev.member(ev.eval(M("fix x. x"), SemEnv{}, 16), T("Bool"), F("<tt>"), 16) ==
        Tri::Unknown);
  // a lower bound can never refute: wrong atom stays Unknown, not refuted
  CHECK(ev.member(ev.eval(M("tt"), SemEnv{}, 2), T("Bool"), F("<ff>"), 2) ==
        Tri::Unknown);

  Evaluator ev2(reg);
  auto v = ev2.eval(M(kFilterApp), SemEnv{}, 16);
  auto goal = logic::truncate(F("[] [hd] <tt>"), 2);
  CHECK(ev2.member(v, T("Stream Bool"), goal, 16) == Tri::Holds);
}

TEST_CASE("oracle pins") {
  CHECK(oracle_entail(T("Bool"), F("<tt> /\\ <ff>"), F("false"), 1, reg));
  CHECK(!oracle_entail(T("Bool"), F("true"), F("<tt>"), 1, reg));
  CHECK(oracle_entail(T("Bool -> Bool"), F("true -o (<tt> \\/ <ff>)"),
                      F("(true -o <tt>) \\/ (true -o <ff>)"), 2, reg));

  CHECK(oracle_consistent(T("Bool"), F("<tt>"), 1, reg));
  CHECK(!oracle_consistent(T("Bool"), F("false"), 1, reg));
  CHECK(!oracle_consistent(T("Bool -> Bool"), F("(<tt> -o <ff>) /\\ (true -o <tt>)"), 2,
                           reg));

  CHECK_THROWS_AS(
      oracle_entail(T("Bool -> Bool"), F("true"), F("(<tt> \\/ <ff>) -o <tt>"), 1, reg),
      Error);
}

TEST_CASE("fuel monotonicity of lowering") {
  struct Probe {
    const char* src;
    const char* ty;
  };
  const Probe probes[] = {
      {"fix x. x", "Bool"},
      {"((fix s. tt :: s) : Stream Bool)", "Stream Bool"},
      {"((fix s. tt :: ff :: s) : Stream Bool)", "Stream Bool"},
      {"hd ((fix s. tt :: s) : Stream Bool)", "Bool"},
      {"(\\f. (fix g. \\s. (f (hd s)) :: (g (tl s)) : Stream Bool -> Stream Bool))"
       " (\\x. if x then ff else tt) ((fix s. tt :: s) : Stream Bool)",
       "Stream Bool"},
      {kFilterApp, "Stream Bool"},
      {"((fix t. fold (tt, (t, t))) : Tree Bool)", "Tree Bool"},
  };
  for (const auto& p : probes) {
    auto tau = T(p.ty);
    for (int f = 0; f <= 8; ++f) {
      auto lo = run(p.src, p.ty, f);
      auto hi = run(p.src, p.ty, f + 1);
      CHECK_MESSAGE(findom::leq(tau, lo, hi), p.src, " at fuel ", f, ": ",
                    findom::to_sexp(lo), " vs ", findom::to_sexp(hi));
    }
  }
}

TEST_CASE("membership is monotone in fuel") {
  struct Probe {
    const char* src;
    const char* ty;
    const char* phi;
    int k;
  };
  const Probe probes[] = {
      {"((fix s. tt :: s) : Stream Bool)", "Stream Bool", "[] [hd] <tt>", 2},
      {kFilterApp, "Stream Bool", "[] [hd] <tt>", 2},
      {"tt", "Bool", "<tt>", 0},
  };
  for (const auto& p : probes) {
    auto tau = T(p.ty);
    auto goal = p.k > 0 ? logic::truncate(F(p.phi), p.k) : F(p.phi);
    bool seen = false;
    for (int f : {0, 1, 2, 4, 8, 16}) {
      Evaluator ev(reg);
      bool holds = ev.member(ev.eval(M(p.src), SemEnv{}, f), tau, goal, f) == Tri::Holds;
      if (seen) CHECK_MESSAGE(holds, p.src, " lost membership at fuel ", f);
      seen = seen || holds;
    }
    CHECK_MESSAGE(seen, p.src, " never reached ", p.phi);
  }
}

TEST_CASE("compiled witnesses stay within the rank bound") {
  testgen::ConjGen gen(reg);
  for (const char* ts : {"Bool", "Bool * Bool", "Bool -> Bool", "Stream Bool"}) {
    auto tau = T(ts);
    for (int s = 1; s <= 4; ++s) {
      auto univ = findom::enumerate(tau, s, reg);
      for (const auto& f : gen.sized(tau, s)) {
        auto c = logic::compile(tau, f, reg);
        if (c.empty()) continue;
        bool found = false;
        for (const auto& e : univ)
          if (findom::equal(*c.up, e)) {
            found = true;
            break;
          }
        CHECK_MESSAGE(found, "witness of ", logic::print_formula(f),
                      " escapes rank ", s);
      }
    }
  }
}

TEST_CASE("probe pool widens lowering") {
  // a stream element deeper than the evaluator's rank
  auto deep = findom::canonicalize(findom::fe_fold(findom::fe_pair(
      findom::fe_atom("Bool", "tt", 0),
      findom::fe_fold(findom::fe_pair(
          findom::fe_atom("Bool", "ff", 1),
          findom::fe_fold(findom::fe_pair(findom::fe_atom("Bool", "tt", 0),
                                          findom::fe_bot())))))));
  auto sb = T("Stream Bool");
  ProbePool pool;
  pool.add(sb, deep);
  auto with = pool.probes(sb, 1, reg);
  bool found = false;
  for (const auto& e : with) found = found || findom::equal(e, deep);
  CHECK(found);
  bool in_enum = false;
  for (const auto& e : findom::enumerate(sb, 1, reg))
    in_enum = in_enum || findom::equal(e, deep);
  CHECK(!in_enum);

  // probing the identity with the pooled argument recovers a deep step
  Evaluator ev(reg);
  ev.rank = 1;
  ev.pool = &pool;
  auto idv = ev.eval(M("\\s. s"), SemEnv{}, 8);
  auto low = ev.lower(idv, T("Stream Bool -> Stream Bool"), 8);
  bool has_deep = false;
  if (low->kind == findom::FinElt::Kind::Fun)
    for (const auto& st : low->steps)
      has_deep = has_deep || findom::equal(st.first, deep);
  CHECK(has_deep);
}
