#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "dtlf/checker.hpp"
#include "dtlf/evalsem.hpp"
#include "dtlf/logic.hpp"
#include "dtlf/subtype.hpp"
#include "dtlf/syntax.hpp"
#include "generators.hpp"

using namespace dtlf;
using namespace dtlf::checker;

namespace {

syntax::BaseRegistry reg;

syntax::TypePtr T(const std::string& s) { return syntax::parse_type(s, reg); }
syntax::TermPtr M(const std::string& s) { return syntax::parse_term(s, reg); }
logic::FormulaPtr F(const std::string& s) { return logic::parse_formula(s, reg); }
subtype::RefPtr R(const std::string& s) { return subtype::parse_reftype(s, reg); }

Judgment J(const std::string& term, const std::string& goal) {
  return Judgment{{}, M(term), R(goal)};
}

Verdict run(const Judgment& j, CheckOptions opts = {}) { return check(j, opts, reg); }

const char* kMapStanza =
    "|- \\f. (fix g. \\x. (f (hd x)) :: (g (tl x)) : Stream Bool -> Stream Bool)\n"
    "   : { Bool -> Bool | <tt> -o <ff> }\n"
    "     -> { Stream Bool | [] [hd] <tt> }\n"
    "     -> { Stream Bool | [] [hd] <ff> }\n";

const char* kDiagStanza =
    "|- (fix g. \\c. \\x. (hd (c (hd x))) :: ((g (\\y. c (tl y))) (tl x))\n"
    "    : (Stream Bool -> Stream Bool) -> Stream (Stream Bool) -> Stream Bool)\n"
    "   (\\y. y)\n"
    "   : { Stream (Stream Bool) | [] [hd] ([] [hd] <tt>) }\n"
    "     -> { Stream Bool | [] [hd] <tt> }\n";

Judgment parse_single(const std::string& stanza) {
  auto file = parse_judgment_file(stanza);
  REQUIRE(file.cases.size() == 1);
  return file.cases[0].j;
}

bool replay_ok(const Verdict& v) {
  for (size_t i = 0; i < v.trace.size(); ++i)
    for (int p : v.trace[i].premises)
      if (p < 0 || p >= static_cast<int>(i)) return false;
  return true;
}

}  // namespace

TEST_CASE("checking pins") {
  CHECK(run(J("tt", "{Bool | <tt>}")).ok());
  CHECK(run(J("\\x. x", "{Bool -> Bool | <tt> -o <tt>}")).ok());
  CHECK(run(J("tt", "{Bool | true}")).ok());

  auto wrong = run(J("tt", "{Bool | <ff>}"));
  CHECK(wrong.kind == Verdict::Kind::Unknown);
  CHECK(!wrong.reason.empty());
}

TEST_CASE("ill-typed judgments are rejected as such") {
  CHECK(run(J("tt", "{Bool -> Bool | true}")).kind == Verdict::Kind::IllTyped);
  CHECK(run(J("x", "{Bool | true}")).kind == Verdict::Kind::IllTyped);
  CHECK(run(J("pi1 tt", "{Bool | true}")).kind == Verdict::Kind::IllTyped);
}

TEST_CASE("table judgments derive at truncation two") {
  CheckOptions opts;
  opts.k = 2;
  CHECK(check(parse_single(kMapStanza), opts, reg).ok());
  CHECK(check_normal(parse_single(kMapStanza), opts, reg).ok());
  CHECK(check_normal(parse_single(kDiagStanza), opts, reg).ok());
}

TEST_CASE("fixpoint iteration pins") {
  CheckOptions opts;
  auto chain = fix_iterate({}, "x", M("x"), T("Bool"), logic::f_true(), opts, reg, nullptr);
  REQUIRE(chain.has_value());
  CHECK(chain->size() == 1);
  CHECK(logic::print_formula(chain->back()) == logic::print_formula(logic::f_true()));

  CHECK(!fix_iterate({}, "x", M("x"), T("Bool"), F("<tt>"), opts, reg, nullptr)
             .has_value());

  auto target = logic::truncate(F("[] [hd] <tt>"), 2);
  auto stream = fix_iterate({}, "s", M("tt :: s"), T("Stream Bool"), target, opts, reg,
                            nullptr);
  REQUIRE(stream.has_value());
  CHECK(entail_conj(T("Stream Bool"), stream->back(), target, reg));
  CHECK(stream->size() <= 4);
}

TEST_CASE("eta expansion pins") {
  auto prod = eta_expand(J("(tt, ff)", "{Bool | <tt>} * {Bool | <ff>}"), reg);
  REQUIRE(prod.size() == 2);
  CHECK(subtype::print_reftype(prod[0].goal) == subtype::print_reftype(R("{Bool | <tt>}")));
  CHECK(subtype::print_reftype(prod[1].goal) == subtype::print_reftype(R("{Bool | <ff>}")));

  auto plain = eta_expand(J("tt", "{Bool | <tt>}"), reg);
  REQUIRE(plain.size() == 1);
  CHECK(syntax::print_term(plain[0].term) == syntax::print_term(M("tt")));

  auto arrow = eta_expand(J("\\x. x", "{Bool | <tt>} -> {Bool | <tt>}"), reg);
  REQUIRE(arrow.size() == 1);
  REQUIRE(arrow[0].ctx.size() == 1);
  CHECK(subtype::print_reftype(arrow[0].ctx[0].second) ==
        subtype::print_reftype(R("{Bool | <tt>}")));
  CHECK(subtype::print_reftype(arrow[0].goal) ==
        subtype::print_reftype(R("{Bool | <tt>}")));

  // non-literal functions are applied to the fresh variable
  Judgment app_j;
  app_j.ctx.emplace_back("f", R("{Bool | <tt>} -> {Bool | <tt>}"));
  app_j.term = M("f");
  app_j.goal = R("{Bool | <tt>} -> {Bool | <tt>}");
  auto ap = eta_expand(app_j, reg);
  REQUIRE(ap.size() == 1);
  CHECK(ap[0].term->kind == syntax::Term::Kind::App);

  CHECK_THROWS_AS(
      eta_expand(J("\\p. tt", "({Bool | <tt>} * {Bool | <tt>}) -> {Bool | <tt>}"), reg),
      Error);
}

TEST_CASE("derivable traces replay") {
  for (const char* tj : {"tt", "\\x. x", "(tt, ff)"}) {
    const char* goal = tj[0] == '(' ? "{Bool | <tt>} * {Bool | <ff>}"
                       : tj[0] == '\\' ? "{Bool -> Bool | <tt> -o <tt>}"
                                       : "{Bool | <tt>}";
    auto v = run(J(tj, goal));
    REQUIRE(v.ok());
    CHECK(!v.trace.empty());
    CHECK(replay_ok(v));
  }
  CheckOptions opts;
  opts.k = 2;
  auto v = check(parse_single(kMapStanza), opts, reg);
  REQUIRE(v.ok());
  CHECK(replay_ok(v));
}

TEST_CASE("derivability is monotone in resources") {
  auto map_j = parse_single(kMapStanza);
  for (int k : {1, 2}) {
    CheckOptions opts;
    opts.k = k;
    REQUIRE(check(map_j, opts, reg).ok());
    opts.n_fix += 1;
    CHECK(check(map_j, opts, reg).ok());
  }
  // a box goal derivable at k+1 stays derivable at k
  CheckOptions k2, k1;
  k2.k = 2;
  k1.k = 1;
  auto fixj = J("((fix s. tt :: s) : Stream Bool)", "{Stream Bool | [] [hd] <tt>}");
  REQUIRE(check(fixj, k2, reg).ok());
  CHECK(check(fixj, k1, reg).ok());
}

TEST_CASE("context disjunctions branch and respect the limit") {
  Judgment j;
  j.ctx.emplace_back("x", R("{Bool | <tt> \\/ <ff>}"));
  j.term = M("if x then ff else tt");
  j.goal = R("{Bool | <tt> \\/ <ff>}");
  CHECK(run(j).ok());

  CheckOptions tiny;
  tiny.disjunct_limit = 1;
  auto v = check(j, tiny, reg);
  CHECK(v.kind == Verdict::Kind::Unknown);
  CHECK(!v.reason.empty());
}

TEST_CASE("judgment file parsing") {
  std::string text =
      "base Tri = aa bb cc\n"
      "-- name: first\n"
      "-- options: k=1 nfix=2 fuel=8\n"
      "|- tt : {Bool | <tt>}\n"
      "\n"
      "-- name: second\n"
      "-- expect: unknown\n"
      "|- aa : {Tri | <bb>}\n";
  auto file = parse_judgment_file(text);
  REQUIRE(file.cases.size() == 2);
  CHECK(file.cases[0].name == "first");
  CHECK(file.cases[0].opts.k == 1);
  CHECK(file.cases[0].opts.n_fix == 2);
  CHECK(file.cases[0].opts.fuel == 8);
  CHECK(file.cases[1].expect == "unknown");
  CHECK(file.reg.carriers.count("Tri") == 1);

  CHECK(check(file.cases[0].j, file.cases[0].opts, file.reg).ok());
  CHECK(check(file.cases[1].j, file.cases[1].opts, file.reg).kind ==
        Verdict::Kind::Unknown);

  CHECK_THROWS_AS(parse_judgment_file("|- tt :\n"), Error);
}

TEST_CASE("derivable pins agree with the semantic oracle") {
  struct Pin {
    const char* term;
    const char* goal;
  };
  const Pin pins[] = {
      {"tt", "{Bool | <tt>}"},
      {"\\x. x", "{Bool -> Bool | <tt> -o <tt>}"},
      {"(tt, ff)", "{Bool | <tt>} * {Bool | <ff>}"},
      {"\\x. if x then ff else tt", "{Bool -> Bool | <tt> -o <ff>}"},
  };
  for (const auto& p : pins) {
    auto j = J(p.term, p.goal);
    REQUIRE(run(j).ok());
    CHECK_MESSAGE(testgen::oracle_judgment_sound(j, reg, 2, 16), p.term, " : ", p.goal);
  }
}

TEST_CASE("eta expansion preserves oracle soundness") {
  testgen::TermGen gen(reg, 404);
  const char* goals[] = {
      "{Bool | <tt>} -> {Bool | <tt>}",
      "{Bool | <ff>} -> {Bool | <tt> \\/ <ff>}",
      "{Bool | true} -> {Bool | <tt>}",
      "({Bool | <tt>} -> {Bool | <tt>}) * {Bool | <ff>}",
  };
  int agreements = 0;
  for (const char* gs : goals) {
    auto goal = R(gs);
    auto tau = subtype::underlying(goal);
    for (int i = 0; i < 6; ++i) {
      Judgment j;
      j.ctx = {};
      j.term = gen.gen(tau, 5, {});
      j.goal = goal;
      // only well-typed candidates are judgments at all
      try {
        syntax::check_pure({}, j.term, tau, reg);
      } catch (const Error&) {
        continue;
      }
      bool before = testgen::oracle_judgment_sound(j, reg, 2, 12);
      bool after = true;
      for (const auto& e : eta_expand(j, reg))
        after = after && testgen::oracle_judgment_sound(e, reg, 2, 12);
      CHECK_MESSAGE(before == after, syntax::print_term(j.term), " : ", gs);
      ++agreements;
    }
  }
  CHECK(agreements >= 12);
}
