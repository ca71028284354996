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
using namespace dtlf::logic;

namespace {

syntax::BaseRegistry reg;

syntax::TypePtr T(const std::string& s) { return syntax::parse_type(s, reg); }
FormulaPtr F(const std::string& s) { return parse_formula(s, reg); }

std::string P(const FormulaPtr& f) { return print_formula(f); }

bool same_extension(const syntax::TypePtr& tau, const FormulaPtr& a, const FormulaPtr& b) {
  return entail_fin(tau, a, b, reg) && entail_fin(tau, b, a, reg);
}

}  // namespace

TEST_CASE("classification") {
  CHECK(classify(F("<tt> /\\ <ff>")) == FormulaClass::Conjunctive);
  CHECK(classify(F("true")) == FormulaClass::Conjunctive);
  CHECK(classify(F("false")) == FormulaClass::Conjunctive);
  CHECK(classify(F("<tt> \\/ <ff>")) == FormulaClass::Open);
  CHECK(classify(mk_andf({mk_orf({F("<tt>"), F("<ff>")}), mk_orf({F("<tt>")})})) ==
        FormulaClass::Normal);
  CHECK(classify(F("(<tt> \\/ <ff>) -o <tt>")) == FormulaClass::General);
  CHECK(classify(F("(<tt> -o <ff>) /\\ (<ff> -o <tt>)")) == FormulaClass::Conjunctive);
}

TEST_CASE("formula surface syntax round trips") {
  for (const char* s : {"<tt>", "[pi1] <tt> /\\ [pi2] <ff>", "[fold] [pi1] <tt>",
                        "<tt> -o <ff>", "[] [hd] <tt>", "<> [hd] (<tt> \\/ <ff>)",
                        "AG [lbl] <tt>", "EF [lbl] <ff>", "mu p. [hd] <tt> \\/ X p",
                        "(<tt> -o <ff>) /\\ (<ff> -o <tt>)"}) {
    auto f = F(s);
    CHECK_MESSAGE(P(parse_formula(P(f), reg)) == P(f), "unstable print for ", s);
  }
}

TEST_CASE("formation rules") {
  validate_formula(T("Bool"), F("<tt>"), reg);
  validate_formula(T("Stream Bool"), F("[] [hd] <tt>"), reg);
  validate_formula(T("Tree Bool"), F("AG [lbl] <tt>"), reg);

  CHECK_THROWS_AS(validate_formula(T("Bool"), F("[pi1] <tt>"), reg), Error);
  CHECK_THROWS_AS(validate_formula(T("Bool * Bool"), F("<tt>"), reg), Error);
  CHECK_THROWS_AS(validate_formula(T("Stream Bool"), F("AG [lbl] <tt>"), reg), Error);
  CHECK_THROWS_AS(validate_formula(T("Bool"), F("[] <tt>"), reg), Error);
  // fixpoint variables must stay out of arrow domains
  CHECK_THROWS_AS(
      validate_formula(T("rec X. (X -> Bool) -> Bool"), F("nu p. (p -o <tt>) -o <tt>"), reg),
      Error);
}

TEST_CASE("compile pins") {
  auto cb = compile(T("Bool"), F("<tt> /\\ <ff>"), reg);
  CHECK(cb.empty());

  auto cs = compile(T("Stream Bool"), F("[fold] [pi1] <tt>"), reg);
  REQUIRE(!cs.empty());
  CHECK(findom::to_sexp(*cs.up) == "(fold (pair (atom tt) (bot)))");

  auto cf = compile(T("Bool -> Bool"), F("(<tt> -o <ff>) /\\ (true -o <tt>)"), reg);
  CHECK(cf.empty());

  auto ct = compile(T("Bool"), F("true"), reg);
  REQUIRE(!ct.empty());
  CHECK((*ct.up)->kind == findom::FinElt::Kind::Bot);

  CHECK(compile(T("Bool"), F("false"), reg).empty());

  // arrow with an inconsistent domain means no constraint at all
  auto ce = compile(T("Bool -> Bool"), F("(<tt> /\\ <ff>) -o <ff>"), reg);
  REQUIRE(!ce.empty());
  CHECK(findom::is_botlike(*ce.up));

  CHECK_THROWS_AS(compile(T("Bool"), F("<tt> \\/ <ff>"), reg), Error);
}

TEST_CASE("characteristic formulas") {
  auto b = T("Bool");
  CHECK(P(char_formula(b, findom::fe_atom("Bool", "tt", 0), reg)) == P(F("<tt>")));
  CHECK(classify(char_formula(b, findom::fe_bot(), reg)) == FormulaClass::Conjunctive);

  // round-trip on every rank-2 element of the core types
  for (const char* ts : {"Bool", "Bool * Bool", "Bool -> Bool", "Stream Bool"}) {
    auto tau = T(ts);
    for (const auto& d : findom::enumerate(tau, 2, reg)) {
      auto f = char_formula(tau, findom::canonicalize(d), reg);
      CHECK(classify(f) == FormulaClass::Conjunctive);
      auto c = compile(tau, f, reg);
      REQUIRE_MESSAGE(!c.empty(), "lost ", findom::to_sexp(d));
      CHECK_MESSAGE(findom::equal(*c.up, findom::canonicalize(d)),
                    "round trip moved ", findom::to_sexp(d), " to ",
                    findom::to_sexp(*c.up));
    }
  }
}

TEST_CASE("consistency pins") {
  CHECK(consistent_f(T("Bool"), F("<tt>"), reg));
  CHECK(consistent_f(T("Bool"), F("true"), reg));
  CHECK(consistent_f(T("Bool -> Bool"), F("(<tt> -o <ff>) /\\ (<ff> -o <tt>)"), reg));
  CHECK(!consistent_f(T("Bool"), F("<tt> /\\ <ff>"), reg));
  CHECK(!consistent_f(T("Bool -> Bool"), F("(<tt> -o <ff>) /\\ (true -o <tt>)"), reg));
}

TEST_CASE("conjunctive entailment pins") {
  CHECK(entail_conj(T("Bool"), F("<tt> /\\ <ff>"), F("false"), reg));
  CHECK(entail_conj(T("Bool"), F("<tt>"), F("true"), reg));
  CHECK(entail_conj(T("Stream Bool"), F("[fold] [pi1] <tt>"), F("true"), reg));
  CHECK(entail_conj(T("Bool -> Bool"), F("true -o <tt>"), F("<ff> -o <tt>"), reg));
  CHECK(!entail_conj(T("Bool -> Bool"), F("<ff> -o <tt>"), F("true -o <tt>"), reg));
  CHECK(!entail_conj(T("Bool"), F("true"), F("<tt>"), reg));
}

TEST_CASE("finite entailment pins") {
  CHECK(entail_fin(T("Bool"), F("<tt> \\/ <ff>"), F("<ff> \\/ <tt>"), reg));
  CHECK(!entail_fin(T("Bool"), F("true"), F("<tt> \\/ <ff>"), reg));
  CHECK(entail_fin(T("Bool -> Bool"), F("true -o (<tt> \\/ <ff>)"),
                   F("(true -o <tt>) \\/ (true -o <ff>)"), reg));
  CHECK(entail_fin(T("Bool"), F("false"), F("<tt>"), reg));
  CHECK(entail_fin(T("Bool"), F("<tt> /\\ <ff>"), F("false"), reg));
}

TEST_CASE("modal pushing") {
  auto f1 = F("[fold] ([pi1] <tt> \\/ [pi1] <ff>)");
  CHECK(P(push_modalities(f1)) == P(F("[fold] [pi1] <tt> \\/ [fold] [pi1] <ff>")));

  CHECK(P(push_modalities(F("[fold] false"))) == P(F("false")));
  CHECK(P(push_modalities(F("[pi1] true"))) == P(F("[pi1] true")));
  CHECK(P(simplify_units(F("[pi1] true"))) == P(F("true")));

  // semantics preserved
  auto tau = T("Stream Bool");
  for (const char* s : {"[fold] ([pi1] <tt> \\/ [pi1] <ff>)",
                        "[fold] ([pi1] <tt> /\\ [pi2] [fold] [pi1] <ff>)",
                        "[fold] [pi1] (<tt> \\/ <ff>)"}) {
    auto f = F(s);
    validate_formula(tau, f, reg);
    CHECK(same_extension(tau, f, push_modalities(f)));
  }
}

TEST_CASE("disjunctive normal form") {
  auto tau = T("Bool");
  CHECK(P(to_dnf(tau, F("(<tt> \\/ <ff>) /\\ true"), reg)) == P(F("<tt> \\/ <ff>")));
  CHECK(P(to_dnf(tau, F("false /\\ <tt>"), reg)) == P(F("false")));

  auto d = to_dnf(tau, F("(<tt> \\/ <ff>) /\\ (<ff> \\/ <tt>)"), reg);
  auto cl = dnf_clauses(tau, F("(<tt> \\/ <ff>) /\\ (<ff> \\/ <tt>)"), reg);
  CHECK(cl.size() == 4);
  for (const auto& c : cl) CHECK(classify(c) == FormulaClass::Conjunctive);
  CHECK(same_extension(tau, d, F("(<tt> \\/ <ff>) /\\ (<ff> \\/ <tt>)")));

  // dnf preserves extensions on a generated battery
  testgen::ConjGen gen(reg);
  auto univ = findom::enumerate(tau, 2, reg);
  auto conj = gen.all(tau, 4);
  for (size_t i = 0; i < conj.size(); i += 7)
    for (size_t j = 0; j < conj.size(); j += 11) {
      auto f = mk_andf({mk_orf({conj[i], conj[j]}), mk_orf({conj[j], conj[i]})});
      CHECK(testgen::signature(tau, f, univ, reg) ==
            testgen::signature(tau, to_dnf(tau, f, reg), univ, reg));
    }
}

TEST_CASE("truncation pins") {
  auto box = F("[] [hd] <tt>");
  auto t2 = truncate(box, 2);
  CHECK(P(t2) == P(F("[fold] [pi1] <tt> /\\ [fold] [pi2] [fold] [pi1] <tt>")));

  CHECK(P(truncate(F("<> [hd] <tt>"), 0)) == P(F("false")));
  CHECK(P(truncate(F("AG [lbl] <tt>"), 1)) == P(F("[fold] [pi1] <tt>")));

  CHECK(P(truncate(F("nu p. p"), 3)) == P(F("true")));
  CHECK(P(truncate(F("mu p. p"), 3)) == P(F("false")));

  CHECK_THROWS_AS(truncate(box, -1), Error);

  // schema-free formulas pass through
  auto plain = F("[fold] [pi1] <tt>");
  CHECK(P(truncate(plain, 5)) == P(plain));
}

TEST_CASE("truncation monotonicity") {
  auto tau = T("Stream Bool");
  for (const char* body : {"[hd] <tt>", "[hd] <ff>", "[hd] (<tt> \\/ <ff>)"}) {
    auto box = mk_schema(Formula::Kind::Box, F(body));
    auto diam = mk_schema(Formula::Kind::Diam, F(body));
    for (int k = 0; k <= 4; ++k) {
      CHECK(entail_fin(tau, truncate(box, k + 1), truncate(box, k), reg));
      CHECK(entail_fin(tau, truncate(diam, k), truncate(diam, k + 1), reg));
    }
  }
}

TEST_CASE("dichotomy on the exhaustive boolean corpus") {
  auto tau = T("Bool");
  testgen::ConjGen gen(reg);
  for (const auto& f : gen.all(tau, 6)) {
    bool cons = consistent_f(tau, f, reg);
    bool bot = entail_conj(tau, f, F("false"), reg);
    CHECK_MESSAGE(cons != bot, "dichotomy broken for ", P(f));
  }
}

TEST_CASE("entailment is a preorder") {
  auto tau = T("Bool -> Bool");
  testgen::ConjGen gen(reg);
  auto fs = gen.all(tau, 4);
  for (const auto& f : fs) CHECK(entail_fin(tau, f, f, reg));
  // transitivity over a thinned triple set
  for (size_t i = 0; i < fs.size(); i += 5)
    for (size_t j = 0; j < fs.size(); j += 5)
      for (size_t k = 0; k < fs.size(); k += 5) {
        if (entail_fin(tau, fs[i], fs[j], reg) && entail_fin(tau, fs[j], fs[k], reg))
          CHECK(entail_fin(tau, fs[i], fs[k], reg));
      }
}

TEST_CASE("derivable sequents smoke") {
  auto sb = T("Stream Bool");
  // modalities commute with disjunction, both ways
  auto dis = F("[fold] ([pi1] <tt> \\/ [pi1] <ff>)");
  auto pushed = F("[fold] [pi1] <tt> \\/ [fold] [pi1] <ff>");
  CHECK(same_extension(sb, dis, pushed));
  // and with conjunction
  auto con = F("[fold] ([pi1] <tt> /\\ [pi2] [fold] [pi1] <ff>)");
  auto conp = F("[fold] [pi1] <tt> /\\ [fold] [pi2] [fold] [pi1] <ff>");
  CHECK(same_extension(sb, con, conp));
}
