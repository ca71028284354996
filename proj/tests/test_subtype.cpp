#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "dtlf/logic.hpp"
#include "dtlf/subtype.hpp"
#include "dtlf/syntax.hpp"

using namespace dtlf;
using namespace dtlf::subtype;

namespace {
bool sub(const RefPtr& s, const RefPtr& t, int k, const syntax::BaseRegistry& r) {
  return dtlf::subtype::subtype(s, t, k, r);
}
}  // namespace

namespace {

syntax::BaseRegistry reg;

syntax::TypePtr T(const std::string& s) { return syntax::parse_type(s, reg); }
logic::FormulaPtr F(const std::string& s) { return logic::parse_formula(s, reg); }
RefPtr R(const std::string& s) { return parse_reftype(s, reg); }

// Random refinement types over Bool leaves, grouped by structural shape so
// instances of one shape share an underlying type.
struct RefGen {
  std::mt19937 rng{20260818};

  logic::FormulaPtr leaf_formula() {
    switch (rng() % 5) {
      case 0: return logic::f_true();
      case 1: return logic::f_false();
      case 2: return F("<tt>");
      case 3: return F("<ff>");
      default: return F("<tt> /\\ <ff>");
    }
  }

  RefPtr leaf() { return mk_refine(T("Bool"), leaf_formula()); }

  RefPtr shape(int which) {
    switch (which) {
      case 0: return leaf();
      case 1: return mk_prodt(leaf(), leaf());
      case 2: return mk_arrowt(leaf(), leaf());
      case 3: return mk_arrowt(mk_prodt(leaf(), leaf()), leaf());
      default: return mk_prodt(mk_arrowt(leaf(), leaf()), leaf());
    }
  }
};

}  // namespace

TEST_CASE("underlying type extraction") {
  CHECK(syntax::print_type(underlying(R("{Bool | <tt>}"))) == "Bool");
  CHECK(syntax::print_type(underlying(R("{Bool | <tt>} -> {Bool | <ff>}"))) ==
        "Bool -> Bool");
  CHECK(syntax::print_type(underlying(R("Stream Bool"))) ==
        syntax::print_type(T("Stream Bool")));
  CHECK(syntax::print_type(underlying(R("{Bool | <tt>} * Bool"))) == "Bool * Bool");
}

TEST_CASE("characteristic formula extraction") {
  auto [t1, f1] = char_type(R("{Bool | <tt>} * {Bool | <ff>}"));
  CHECK(syntax::print_type(t1) == "Bool * Bool");
  CHECK(logic::print_formula(f1) ==
        logic::print_formula(F("[pi1] <tt> /\\ [pi2] <ff>")));

  auto [t2, f2] = char_type(R("Bool"));
  CHECK(syntax::print_type(t2) == "Bool");
  CHECK(logic::print_formula(f2) == logic::print_formula(logic::f_true()));

  auto [t3, f3] = char_type(R("{Bool | <ff>} -> {Bool | <tt>}"));
  CHECK(syntax::print_type(t3) == "Bool -> Bool");
  CHECK(logic::print_formula(f3) == logic::print_formula(F("<ff> -o <tt>")));
}

TEST_CASE("subtyping pins") {
  CHECK(sub(R("{Bool | <tt>}"), R("{Bool | true}"), 2, reg));
  CHECK(sub(R("{Bool | <tt> /\\ <ff>}"), R("{Bool | false}"), 2, reg));
  CHECK(!sub(R("{Bool | true}"), R("{Bool | <tt>}"), 2, reg));

  auto box = R("{Stream Bool | [] [hd] <tt>}");
  auto diam = R("{Stream Bool | <> [hd] <tt>}");
  for (int k = 1; k <= 3; ++k) {
    CHECK(sub(box, box, k, reg));
    CHECK(sub(box, diam, k, reg));
  }
  // at depth 1 both collapse to a head constraint; they separate from depth 2
  CHECK(sub(diam, box, 1, reg));
  CHECK(!sub(diam, box, 2, reg));
  CHECK(!sub(diam, box, 3, reg));

  CHECK_THROWS_AS(sub(R("{Bool | <tt>}"), R("{Bool * Bool | [pi1] <tt>}"), 2, reg),
                  Error);
}

TEST_CASE("print parse round trip") {
  for (const char* s :
       {"{Bool | <tt>}", "{Bool | <tt>} * {Bool | <ff>}",
        "{Bool | <tt>} -> {Bool | true}", "{Stream Bool | [] [hd] <tt>}",
        "({Bool | <tt>} -> {Bool | <ff>}) * Bool"}) {
    auto t = R(s);
    CHECK(print_reftype(parse_reftype(print_reftype(t), reg)) == print_reftype(t));
  }
}

TEST_CASE("reflexive and transitive at fixed depth") {
  RefGen gen;
  for (int shape = 0; shape < 5; ++shape) {
    std::vector<RefPtr> pool;
    for (int i = 0; i < 10; ++i) pool.push_back(gen.shape(shape));
    for (const auto& s : pool) CHECK(sub(s, s, 2, reg));
    for (const auto& a : pool)
      for (const auto& b : pool)
        for (const auto& c : pool) {
          if (sub(a, b, 2, reg) && sub(b, c, 2, reg))
            CHECK_MESSAGE(sub(a, c, 2, reg), print_reftype(a), " via ",
                          print_reftype(b), " to ", print_reftype(c));
        }
  }
}

TEST_CASE("char_type round trip under subtyping") {
  RefGen gen;
  for (int shape = 0; shape < 5; ++shape)
    for (int i = 0; i < 8; ++i) {
      auto t = gen.shape(shape);
      auto [tau, phi] = char_type(t);
      auto refined = mk_refine(tau, phi);
      for (int k : {1, 2}) {
        CHECK(sub(t, refined, k, reg));
        CHECK(sub(refined, t, k, reg));
      }
    }
}

TEST_CASE("arrow contravariance") {
  RefGen gen;
  std::vector<RefPtr> pool;
  for (int i = 0; i < 12; ++i) pool.push_back(gen.leaf());
  int exercised = 0;
  for (const auto& sp : pool)
    for (const auto& s : pool)
      for (const auto& t : pool)
        for (const auto& tp : pool) {
          if (!sub(sp, s, 2, reg) || !sub(t, tp, 2, reg)) continue;
          ++exercised;
          CHECK(sub(mk_arrowt(s, t), mk_arrowt(sp, tp), 2, reg));
        }
  CHECK(exercised > 100);
}
