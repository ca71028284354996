#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dtlf/syntax.hpp"

using namespace dtlf;
using namespace dtlf::syntax;

namespace {

BaseRegistry default_reg() { return BaseRegistry(); }

// print / parse fixed point: one round of parse+print reaches a stable form
std::string term_normal(const std::string& s, const BaseRegistry& reg) {
  return print_term(parse_term(s, reg));
}

}  // namespace

TEST_CASE("type parsing and sugar expansion") {
  auto reg = default_reg();

  auto b = parse_type("Bool", reg);
  CHECK(b->kind == PureType::Kind::Base);
  CHECK(b->name == "Bool");

  auto s = parse_type("Stream Bool", reg);
  REQUIRE(s->kind == PureType::Kind::Rec);
  REQUIRE(s->left->kind == PureType::Kind::Prod);
  CHECK(s->left->left->kind == PureType::Kind::Base);
  CHECK(s->left->right->kind == PureType::Kind::Var);
  CHECK(s->left->right->name == s->name);
  CHECK(type_equal(s, mk_stream(mk_base("Bool"))));

  auto r = parse_type("Rou Bool", reg);
  REQUIRE(r->kind == PureType::Kind::Rec);
  REQUIRE(r->left->kind == PureType::Kind::Arrow);
  CHECK(r->left->left->kind == PureType::Kind::Arrow);
  CHECK(r->left->left->left->kind == PureType::Kind::Var);
  CHECK(type_equal(r, mk_rou(mk_base("Bool"))));

  CHECK(type_equal(parse_type("Tree Bool", reg), mk_tree(mk_base("Bool"))));

  // recognizers invert the sugar builders
  CHECK(type_equal(stream_elem(mk_stream(mk_base("Bool"))), mk_base("Bool")));
  CHECK(type_equal(tree_elem(mk_tree(mk_base("Bool"))), mk_base("Bool")));
  CHECK(type_equal(rou_elem(mk_rou(mk_base("Bool"))), mk_base("Bool")));
  CHECK(stream_elem(mk_base("Bool")) == nullptr);
}

TEST_CASE("type operator precedence and associativity") {
  auto reg = default_reg();
  // * binds tighter than ->, arrow right-associative
  auto t = parse_type("Bool * Bool -> Bool -> Bool", reg);
  REQUIRE(t->kind == PureType::Kind::Arrow);
  CHECK(t->left->kind == PureType::Kind::Prod);
  CHECK(t->right->kind == PureType::Kind::Arrow);

  // printer emits a form that reparses to the same type
  for (const char* src : {"Bool * Bool -> Bool", "(Bool -> Bool) -> Bool",
                          "Stream (Bool * Bool)", "rec X. Bool * (X * X)",
                          "Rou (Stream Bool)", "Bool * (Bool * Bool)",
                          "(Bool * Bool) * Bool"}) {
    auto a = parse_type(src, reg);
    auto back = parse_type(print_type(a), reg);
    CHECK_MESSAGE(type_equal(a, back), "round trip failed for ", src);
  }
}

TEST_CASE("subst_type and unfold_rec") {
  auto reg = default_reg();
  auto boolT = mk_base("Bool");
  auto streamB = mk_stream(boolT);

  // one-step unfolding of the stream body
  auto body = mk_prod(boolT, mk_tvar("X"));
  CHECK(type_equal(subst_type(body, "X", streamB), mk_prod(boolT, streamB)));

  CHECK(type_equal(subst_type(mk_tvar("X"), "X", boolT), boolT));

  // bound occurrences are untouched
  auto degenerate = mk_rec("X", mk_tvar("X"));
  CHECK(type_equal(subst_type(degenerate, "Y", boolT), degenerate));

  CHECK(type_equal(unfold_rec(streamB), mk_prod(boolT, streamB)));
  CHECK(type_equal(unfold_rec(mk_tree(boolT)),
                   mk_prod(boolT, mk_prod(mk_tree(boolT), mk_tree(boolT)))));
}

TEST_CASE("term parsing and sugar") {
  auto reg = default_reg();

  auto omega = parse_term("fix x. x", reg);
  REQUIRE(omega->kind == Term::Kind::Fix);
  CHECK(omega->a->kind == Term::Kind::Var);
  CHECK(omega->a->name == "x");

  // hd s = pi1 (unfold s)
  auto hd = parse_term("hd s", reg);
  REQUIRE(hd->kind == Term::Kind::Proj);
  CHECK(hd->index == 1);
  REQUIRE(hd->a->kind == Term::Kind::Unfold);
  CHECK(hd->a->a->kind == Term::Kind::Var);

  // tl s = pi2 (unfold s)
  auto tl = parse_term("tl s", reg);
  CHECK(tl->index == 2);

  // h :: t = fold (h, t)
  auto cons = parse_term("tt :: s", reg);
  REQUIRE(cons->kind == Term::Kind::Fold);
  REQUIRE(cons->a->kind == Term::Kind::Pair);
  CHECK(cons->a->a->kind == Term::Kind::Const);

  // :: is right-associative and admits binders on the right
  auto chain = parse_term("tt :: ff :: s", reg);
  REQUIRE(chain->kind == Term::Kind::Fold);
  CHECK(chain->a->b->kind == Term::Kind::Fold);
  CHECK(parse_term("tt :: fix s. ff :: s", reg)->kind == Term::Kind::Fold);

  // if sugar is a total Bool case
  auto ite = parse_term("if x then tt else ff", reg);
  REQUIRE(ite->kind == Term::Kind::Case);
  REQUIRE(ite->branches.size() == 2);
  CHECK(ite->branches[0].first == "tt");
  CHECK(ite->branches[1].first == "ff");

  // application associates left
  auto app = parse_term("f x y", reg);
  REQUIRE(app->kind == Term::Kind::App);
  CHECK(app->a->kind == Term::Kind::App);
}

TEST_CASE("term print/parse round trips") {
  auto reg = default_reg();
  for (const char* src : {
           "fix x. x",
           "\\f. \\x. f x",
           "(\\x. x : Bool -> Bool)",
           "tt :: ff :: (fix s. tt :: s)",
           "case x of { tt -> ff | ff -> tt }",
           "if p then (tt, ff) else (ff, tt)",
           "pi1 (unfold s)",
           "\\f. (fix g. \\x. (f (hd x)) :: (g (tl x)) : Stream Bool -> Stream Bool)",
           "(fix c. fold (\\k. k c))",
           "fold (tt, fold (ff, x))",
       }) {
    std::string once = term_normal(src, reg);
    CHECK_MESSAGE(term_normal(once, reg) == once, "unstable print for ", src);
  }
}

TEST_CASE("pure inference pins") {
  auto reg = default_reg();
  PureContext empty;

  CHECK(type_equal(infer_pure(empty, parse_term("tt", reg), reg), mk_base("Bool")));
  CHECK(type_equal(infer_pure(empty, parse_term("(fix x. x : Stream Bool)", reg), reg),
                   mk_stream(mk_base("Bool"))));
  CHECK(type_equal(infer_pure(empty, parse_term("(tt, ff)", reg), reg),
                   mk_prod(mk_base("Bool"), mk_base("Bool"))));

  // fold cannot synthesize without an ascription
  CHECK_THROWS_AS(infer_pure(empty, parse_term("unfold (fold tt)", reg), reg), Error);

  // ascribed identity both infers and checks
  auto id = parse_term("(\\x. x : Bool -> Bool)", reg);
  CHECK(type_equal(infer_pure(empty, id, reg), mk_arrow(mk_base("Bool"), mk_base("Bool"))));
  check_pure(empty, parse_term("\\x. x", reg), mk_arrow(mk_base("Bool"), mk_base("Bool")), reg);
}

TEST_CASE("pipeline sources infer their declared types") {
  auto reg = default_reg();
  PureContext empty;
  auto streamB = mk_stream(mk_base("Bool"));
  auto arrBB = mk_arrow(mk_base("Bool"), mk_base("Bool"));

  // stream map: the outer lambda is checked against its declared type
  auto map_src = parse_term(
      "\\f. (fix g. \\x. (f (hd x)) :: (g (tl x)) : Stream Bool -> Stream Bool)", reg);
  check_pure(empty, map_src, mk_arrow(arrBB, mk_arrow(streamB, streamB)), reg);

  // a fully ascribed copy also synthesizes
  auto map_asc = parse_term(
      "(\\f. (fix g. \\x. (f (hd x)) :: (g (tl x)) : Stream Bool -> Stream Bool)"
      " : (Bool -> Bool) -> Stream Bool -> Stream Bool)",
      reg);
  CHECK(type_equal(infer_pure(empty, map_asc, reg),
                   mk_arrow(arrBB, mk_arrow(streamB, streamB))));

  // stream filter
  auto filter_src = parse_term(
      "\\p. (fix g. \\x. if p (hd x) then (hd x) :: (g (tl x)) else g (tl x)"
      " : Stream Bool -> Stream Bool)",
      reg);
  check_pure(empty, filter_src, mk_arrow(arrBB, mk_arrow(streamB, streamB)), reg);

  // diagonal of a stream of streams
  auto diag_src = parse_term(
      "(fix g. \\c. \\x. (hd (c (hd x))) :: ((g (\\y. c (tl y))) (tl x))"
      " : (Stream Bool -> Stream Bool) -> Stream (Stream Bool) -> Stream Bool) (\\y. y)",
      reg);
  CHECK(type_equal(infer_pure(empty, diag_src, reg),
                   mk_arrow(mk_stream(streamB), streamB)));

  // breadth-first tree traversal
  auto bft_src = parse_term(
      "\\t. (fix e. \\c. (unfold c) e : Rou (Stream Bool) -> Stream Bool)"
      " (((fix g. \\u. \\c. fold (\\k. (lbl u) :: ((unfold c) (\\r. k ((g (lft u))"
      " ((g (rght u)) r)))))"
      " : Tree Bool -> Rou (Stream Bool) -> Rou (Stream Bool)) t)"
      " (fix c. fold (\\k. k c)))",
      reg);
  check_pure(empty, bft_src, mk_arrow(mk_tree(mk_base("Bool")), streamB), reg);
}

TEST_CASE("registry rules") {
  auto reg = default_reg();
  CHECK(reg.has("Bool"));
  REQUIRE(reg.carrier("Bool").size() == 2);
  CHECK(reg.carrier("Bool")[0] == "tt");
  CHECK(reg.carrier("Bool")[1] == "ff");

  auto found = reg.find_const("ff");
  REQUIRE(found.has_value());
  CHECK(found->first == "Bool");
  CHECK(found->second == 1);

  reg.declare("Tri", {"aa", "bb", "cc"});
  CHECK(reg.has("Tri"));

  // duplicate base name and cross-base constant collisions are rejected
  CHECK_THROWS_AS(reg.declare("Tri", {"dd"}), Error);
  CHECK_THROWS_AS(reg.declare("Other", {"tt"}), Error);
  CHECK_THROWS_AS(reg.declare("Dup", {"xx", "xx"}), Error);
}

TEST_CASE("scope and error reporting") {
  auto reg = default_reg();
  PureContext empty;

  // nested shadowing parses and types (inner binding wins)
  check_pure(empty, parse_term("\\x. \\x. x", reg),
             parse_type("Bool -> Bool -> Bool", reg), reg);

  // case totality and branch order are typing-time checks
  CHECK_THROWS_AS(infer_pure(empty, parse_term("case tt of { tt -> tt }", reg), reg),
                  Error);
  CHECK_THROWS_AS(
      infer_pure(empty, parse_term("case tt of { ff -> tt | tt -> ff }", reg), reg),
      Error);

  CHECK_THROWS_AS(parse_type("rec X. Y", reg), Error);    // unbound
  CHECK_THROWS_AS(parse_type("Strea Bool", reg), Error);  // unknown base

  try {
    parse_term("\\x. (x", reg);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.pos >= 0);
  }

  CHECK_THROWS_AS(infer_pure(empty, parse_term("x", reg), reg), Error);
  CHECK_THROWS_AS(infer_pure(empty, parse_term("pi1 tt", reg), reg), Error);
  CHECK_THROWS_AS(infer_pure(empty, parse_term("(tt : Bool -> Bool)", reg), reg), Error);
}
