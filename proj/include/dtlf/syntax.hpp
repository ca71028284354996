#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dtlf {

// Positioned error used by parsers, type checkers and the CLI.
struct Error : std::runtime_error {
  int pos;
  explicit Error(const std::string& msg, int p = -1) : std::runtime_error(msg), pos(p) {}
};

}  // namespace dtlf

namespace dtlf::logic {
struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;
}  // namespace dtlf::logic

namespace dtlf::subtype {
struct RefType;
using RefPtr = std::shared_ptr<const RefType>;
}  // namespace dtlf::subtype

namespace dtlf::syntax {

struct PureType;
using TypePtr = std::shared_ptr<const PureType>;

// Closed types over base / product / arrow / rec. A Var node is only legal
// under an enclosing Rec binding its name.
struct PureType {
  enum class Kind { Base, Prod, Arrow, Var, Rec };
  Kind kind;
  std::string name;    // Base name, Var name, Rec binder
  TypePtr left;        // Prod left, Arrow dom, Rec body
  TypePtr right;       // Prod right, Arrow cod
};

TypePtr mk_base(const std::string& name);
TypePtr mk_prod(TypePtr l, TypePtr r);
TypePtr mk_arrow(TypePtr dom, TypePtr cod);
TypePtr mk_tvar(const std::string& name);
TypePtr mk_rec(const std::string& binder, TypePtr body);

// Sugar builders: Stream t = rec X. t * X, Tree t = rec X. t * (X * X),
// Rou t = rec X. (X -> t) -> t.
TypePtr mk_stream(TypePtr elem);
TypePtr mk_tree(TypePtr elem);
TypePtr mk_rou(TypePtr elem);

bool type_equal(const TypePtr& a, const TypePtr& b);
bool type_closed(const TypePtr& t);

// Sugar recognizers: the element type when t matches the stream / tree / rou
// pattern, null otherwise.
TypePtr stream_elem(const TypePtr& t);
TypePtr tree_elem(const TypePtr& t);
TypePtr rou_elem(const TypePtr& t);

// Capture-free substitution body[replacement / var]; replacement must be closed.
TypePtr subst_type(const TypePtr& body, const std::string& var, const TypePtr& replacement);

// One-step unfolding of a Rec type: body[rec X. body / X].
TypePtr unfold_rec(const TypePtr& rec_type);

std::string print_type(const TypePtr& t);

// Registry of base types with finite carriers. Constant names are globally
// unique across bases so that a bare constant resolves without annotation.
struct BaseRegistry {
  // name -> ordered carrier
  std::map<std::string, std::vector<std::string>> carriers;

  BaseRegistry();  // starts with Bool = [tt, ff]
  void declare(const std::string& name, const std::vector<std::string>& consts);
  bool has(const std::string& name) const;
  const std::vector<std::string>& carrier(const std::string& name) const;
  // constant -> (base name, index in carrier)
  std::optional<std::pair<std::string, int>> find_const(const std::string& c) const;
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Var, Lam, App, Fix, Fold, Unfold, Pair, Proj, Const, Case, Ascribe };
  Kind kind;
  std::string name;  // Var, Lam binder, Fix binder, Const constant
  std::string base;  // Const base type
  int index = 0;     // Proj: 1 or 2
  TermPtr a;         // Lam/Fix body, App fun, Fold/Unfold/Proj child, Pair left, Case scrutinee, Ascribe term
  TermPtr b;         // App arg, Pair right
  // Case branches in carrier order, total over the scrutinee's base.
  std::vector<std::pair<std::string, TermPtr>> branches;
  // Fix invariant chain (each entry Conjunctive); empty for plain fix.
  std::vector<logic::FormulaPtr> invariants;
  // Ascription: underlying pure type always present, refinement view optional.
  TypePtr tau;
  subtype::RefPtr ref;
};

TermPtr mk_var(const std::string& x);
TermPtr mk_lam(const std::string& x, TermPtr body);
TermPtr mk_app(TermPtr f, TermPtr arg);
TermPtr mk_fix(const std::string& x, TermPtr body,
               std::vector<logic::FormulaPtr> invariants = {});
TermPtr mk_fold(TermPtr t);
TermPtr mk_unfold(TermPtr t);
TermPtr mk_pair(TermPtr l, TermPtr r);
TermPtr mk_proj(int index, TermPtr t);
TermPtr mk_const(const std::string& base, const std::string& c);
TermPtr mk_case(TermPtr scrutinee, std::vector<std::pair<std::string, TermPtr>> branches);
TermPtr mk_ascribe(TermPtr t, TypePtr tau, subtype::RefPtr ref = nullptr);

using PureContext = std::vector<std::pair<std::string, TypePtr>>;

// Surface syntax parsers (implemented in parser.cpp).
TypePtr parse_type(const std::string& text, const BaseRegistry& reg);
TermPtr parse_term(const std::string& text, const BaseRegistry& reg);

// Pure typing per the rules of the unrefined calculus. Bidirectional: lam,
// fix and fold synthesize only under an ascription or checking position.
TypePtr infer_pure(const PureContext& ctx, const TermPtr& t, const BaseRegistry& reg);
void check_pure(const PureContext& ctx, const TermPtr& t, const TypePtr& expected,
                const BaseRegistry& reg);

std::string print_term(const TermPtr& t);

}  // namespace dtlf::syntax
