#include "dtlf/syntax.hpp"

#include <set>
#include <sstream>

#include "dtlf/logic.hpp"
#include "dtlf/subtype.hpp"

namespace dtlf::syntax {

namespace {

TypePtr mk_node(PureType::Kind k, std::string name, TypePtr l, TypePtr r) {
  auto t = std::make_shared<PureType>();
  t->kind = k;
  t->name = std::move(name);
  t->left = std::move(l);
  t->right = std::move(r);
  return t;
}

}  // namespace

TypePtr mk_base(const std::string& name) {
  return mk_node(PureType::Kind::Base, name, nullptr, nullptr);
}
TypePtr mk_prod(TypePtr l, TypePtr r) {
  return mk_node(PureType::Kind::Prod, "", std::move(l), std::move(r));
}
TypePtr mk_arrow(TypePtr dom, TypePtr cod) {
  return mk_node(PureType::Kind::Arrow, "", std::move(dom), std::move(cod));
}
TypePtr mk_tvar(const std::string& name) {
  return mk_node(PureType::Kind::Var, name, nullptr, nullptr);
}
TypePtr mk_rec(const std::string& binder, TypePtr body) {
  return mk_node(PureType::Kind::Rec, binder, std::move(body), nullptr);
}

TypePtr mk_stream(TypePtr elem) {
  return mk_rec("X", mk_prod(std::move(elem), mk_tvar("X")));
}
TypePtr mk_tree(TypePtr elem) {
  return mk_rec("X", mk_prod(std::move(elem), mk_prod(mk_tvar("X"), mk_tvar("X"))));
}
TypePtr mk_rou(TypePtr elem) {
  return mk_rec("X", mk_arrow(mk_arrow(mk_tvar("X"), elem), elem));
}

namespace {

bool type_equal_in(const TypePtr& a, const TypePtr& b,
                   std::vector<std::pair<std::string, std::string>>& binders) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case PureType::Kind::Base:
      return a->name == b->name;
    case PureType::Kind::Var: {
      for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
        if (it->first == a->name || it->second == b->name)
          return it->first == a->name && it->second == b->name;
      }
      return a->name == b->name;
    }
    case PureType::Kind::Prod:
    case PureType::Kind::Arrow:
      return type_equal_in(a->left, b->left, binders) &&
             type_equal_in(a->right, b->right, binders);
    case PureType::Kind::Rec: {
      binders.emplace_back(a->name, b->name);
      bool r = type_equal_in(a->left, b->left, binders);
      binders.pop_back();
      return r;
    }
  }
  return false;
}

bool closed_in(const TypePtr& t, std::vector<std::string>& bound) {
  switch (t->kind) {
    case PureType::Kind::Base:
      return true;
    case PureType::Kind::Var:
      for (const auto& x : bound)
        if (x == t->name) return true;
      return false;
    case PureType::Kind::Prod:
    case PureType::Kind::Arrow:
      return closed_in(t->left, bound) && closed_in(t->right, bound);
    case PureType::Kind::Rec: {
      bound.push_back(t->name);
      bool r = closed_in(t->left, bound);
      bound.pop_back();
      return r;
    }
  }
  return false;
}

}  // namespace

bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  std::vector<std::pair<std::string, std::string>> binders;
  return type_equal_in(a, b, binders);
}

bool type_closed(const TypePtr& t) {
  std::vector<std::string> bound;
  return closed_in(t, bound);
}

TypePtr subst_type(const TypePtr& body, const std::string& var, const TypePtr& replacement) {
  switch (body->kind) {
    case PureType::Kind::Base:
      return body;
    case PureType::Kind::Var:
      return body->name == var ? replacement : body;
    case PureType::Kind::Prod: {
      auto l = subst_type(body->left, var, replacement);
      auto r = subst_type(body->right, var, replacement);
      if (l == body->left && r == body->right) return body;
      return mk_prod(l, r);
    }
    case PureType::Kind::Arrow: {
      auto l = subst_type(body->left, var, replacement);
      auto r = subst_type(body->right, var, replacement);
      if (l == body->left && r == body->right) return body;
      return mk_arrow(l, r);
    }
    case PureType::Kind::Rec: {
      if (body->name == var) return body;  // shadowed
      auto inner = subst_type(body->left, var, replacement);
      if (inner == body->left) return body;
      return mk_rec(body->name, inner);
    }
  }
  return body;
}

TypePtr unfold_rec(const TypePtr& rec_type) {
  if (rec_type->kind != PureType::Kind::Rec)
    throw Error("unfold_rec: not a rec type: " + print_type(rec_type));
  return subst_type(rec_type->left, rec_type->name, rec_type);
}

TypePtr stream_elem(const TypePtr& t) {
  if (t->kind != PureType::Kind::Rec) return nullptr;
  const auto& b = t->left;
  if (b->kind != PureType::Kind::Prod) return nullptr;
  if (b->right->kind != PureType::Kind::Var || b->right->name != t->name) return nullptr;
  std::vector<std::string> bound;
  if (!closed_in(b->left, bound)) return nullptr;
  return b->left;
}

TypePtr tree_elem(const TypePtr& t) {
  if (t->kind != PureType::Kind::Rec) return nullptr;
  const auto& b = t->left;
  if (b->kind != PureType::Kind::Prod) return nullptr;
  const auto& kids = b->right;
  if (kids->kind != PureType::Kind::Prod) return nullptr;
  if (kids->left->kind != PureType::Kind::Var || kids->left->name != t->name) return nullptr;
  if (kids->right->kind != PureType::Kind::Var || kids->right->name != t->name) return nullptr;
  std::vector<std::string> bound;
  if (!closed_in(b->left, bound)) return nullptr;
  return b->left;
}

TypePtr rou_elem(const TypePtr& t) {
  if (t->kind != PureType::Kind::Rec) return nullptr;
  const auto& b = t->left;
  if (b->kind != PureType::Kind::Arrow) return nullptr;
  const auto& dom = b->left;
  if (dom->kind != PureType::Kind::Arrow) return nullptr;
  if (dom->left->kind != PureType::Kind::Var || dom->left->name != t->name) return nullptr;
  std::vector<std::string> bound;
  if (!closed_in(dom->right, bound)) return nullptr;
  if (!type_equal(dom->right, b->right)) return nullptr;
  return b->right;
}

namespace {

// prec: 0 arrow, 1 prod, 2 atom (base, var, sugar-applied, parenthesized)
void print_type_in(std::ostringstream& os, const TypePtr& t, int prec) {
  if (auto e = stream_elem(t)) {
    if (prec > 2) os << '(';
    os << "Stream ";
    print_type_in(os, e, 3);
    if (prec > 2) os << ')';
    return;
  }
  if (auto e = tree_elem(t)) {
    if (prec > 2) os << '(';
    os << "Tree ";
    print_type_in(os, e, 3);
    if (prec > 2) os << ')';
    return;
  }
  if (auto e = rou_elem(t)) {
    if (prec > 2) os << '(';
    os << "Rou ";
    print_type_in(os, e, 3);
    if (prec > 2) os << ')';
    return;
  }
  switch (t->kind) {
    case PureType::Kind::Base:
    case PureType::Kind::Var:
      os << t->name;
      return;
    case PureType::Kind::Prod:
      if (prec > 1) os << '(';
      print_type_in(os, t->left, 2);
      os << " * ";
      print_type_in(os, t->right, 2);
      if (prec > 1) os << ')';
      return;
    case PureType::Kind::Arrow:
      if (prec > 0) os << '(';
      print_type_in(os, t->left, 1);
      os << " -> ";
      print_type_in(os, t->right, 0);
      if (prec > 0) os << ')';
      return;
    case PureType::Kind::Rec:
      if (prec > 0) os << '(';
      os << "rec " << t->name << ". ";
      print_type_in(os, t->left, 0);
      if (prec > 0) os << ')';
      return;
  }
}

}  // namespace

std::string print_type(const TypePtr& t) {
  std::ostringstream os;
  print_type_in(os, t, 0);
  return os.str();
}

BaseRegistry::BaseRegistry() { carriers["Bool"] = {"tt", "ff"}; }

void BaseRegistry::declare(const std::string& name, const std::vector<std::string>& consts) {
  if (name.empty()) throw Error("base declaration: empty name");
  if (consts.empty()) throw Error("base " + name + ": empty carrier");
  if (carriers.count(name)) throw Error("base " + name + ": already declared");
  std::set<std::string> seen;
  for (const auto& c : consts) {
    if (c.empty()) throw Error("base " + name + ": empty constant");
    if (!seen.insert(c).second) throw Error("base " + name + ": duplicate constant " + c);
    if (find_const(c)) throw Error("constant " + c + " already declared in another base");
  }
  carriers[name] = consts;
}

bool BaseRegistry::has(const std::string& name) const { return carriers.count(name) > 0; }

const std::vector<std::string>& BaseRegistry::carrier(const std::string& name) const {
  auto it = carriers.find(name);
  if (it == carriers.end()) throw Error("unknown base type " + name);
  return it->second;
}

std::optional<std::pair<std::string, int>> BaseRegistry::find_const(const std::string& c) const {
  for (const auto& [name, consts] : carriers)
    for (size_t i = 0; i < consts.size(); ++i)
      if (consts[i] == c) return std::make_pair(name, static_cast<int>(i));
  return std::nullopt;
}

TermPtr mk_var(const std::string& x) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Var;
  t->name = x;
  return t;
}
TermPtr mk_lam(const std::string& x, TermPtr body) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Lam;
  t->name = x;
  t->a = std::move(body);
  return t;
}
TermPtr mk_app(TermPtr f, TermPtr arg) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::App;
  t->a = std::move(f);
  t->b = std::move(arg);
  return t;
}
TermPtr mk_fix(const std::string& x, TermPtr body, std::vector<logic::FormulaPtr> invariants) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Fix;
  t->name = x;
  t->a = std::move(body);
  t->invariants = std::move(invariants);
  return t;
}
TermPtr mk_fold(TermPtr inner) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Fold;
  t->a = std::move(inner);
  return t;
}
TermPtr mk_unfold(TermPtr inner) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Unfold;
  t->a = std::move(inner);
  return t;
}
TermPtr mk_pair(TermPtr l, TermPtr r) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Pair;
  t->a = std::move(l);
  t->b = std::move(r);
  return t;
}
TermPtr mk_proj(int index, TermPtr inner) {
  if (index != 1 && index != 2) throw Error("proj index must be 1 or 2");
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Proj;
  t->index = index;
  t->a = std::move(inner);
  return t;
}
TermPtr mk_const(const std::string& base, const std::string& c) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Const;
  t->base = base;
  t->name = c;
  return t;
}
TermPtr mk_case(TermPtr scrutinee, std::vector<std::pair<std::string, TermPtr>> branches) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Case;
  t->a = std::move(scrutinee);
  t->branches = std::move(branches);
  return t;
}
TermPtr mk_ascribe(TermPtr inner, TypePtr tau, subtype::RefPtr ref) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Ascribe;
  t->a = std::move(inner);
  t->tau = std::move(tau);
  t->ref = std::move(ref);
  return t;
}

namespace {

const TypePtr* lookup(const PureContext& ctx, const std::string& x) {
  for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
    if (it->first == x) return &it->second;
  return nullptr;
}

void check_case_branches(const Term& t, const std::string& base, const BaseRegistry& reg) {
  const auto& carrier = reg.carrier(base);
  if (t.branches.size() != carrier.size())
    throw Error("case over " + base + ": expected " + std::to_string(carrier.size()) +
                " branches, got " + std::to_string(t.branches.size()));
  for (size_t i = 0; i < carrier.size(); ++i)
    if (t.branches[i].first != carrier[i])
      throw Error("case over " + base + ": branch " + std::to_string(i) + " should be " +
                  carrier[i] + ", got " + t.branches[i].first);
}

}  // namespace

TypePtr infer_pure(const PureContext& ctx, const TermPtr& t, const BaseRegistry& reg) {
  switch (t->kind) {
    case Term::Kind::Var: {
      if (const TypePtr* ty = lookup(ctx, t->name)) return *ty;
      throw Error("unbound variable " + t->name);
    }
    case Term::Kind::Const: {
      if (!reg.has(t->base)) throw Error("unknown base type " + t->base);
      const auto& carrier = reg.carrier(t->base);
      for (const auto& c : carrier)
        if (c == t->name) return mk_base(t->base);
      throw Error("constant " + t->name + " not in carrier of " + t->base);
    }
    case Term::Kind::App: {
      TypePtr fty = infer_pure(ctx, t->a, reg);
      if (fty->kind != PureType::Kind::Arrow)
        throw Error("application of non-function of type " + print_type(fty));
      check_pure(ctx, t->b, fty->left, reg);
      return fty->right;
    }
    case Term::Kind::Pair: {
      TypePtr l = infer_pure(ctx, t->a, reg);
      TypePtr r = infer_pure(ctx, t->b, reg);
      return mk_prod(l, r);
    }
    case Term::Kind::Proj: {
      TypePtr ty = infer_pure(ctx, t->a, reg);
      if (ty->kind != PureType::Kind::Prod)
        throw Error("projection from non-product of type " + print_type(ty));
      return t->index == 1 ? ty->left : ty->right;
    }
    case Term::Kind::Unfold: {
      TypePtr ty = infer_pure(ctx, t->a, reg);
      if (ty->kind != PureType::Kind::Rec)
        throw Error("unfold of non-recursive type " + print_type(ty));
      return unfold_rec(ty);
    }
    case Term::Kind::Ascribe: {
      if (!t->tau) throw Error("ascription without a type");
      check_pure(ctx, t->a, t->tau, reg);
      return t->tau;
    }
    case Term::Kind::Case: {
      TypePtr sty = infer_pure(ctx, t->a, reg);
      if (sty->kind != PureType::Kind::Base)
        throw Error("case scrutinee must have base type, got " + print_type(sty));
      check_case_branches(*t, sty->name, reg);
      TypePtr first = infer_pure(ctx, t->branches[0].second, reg);
      for (size_t i = 1; i < t->branches.size(); ++i)
        check_pure(ctx, t->branches[i].second, first, reg);
      return first;
    }
    case Term::Kind::Lam:
      throw Error("cannot synthesize a type for a lambda; ascribe it");
    case Term::Kind::Fix:
      throw Error("cannot synthesize a type for fix; ascribe it");
    case Term::Kind::Fold:
      throw Error("cannot synthesize a type for fold; ascribe it");
  }
  throw Error("infer_pure: unreachable");
}

void check_pure(const PureContext& ctx, const TermPtr& t, const TypePtr& expected,
                const BaseRegistry& reg) {
  switch (t->kind) {
    case Term::Kind::Lam: {
      if (expected->kind != PureType::Kind::Arrow)
        throw Error("lambda checked against non-arrow " + print_type(expected));
      PureContext ctx2 = ctx;
      ctx2.emplace_back(t->name, expected->left);
      check_pure(ctx2, t->a, expected->right, reg);
      return;
    }
    case Term::Kind::Fix: {
      PureContext ctx2 = ctx;
      ctx2.emplace_back(t->name, expected);
      check_pure(ctx2, t->a, expected, reg);
      return;
    }
    case Term::Kind::Fold: {
      if (expected->kind != PureType::Kind::Rec)
        throw Error("fold checked against non-recursive " + print_type(expected));
      check_pure(ctx, t->a, unfold_rec(expected), reg);
      return;
    }
    case Term::Kind::Pair: {
      if (expected->kind != PureType::Kind::Prod)
        throw Error("pair checked against non-product " + print_type(expected));
      check_pure(ctx, t->a, expected->left, reg);
      check_pure(ctx, t->b, expected->right, reg);
      return;
    }
    case Term::Kind::Case: {
      TypePtr sty = infer_pure(ctx, t->a, reg);
      if (sty->kind != PureType::Kind::Base)
        throw Error("case scrutinee must have base type, got " + print_type(sty));
      check_case_branches(*t, sty->name, reg);
      for (const auto& [c, branch] : t->branches) check_pure(ctx, branch, expected, reg);
      return;
    }
    default: {
      TypePtr got = infer_pure(ctx, t, reg);
      if (!type_equal(got, expected))
        throw Error("type mismatch: expected " + print_type(expected) + ", got " +
                    print_type(got));
      return;
    }
  }
}

namespace {

// prec: 0 binder level (lam, fix, case), 1 application, 2 atom
void print_term_in(std::ostringstream& os, const TermPtr& t, int prec);

void print_binder_body(std::ostringstream& os, const TermPtr& t) {
  print_term_in(os, t, 0);
}

void print_term_in(std::ostringstream& os, const TermPtr& t, int prec) {
  switch (t->kind) {
    case Term::Kind::Var:
      os << t->name;
      return;
    case Term::Kind::Const:
      os << t->name;
      return;
    case Term::Kind::Lam:
      if (prec > 0) os << '(';
      os << '\\' << t->name << ". ";
      print_binder_body(os, t->a);
      if (prec > 0) os << ')';
      return;
    case Term::Kind::Fix:
      if (prec > 0) os << '(';
      os << "fix " << t->name;
      if (!t->invariants.empty()) {
        os << " [";
        for (size_t i = 0; i < t->invariants.size(); ++i) {
          if (i) os << "; ";
          os << logic::print_formula(t->invariants[i]);
        }
        os << ']';
      }
      os << ". ";
      print_binder_body(os, t->a);
      if (prec > 0) os << ')';
      return;
    case Term::Kind::App:
      if (prec > 1) os << '(';
      print_term_in(os, t->a, 1);
      os << ' ';
      print_term_in(os, t->b, 2);
      if (prec > 1) os << ')';
      return;
    case Term::Kind::Fold:
    case Term::Kind::Unfold:
      if (prec > 1) os << '(';
      os << (t->kind == Term::Kind::Fold ? "fold " : "unfold ");
      print_term_in(os, t->a, 2);
      if (prec > 1) os << ')';
      return;
    case Term::Kind::Proj:
      if (prec > 1) os << '(';
      os << (t->index == 1 ? "pi1 " : "pi2 ");
      print_term_in(os, t->a, 2);
      if (prec > 1) os << ')';
      return;
    case Term::Kind::Pair:
      os << '(';
      print_term_in(os, t->a, 0);
      os << ", ";
      print_term_in(os, t->b, 0);
      os << ')';
      return;
    case Term::Kind::Case:
      if (prec > 0) os << '(';
      os << "case ";
      print_term_in(os, t->a, 1);
      os << " of { ";
      for (size_t i = 0; i < t->branches.size(); ++i) {
        if (i) os << " | ";
        os << t->branches[i].first << " -> ";
        print_term_in(os, t->branches[i].second, 0);
      }
      os << " }";
      if (prec > 0) os << ')';
      return;
    case Term::Kind::Ascribe:
      os << '(';
      print_term_in(os, t->a, 0);
      os << " : " << (t->ref ? subtype::print_reftype(t->ref) : print_type(t->tau));
      os << ')';
      return;
  }
}

}  // namespace

std::string print_term(const TermPtr& t) {
  std::ostringstream os;
  print_term_in(os, t, 0);
  return os.str();
}

}  // namespace dtlf::syntax
