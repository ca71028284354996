#include "dtlf/subtype.hpp"

#include <sstream>

namespace dtlf::subtype {

RefPtr mk_puret(syntax::TypePtr tau) {
  auto t = std::make_shared<RefType>();
  t->kind = RefType::Kind::PureT;
  t->tau = std::move(tau);
  return t;
}

RefPtr mk_refine(syntax::TypePtr tau, logic::FormulaPtr phi) {
  auto t = std::make_shared<RefType>();
  t->kind = RefType::Kind::Refine;
  t->tau = std::move(tau);
  t->phi = std::move(phi);
  return t;
}

RefPtr mk_prodt(RefPtr left, RefPtr right) {
  auto t = std::make_shared<RefType>();
  t->kind = RefType::Kind::ProdT;
  t->left = std::move(left);
  t->right = std::move(right);
  return t;
}

RefPtr mk_arrowt(RefPtr left, RefPtr right) {
  auto t = std::make_shared<RefType>();
  t->kind = RefType::Kind::ArrowT;
  t->left = std::move(left);
  t->right = std::move(right);
  return t;
}

syntax::TypePtr underlying(const RefPtr& t) {
  switch (t->kind) {
    case RefType::Kind::PureT:
    case RefType::Kind::Refine:
      return t->tau;
    case RefType::Kind::ProdT:
      return syntax::mk_prod(underlying(t->left), underlying(t->right));
    case RefType::Kind::ArrowT:
      return syntax::mk_arrow(underlying(t->left), underlying(t->right));
  }
  return t->tau;
}

std::pair<syntax::TypePtr, logic::FormulaPtr> char_type(const RefPtr& t) {
  switch (t->kind) {
    case RefType::Kind::PureT:
      return {t->tau, logic::f_true()};
    case RefType::Kind::Refine:
      return {t->tau, t->phi};
    case RefType::Kind::ProdT: {
      auto [lt, lf] = char_type(t->left);
      auto [rt, rf] = char_type(t->right);
      return {syntax::mk_prod(lt, rt),
              logic::mk_andf({logic::mk_pi1f(lf), logic::mk_pi2f(rf)})};
    }
    case RefType::Kind::ArrowT: {
      auto [lt, lf] = char_type(t->left);
      auto [rt, rf] = char_type(t->right);
      return {syntax::mk_arrow(lt, rt), logic::mk_arrowf(lf, rf)};
    }
  }
  return {t->tau, logic::f_true()};
}

bool subtype(const RefPtr& s, const RefPtr& t, int k,
             const syntax::BaseRegistry& reg) {
  auto [st, sf] = char_type(s);
  auto [tt, tf] = char_type(t);
  if (!syntax::type_equal(st, tt))
    throw Error("subtype: underlying types differ: " + syntax::print_type(st) +
                " vs " + syntax::print_type(tt));
  return logic::entail_fin(st, logic::truncate(sf, k), logic::truncate(tf, k), reg);
}

namespace {

// prec: 0 arrow (right assoc), 1 prod, 2 atom
void print_in(std::ostringstream& os, const RefPtr& t, int prec) {
  switch (t->kind) {
    case RefType::Kind::PureT: {
      using TK = syntax::PureType::Kind;
      bool wrap = (prec > 0 && t->tau->kind == TK::Arrow) ||
                  (prec > 1 && t->tau->kind == TK::Prod);
      if (wrap) os << '(';
      os << syntax::print_type(t->tau);
      if (wrap) os << ')';
      return;
    }
    case RefType::Kind::Refine:
      os << "{ " << syntax::print_type(t->tau) << " | " << logic::print_formula(t->phi)
         << " }";
      return;
    case RefType::Kind::ProdT:
      if (prec > 1) os << '(';
      print_in(os, t->left, 2);
      os << " * ";
      print_in(os, t->right, 2);
      if (prec > 1) os << ')';
      return;
    case RefType::Kind::ArrowT:
      if (prec > 0) os << '(';
      print_in(os, t->left, 1);
      os << " -> ";
      print_in(os, t->right, 0);
      if (prec > 0) os << ')';
      return;
  }
}

}  // namespace

std::string print_reftype(const RefPtr& t) {
  std::ostringstream os;
  print_in(os, t, 0);
  return os.str();
}

}  // namespace dtlf::subtype
