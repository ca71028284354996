#include "dtlf/logic.hpp"

#include <algorithm>
#include <sstream>

namespace dtlf::logic {

namespace {

std::shared_ptr<Formula> mk_node(Formula::Kind k) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  return f;
}

bool is_true(const FormulaPtr& f) {
  return f->kind == Formula::Kind::And && f->items.empty();
}
bool is_false(const FormulaPtr& f) {
  return f->kind == Formula::Kind::Or && f->items.empty();
}

bool is_schema_kind(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Box:
    case Formula::Kind::Diam:
    case Formula::Kind::AllBox:
    case Formula::Kind::ExBox:
    case Formula::Kind::AllDiam:
    case Formula::Kind::ExDiam:
      return true;
    default:
      return false;
  }
}

bool is_modal_kind(Formula::Kind k) {
  return k == Formula::Kind::Pi1 || k == Formula::Kind::Pi2 || k == Formula::Kind::Fold;
}

FormulaPtr mk_modal(Formula::Kind k, FormulaPtr body) {
  auto f = mk_node(k);
  f->a = std::move(body);
  return f;
}

}  // namespace

FormulaPtr mk_atomf(const std::string& base, const std::string& cname) {
  auto f = mk_node(Formula::Kind::Atom);
  f->base = base;
  f->cname = cname;
  return f;
}
FormulaPtr mk_pi1f(FormulaPtr body) { return mk_modal(Formula::Kind::Pi1, std::move(body)); }
FormulaPtr mk_pi2f(FormulaPtr body) { return mk_modal(Formula::Kind::Pi2, std::move(body)); }
FormulaPtr mk_foldf(FormulaPtr body) { return mk_modal(Formula::Kind::Fold, std::move(body)); }
FormulaPtr mk_arrowf(FormulaPtr dom, FormulaPtr cod) {
  auto f = mk_node(Formula::Kind::Arrow);
  f->a = std::move(dom);
  f->b = std::move(cod);
  return f;
}
FormulaPtr mk_andf(std::vector<FormulaPtr> items) {
  auto f = mk_node(Formula::Kind::And);
  f->items = std::move(items);
  return f;
}
FormulaPtr mk_orf(std::vector<FormulaPtr> items) {
  auto f = mk_node(Formula::Kind::Or);
  f->items = std::move(items);
  return f;
}
FormulaPtr mk_schema(Formula::Kind kind, FormulaPtr body) {
  if (!is_schema_kind(kind)) throw Error("mk_schema: not a schema kind");
  return mk_modal(kind, std::move(body));
}
FormulaPtr mk_mu(const std::string& var, FormulaPtr body) {
  auto f = mk_node(Formula::Kind::Mu);
  f->var = var;
  f->a = std::move(body);
  return f;
}
FormulaPtr mk_nu(const std::string& var, FormulaPtr body) {
  auto f = mk_node(Formula::Kind::Nu);
  f->var = var;
  f->a = std::move(body);
  return f;
}
FormulaPtr mk_svar(const std::string& var) {
  auto f = mk_node(Formula::Kind::SVar);
  f->var = var;
  return f;
}
FormulaPtr f_true() {
  static FormulaPtr t = mk_andf({});
  return t;
}
FormulaPtr f_false() {
  static FormulaPtr f = mk_orf({});
  return f;
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Formula::Kind::Atom:
      return a->base == b->base && a->cname == b->cname;
    case Formula::Kind::SVar:
      return a->var == b->var;
    case Formula::Kind::Mu:
    case Formula::Kind::Nu:
      return a->var == b->var && formula_equal(a->a, b->a);
    case Formula::Kind::Arrow:
      return formula_equal(a->a, b->a) && formula_equal(a->b, b->b);
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      if (a->items.size() != b->items.size()) return false;
      for (size_t i = 0; i < a->items.size(); ++i)
        if (!formula_equal(a->items[i], b->items[i])) return false;
      return true;
    }
    default:
      return formula_equal(a->a, b->a);
  }
}

int formula_size(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Atom:
    case Formula::Kind::SVar:
      return 1;
    case Formula::Kind::Arrow:
      return 1 + formula_size(f->a) + formula_size(f->b);
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      int n = 1;
      for (const auto& i : f->items) n += formula_size(i);
      return n;
    }
    default:
      return 1 + formula_size(f->a);
  }
}

bool has_schema(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Atom:
      return false;
    case Formula::Kind::SVar:
    case Formula::Kind::Mu:
    case Formula::Kind::Nu:
      return true;
    case Formula::Kind::Arrow:
      return has_schema(f->a) || has_schema(f->b);
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      for (const auto& i : f->items)
        if (has_schema(i)) return true;
      return false;
    }
    default:
      if (is_schema_kind(f->kind)) return true;
      return has_schema(f->a);
  }
}

namespace {

// prec: 0 binder (mu/nu), 1 arrow (right assoc), 2 or, 3 and, 4 prefix, 5 atom
void print_in(std::ostringstream& os, const FormulaPtr& f, int prec) {
  switch (f->kind) {
    case Formula::Kind::Atom:
      os << '<' << f->cname << '>';
      return;
    case Formula::Kind::SVar:
      os << f->var;
      return;
    case Formula::Kind::And: {
      if (f->items.empty()) {
        os << "true";
        return;
      }
      if (f->items.size() == 1) {
        print_in(os, f->items[0], prec);
        return;
      }
      if (prec > 3) os << '(';
      for (size_t i = 0; i < f->items.size(); ++i) {
        if (i) os << " /\\ ";
        print_in(os, f->items[i], 4);
      }
      if (prec > 3) os << ')';
      return;
    }
    case Formula::Kind::Or: {
      if (f->items.empty()) {
        os << "false";
        return;
      }
      if (f->items.size() == 1) {
        print_in(os, f->items[0], prec);
        return;
      }
      if (prec > 2) os << '(';
      for (size_t i = 0; i < f->items.size(); ++i) {
        if (i) os << " \\/ ";
        print_in(os, f->items[i], 3);
      }
      if (prec > 2) os << ')';
      return;
    }
    case Formula::Kind::Arrow:
      if (prec > 1) os << '(';
      print_in(os, f->a, 2);
      os << " -o ";
      print_in(os, f->b, 1);
      if (prec > 1) os << ')';
      return;
    case Formula::Kind::Mu:
    case Formula::Kind::Nu:
      if (prec > 0) os << '(';
      os << (f->kind == Formula::Kind::Mu ? "mu " : "nu ") << f->var << ". ";
      print_in(os, f->a, 0);
      if (prec > 0) os << ')';
      return;
    default: {
      if (prec > 4) os << '(';
      switch (f->kind) {
        case Formula::Kind::Pi1: os << "[pi1] "; break;
        case Formula::Kind::Pi2: os << "[pi2] "; break;
        case Formula::Kind::Fold: os << "[fold] "; break;
        case Formula::Kind::Box: os << "[] "; break;
        case Formula::Kind::Diam: os << "<> "; break;
        case Formula::Kind::AllBox: os << "AG "; break;
        case Formula::Kind::ExBox: os << "EG "; break;
        case Formula::Kind::AllDiam: os << "AF "; break;
        case Formula::Kind::ExDiam: os << "EF "; break;
        default: break;
      }
      print_in(os, f->a, 5);
      if (prec > 4) os << ')';
      return;
    }
  }
}

}  // namespace

std::string print_formula(const FormulaPtr& f) {
  std::ostringstream os;
  print_in(os, f, 0);
  return os.str();
}

namespace {

void validate_in(const syntax::TypePtr& tau, const FormulaPtr& f,
                 const syntax::BaseRegistry& reg, std::vector<std::string>& svars,
                 bool in_arrow_dom) {
  using TK = syntax::PureType::Kind;
  switch (f->kind) {
    case Formula::Kind::Atom: {
      if (tau->kind != TK::Base || tau->name != f->base)
        throw Error("atom <" + f->cname + "> not at base type " + syntax::print_type(tau));
      const auto& carrier = reg.carrier(f->base);
      if (std::find(carrier.begin(), carrier.end(), f->cname) == carrier.end())
        throw Error("constant " + f->cname + " not in carrier of " + f->base);
      return;
    }
    case Formula::Kind::Pi1:
    case Formula::Kind::Pi2: {
      if (tau->kind != TK::Prod)
        throw Error("projection modality at non-product " + syntax::print_type(tau));
      validate_in(f->kind == Formula::Kind::Pi1 ? tau->left : tau->right, f->a, reg, svars,
                  in_arrow_dom);
      return;
    }
    case Formula::Kind::Fold: {
      if (tau->kind != TK::Rec)
        throw Error("fold modality at non-recursive " + syntax::print_type(tau));
      validate_in(syntax::unfold_rec(tau), f->a, reg, svars, in_arrow_dom);
      return;
    }
    case Formula::Kind::Arrow: {
      if (tau->kind != TK::Arrow)
        throw Error("-o formula at non-arrow " + syntax::print_type(tau));
      // positivity: fixpoint variables must not cross into the domain
      std::vector<std::string> none;
      validate_in(tau->left, f->a, reg, none, true);
      validate_in(tau->right, f->b, reg, svars, in_arrow_dom);
      return;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      for (const auto& i : f->items) validate_in(tau, i, reg, svars, in_arrow_dom);
      return;
    }
    case Formula::Kind::Box:
    case Formula::Kind::Diam: {
      if (!syntax::stream_elem(tau))
        throw Error("stream schema at non-stream type " + syntax::print_type(tau));
      validate_in(tau, f->a, reg, svars, in_arrow_dom);
      return;
    }
    case Formula::Kind::AllBox:
    case Formula::Kind::ExBox:
    case Formula::Kind::AllDiam:
    case Formula::Kind::ExDiam: {
      if (!syntax::tree_elem(tau))
        throw Error("tree schema at non-tree type " + syntax::print_type(tau));
      validate_in(tau, f->a, reg, svars, in_arrow_dom);
      return;
    }
    case Formula::Kind::Mu:
    case Formula::Kind::Nu: {
      svars.push_back(f->var);
      validate_in(tau, f->a, reg, svars, in_arrow_dom);
      svars.pop_back();
      return;
    }
    case Formula::Kind::SVar: {
      if (std::find(svars.begin(), svars.end(), f->var) == svars.end())
        throw Error(in_arrow_dom
                        ? "fixpoint variable " + f->var + " in an arrow domain"
                        : "unbound fixpoint variable " + f->var);
      return;
    }
  }
}

}  // namespace

void validate_formula(const syntax::TypePtr& tau, const FormulaPtr& f,
                      const syntax::BaseRegistry& reg) {
  std::vector<std::string> svars;
  validate_in(tau, f, reg, svars, false);
}

std::string class_name(FormulaClass c) {
  switch (c) {
    case FormulaClass::Conjunctive: return "Conjunctive";
    case FormulaClass::Normal: return "Normal";
    case FormulaClass::Open: return "Open";
    case FormulaClass::General: return "General";
  }
  return "General";
}

namespace {

bool is_conjunctive(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Atom:
      return true;
    case Formula::Kind::Pi1:
    case Formula::Kind::Pi2:
    case Formula::Kind::Fold:
      return is_conjunctive(f->a);
    case Formula::Kind::Arrow:
      return is_conjunctive(f->a) && is_conjunctive(f->b);
    case Formula::Kind::And: {
      for (const auto& i : f->items)
        if (!is_conjunctive(i)) return false;
      return true;
    }
    case Formula::Kind::Or:
      return f->items.empty();
    default:
      return false;
  }
}

bool is_open(const FormulaPtr& f) {
  if (is_conjunctive(f)) return true;
  if (f->kind == Formula::Kind::And || f->kind == Formula::Kind::Or) {
    for (const auto& i : f->items)
      if (!is_open(i)) return false;
    return true;
  }
  return false;
}

}  // namespace

FormulaClass classify(const FormulaPtr& f) {
  if (has_schema(f)) return FormulaClass::General;
  if (is_conjunctive(f)) return FormulaClass::Conjunctive;
  if (f->kind == Formula::Kind::And) {
    bool normal = true;
    for (const auto& i : f->items) {
      if (i->kind != Formula::Kind::Or) { normal = false; break; }
      for (const auto& j : i->items)
        if (!is_conjunctive(j)) { normal = false; break; }
      if (!normal) break;
    }
    if (normal) return FormulaClass::Normal;
  }
  if (is_open(f)) return FormulaClass::Open;
  return FormulaClass::General;
}

Compiled compile(const syntax::TypePtr& tau, const FormulaPtr& phi,
                 const syntax::BaseRegistry& reg) {
  using TK = syntax::PureType::Kind;
  if (classify(phi) != FormulaClass::Conjunctive)
    throw Error("compile: not a Conjunctive formula: " + print_formula(phi));
  switch (phi->kind) {
    case Formula::Kind::And: {
      findom::FinPtr acc = findom::fe_bot();
      for (const auto& item : phi->items) {
        Compiled c = compile(tau, item, reg);
        if (c.empty()) return Compiled::mk_empty();
        auto s = findom::sup_nt(acc, *c.up);
        if (!s) return Compiled::mk_empty();
        acc = *s;
      }
      return Compiled::mk_up(acc);
    }
    case Formula::Kind::Or: {
      if (phi->items.empty()) return Compiled::mk_empty();
      throw Error("compile: not a Conjunctive formula: " + print_formula(phi));
    }
    case Formula::Kind::Atom: {
      auto hit = reg.find_const(phi->cname);
      if (!hit || hit->first != phi->base)
        throw Error("compile: unknown constant <" + phi->cname + ">");
      return Compiled::mk_up(findom::fe_atom(phi->base, phi->cname, hit->second));
    }
    case Formula::Kind::Pi1:
    case Formula::Kind::Pi2: {
      if (tau->kind != TK::Prod)
        throw Error("compile: projection modality at " + syntax::print_type(tau));
      bool fst = phi->kind == Formula::Kind::Pi1;
      Compiled c = compile(fst ? tau->left : tau->right, phi->a, reg);
      if (c.empty()) return Compiled::mk_empty();
      auto d = fst ? findom::fe_pair(*c.up, findom::fe_bot())
                   : findom::fe_pair(findom::fe_bot(), *c.up);
      return Compiled::mk_up(findom::canonicalize(d));
    }
    case Formula::Kind::Fold: {
      if (tau->kind != TK::Rec)
        throw Error("compile: fold modality at " + syntax::print_type(tau));
      Compiled c = compile(syntax::unfold_rec(tau), phi->a, reg);
      if (c.empty()) return Compiled::mk_empty();
      return Compiled::mk_up(findom::canonicalize(findom::fe_fold(*c.up)));
    }
    case Formula::Kind::Arrow: {
      if (tau->kind != TK::Arrow)
        throw Error("compile: -o at " + syntax::print_type(tau));
      Compiled cd = compile(tau->left, phi->a, reg);
      if (cd.empty()) return Compiled::mk_up(findom::fe_bot());
      Compiled cc = compile(tau->right, phi->b, reg);
      if (cc.empty()) return Compiled::mk_empty();
      auto f = findom::fe_fun_raw({{*cd.up, *cc.up}});
      return Compiled::mk_up(findom::canonicalize(f));
    }
    default:
      throw Error("compile: not a Conjunctive formula: " + print_formula(phi));
  }
}

FormulaPtr char_formula(const syntax::TypePtr& tau, const findom::FinPtr& d,
                        const syntax::BaseRegistry& reg) {
  using FK = findom::FinElt::Kind;
  switch (d->kind) {
    case FK::Bot:
      return f_true();
    case FK::Atom:
      return mk_atomf(d->base, d->cname);
    case FK::Pair: {
      if (tau->kind != syntax::PureType::Kind::Prod)
        throw Error("char_formula: pair at " + syntax::print_type(tau));
      return mk_andf({mk_pi1f(char_formula(tau->left, d->left, reg)),
                      mk_pi2f(char_formula(tau->right, d->right, reg))});
    }
    case FK::Fold: {
      if (tau->kind != syntax::PureType::Kind::Rec)
        throw Error("char_formula: fold at " + syntax::print_type(tau));
      return mk_foldf(char_formula(syntax::unfold_rec(tau), d->inner, reg));
    }
    case FK::Fun: {
      if (tau->kind != syntax::PureType::Kind::Arrow)
        throw Error("char_formula: fun at " + syntax::print_type(tau));
      if (d->steps.empty()) return f_true();
      std::vector<FormulaPtr> conj;
      conj.reserve(d->steps.size());
      for (const auto& [a, r] : d->steps)
        conj.push_back(mk_arrowf(char_formula(tau->left, a, reg),
                                 char_formula(tau->right, r, reg)));
      if (conj.size() == 1) return conj[0];
      return mk_andf(std::move(conj));
    }
  }
  return f_true();
}

bool consistent_f(const syntax::TypePtr& tau, const FormulaPtr& phi,
                  const syntax::BaseRegistry& reg) {
  if (classify(phi) != FormulaClass::Conjunctive)
    throw Error("consistent_f: not Conjunctive: " + print_formula(phi));
  return !compile(tau, phi, reg).empty();
}

bool entail_conj(const syntax::TypePtr& tau, const FormulaPtr& psi, const FormulaPtr& phi,
                 const syntax::BaseRegistry& reg) {
  if (classify(psi) != FormulaClass::Conjunctive || classify(phi) != FormulaClass::Conjunctive)
    throw Error("entail_conj: not Conjunctive");
  Compiled cp = compile(tau, psi, reg);
  if (cp.empty()) return true;
  Compiled cq = compile(tau, phi, reg);
  if (cq.empty()) return false;
  return findom::leq_nt(*cq.up, *cp.up);
}

namespace {

// Distributes the modality over the And/Or skeleton of an already-processed
// child. Modal over the empty conjunction stays literal; modal over any
// disjunction (including the empty one) distributes.
FormulaPtr dist_modal(Formula::Kind kind, const FormulaPtr& c) {
  if (c->kind == Formula::Kind::And && !c->items.empty()) {
    std::vector<FormulaPtr> items;
    items.reserve(c->items.size());
    for (const auto& i : c->items) items.push_back(dist_modal(kind, i));
    return mk_andf(std::move(items));
  }
  if (c->kind == Formula::Kind::Or) {
    std::vector<FormulaPtr> items;
    items.reserve(c->items.size());
    for (const auto& i : c->items) items.push_back(dist_modal(kind, i));
    return mk_orf(std::move(items));
  }
  return mk_modal(kind, c);
}

}  // namespace

FormulaPtr push_modalities(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Atom:
    case Formula::Kind::SVar:
      return f;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> items;
      items.reserve(f->items.size());
      for (const auto& i : f->items) items.push_back(push_modalities(i));
      return f->kind == Formula::Kind::And ? mk_andf(std::move(items))
                                           : mk_orf(std::move(items));
    }
    case Formula::Kind::Pi1:
    case Formula::Kind::Pi2:
    case Formula::Kind::Fold:
      return dist_modal(f->kind, push_modalities(f->a));
    case Formula::Kind::Arrow:
      return mk_arrowf(push_modalities(f->a), push_modalities(f->b));
    case Formula::Kind::Mu:
      return mk_mu(f->var, push_modalities(f->a));
    case Formula::Kind::Nu:
      return mk_nu(f->var, push_modalities(f->a));
    default:
      return mk_modal(f->kind, push_modalities(f->a));
  }
}

FormulaPtr simplify_units(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Atom:
    case Formula::Kind::SVar:
      return f;
    case Formula::Kind::And: {
      std::vector<FormulaPtr> items;
      for (const auto& raw : f->items) {
        FormulaPtr i = simplify_units(raw);
        if (is_true(i)) continue;
        if (is_false(i)) return f_false();
        if (i->kind == Formula::Kind::And) {
          for (const auto& j : i->items) items.push_back(j);
        } else {
          items.push_back(i);
        }
      }
      if (items.empty()) return f_true();
      if (items.size() == 1) return items[0];
      return mk_andf(std::move(items));
    }
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> items;
      for (const auto& raw : f->items) {
        FormulaPtr i = simplify_units(raw);
        if (is_false(i)) continue;
        if (is_true(i)) return f_true();
        if (i->kind == Formula::Kind::Or) {
          for (const auto& j : i->items) items.push_back(j);
        } else {
          items.push_back(i);
        }
      }
      if (items.empty()) return f_false();
      if (items.size() == 1) return items[0];
      return mk_orf(std::move(items));
    }
    case Formula::Kind::Pi1:
    case Formula::Kind::Pi2:
    case Formula::Kind::Fold: {
      FormulaPtr c = simplify_units(f->a);
      if (is_true(c)) return f_true();
      if (is_false(c)) return f_false();
      return mk_modal(f->kind, c);
    }
    case Formula::Kind::Arrow: {
      FormulaPtr a = simplify_units(f->a);
      FormulaPtr b = simplify_units(f->b);
      if (is_true(b)) return f_true();
      if (is_false(a)) return f_true();
      return mk_arrowf(a, b);
    }
    case Formula::Kind::Mu:
      return mk_mu(f->var, simplify_units(f->a));
    case Formula::Kind::Nu:
      return mk_nu(f->var, simplify_units(f->a));
    default:
      return mk_modal(f->kind, simplify_units(f->a));
  }
}

namespace {

// Norm pipeline shared by to_dnf / dnf_clauses / cnf_clauses / entail_fin.
// Produces an And/Or tree whose leaves are Conjunctive, with arrows rebuilt
// over Conjunctive components.
FormulaPtr norm(const syntax::TypePtr& tau, const FormulaPtr& f,
                const syntax::BaseRegistry& reg);

// DNF clause list of an And/Or-over-Conjunctive tree; each clause is the
// list of its Conjunctive leaves.
std::vector<std::vector<FormulaPtr>> dnf_split(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::And: {
      std::vector<std::vector<FormulaPtr>> acc = {{}};
      for (const auto& item : f->items) {
        auto parts = dnf_split(item);
        std::vector<std::vector<FormulaPtr>> next;
        next.reserve(acc.size() * parts.size());
        for (const auto& c1 : acc)
          for (const auto& c2 : parts) {
            std::vector<FormulaPtr> merged = c1;
            merged.insert(merged.end(), c2.begin(), c2.end());
            next.push_back(std::move(merged));
          }
        acc = std::move(next);
      }
      return acc;
    }
    case Formula::Kind::Or: {
      std::vector<std::vector<FormulaPtr>> acc;
      for (const auto& item : f->items) {
        auto parts = dnf_split(item);
        acc.insert(acc.end(), parts.begin(), parts.end());
      }
      return acc;
    }
    default:
      return {{f}};
  }
}

// CNF clause list; each clause is a list of Conjunctive disjuncts.
std::vector<std::vector<FormulaPtr>> cnf_split(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Or: {
      std::vector<std::vector<FormulaPtr>> acc = {{}};
      for (const auto& item : f->items) {
        auto parts = cnf_split(item);
        std::vector<std::vector<FormulaPtr>> next;
        next.reserve(acc.size() * parts.size());
        for (const auto& c1 : acc)
          for (const auto& c2 : parts) {
            std::vector<FormulaPtr> merged = c1;
            merged.insert(merged.end(), c2.begin(), c2.end());
            next.push_back(std::move(merged));
          }
        acc = std::move(next);
      }
      return acc;
    }
    case Formula::Kind::And: {
      std::vector<std::vector<FormulaPtr>> acc;
      for (const auto& item : f->items) {
        auto parts = cnf_split(item);
        acc.insert(acc.end(), parts.begin(), parts.end());
      }
      return acc;
    }
    default:
      return {{f}};
  }
}

FormulaPtr clause_to_conj(const std::vector<FormulaPtr>& leaves) {
  if (leaves.size() == 1) return leaves[0];
  return mk_andf(leaves);
}

FormulaPtr norm(const syntax::TypePtr& tau, const FormulaPtr& f,
                const syntax::BaseRegistry& reg) {
  using TK = syntax::PureType::Kind;
  switch (f->kind) {
    case Formula::Kind::Atom:
      return f;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> items;
      items.reserve(f->items.size());
      for (const auto& i : f->items) items.push_back(norm(tau, i, reg));
      return f->kind == Formula::Kind::And ? mk_andf(std::move(items))
                                           : mk_orf(std::move(items));
    }
    case Formula::Kind::Pi1:
    case Formula::Kind::Pi2: {
      if (tau->kind != TK::Prod)
        throw Error("norm: projection modality at " + syntax::print_type(tau));
      auto child = norm(f->kind == Formula::Kind::Pi1 ? tau->left : tau->right, f->a, reg);
      return dist_modal(f->kind, child);
    }
    case Formula::Kind::Fold: {
      if (tau->kind != TK::Rec)
        throw Error("norm: fold modality at " + syntax::print_type(tau));
      return dist_modal(f->kind, norm(syntax::unfold_rec(tau), f->a, reg));
    }
    case Formula::Kind::Arrow: {
      if (tau->kind != TK::Arrow) throw Error("norm: -o at " + syntax::print_type(tau));
      auto dn = dnf_split(norm(tau->left, f->a, reg));
      auto cn = cnf_split(norm(tau->right, f->b, reg));
      // (V psi_i) -o (A V phi_jc)  =  A_i A_j V_c (psi_i -o phi_jc)
      std::vector<FormulaPtr> conj;
      for (const auto& pi : dn) {
        FormulaPtr psi = clause_to_conj(pi);
        for (const auto& cj : cn) {
          if (cj.empty()) {
            // psi -o false: false when psi is consistent, true otherwise
            if (consistent_f(tau->left, psi, reg)) conj.push_back(f_false());
            continue;
          }
          std::vector<FormulaPtr> disj;
          disj.reserve(cj.size());
          for (const auto& c : cj) disj.push_back(mk_arrowf(psi, c));
          conj.push_back(disj.size() == 1 ? disj[0] : mk_orf(std::move(disj)));
        }
      }
      if (conj.empty()) return f_true();
      if (conj.size() == 1) return conj[0];
      return mk_andf(std::move(conj));
    }
    default:
      throw Error("norm: schemas must be truncated first: " + print_formula(f));
  }
}

}  // namespace

std::vector<FormulaPtr> dnf_clauses(const syntax::TypePtr& tau, const FormulaPtr& phi,
                                    const syntax::BaseRegistry& reg) {
  auto clauses = dnf_split(norm(tau, phi, reg));
  std::vector<FormulaPtr> out;
  out.reserve(clauses.size());
  for (const auto& c : clauses) out.push_back(simplify_units(clause_to_conj(c)));
  return out;
}

std::vector<std::vector<FormulaPtr>> cnf_clauses(const syntax::TypePtr& tau,
                                                 const FormulaPtr& phi,
                                                 const syntax::BaseRegistry& reg) {
  auto clauses = cnf_split(norm(tau, phi, reg));
  for (auto& c : clauses)
    for (auto& leaf : c) leaf = simplify_units(leaf);
  return clauses;
}

FormulaPtr to_dnf(const syntax::TypePtr& tau, const FormulaPtr& phi,
                  const syntax::BaseRegistry& reg) {
  auto clauses = dnf_clauses(tau, phi, reg);
  std::vector<FormulaPtr> live;
  for (const auto& c : clauses) {
    if (is_false(c)) continue;
    live.push_back(c);
  }
  if (live.empty()) return f_false();
  if (live.size() == 1) return live[0];
  return mk_orf(std::move(live));
}

bool entail_fin(const syntax::TypePtr& tau, const FormulaPtr& psi, const FormulaPtr& phi,
                const syntax::BaseRegistry& reg) {
  if (has_schema(psi) || has_schema(phi))
    throw Error("entail_fin: schemas must be truncated first");
  auto left = dnf_clauses(tau, psi, reg);
  auto right = cnf_clauses(tau, phi, reg);
  for (const auto& l : left) {
    Compiled cl = compile(tau, l, reg);
    if (cl.empty()) continue;
    for (const auto& clause : right) {
      bool ok = false;
      for (const auto& c : clause) {
        Compiled cc = compile(tau, c, reg);
        if (cc.empty()) continue;
        if (findom::leq_nt(*cc.up, *cl.up)) { ok = true; break; }
      }
      if (!ok) return false;
    }
  }
  return true;
}

namespace {

FormulaPtr subst_svar(const FormulaPtr& f, const std::string& var, const FormulaPtr& rep) {
  switch (f->kind) {
    case Formula::Kind::Atom:
      return f;
    case Formula::Kind::SVar:
      return f->var == var ? rep : f;
    case Formula::Kind::Mu:
      if (f->var == var) return f;
      return mk_mu(f->var, subst_svar(f->a, var, rep));
    case Formula::Kind::Nu:
      if (f->var == var) return f;
      return mk_nu(f->var, subst_svar(f->a, var, rep));
    case Formula::Kind::Arrow:
      return mk_arrowf(subst_svar(f->a, var, rep), subst_svar(f->b, var, rep));
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> items;
      items.reserve(f->items.size());
      for (const auto& i : f->items) items.push_back(subst_svar(i, var, rep));
      return f->kind == Formula::Kind::And ? mk_andf(std::move(items))
                                           : mk_orf(std::move(items));
    }
    default:
      return mk_modal(f->kind, subst_svar(f->a, var, rep));
  }
}

FormulaPtr next_step(const FormulaPtr& f) { return mk_foldf(mk_pi2f(f)); }
FormulaPtr head_is(const FormulaPtr& f) { return mk_foldf(mk_pi1f(f)); }
FormulaPtr left_child(const FormulaPtr& f) { return mk_foldf(mk_pi2f(mk_pi1f(f))); }
FormulaPtr right_child(const FormulaPtr& f) { return mk_foldf(mk_pi2f(mk_pi2f(f))); }

FormulaPtr truncate_in(const FormulaPtr& f, int k) {
  switch (f->kind) {
    case Formula::Kind::Atom:
    case Formula::Kind::SVar:
      return f;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> items;
      items.reserve(f->items.size());
      for (const auto& i : f->items) items.push_back(truncate_in(i, k));
      return f->kind == Formula::Kind::And ? mk_andf(std::move(items))
                                           : mk_orf(std::move(items));
    }
    case Formula::Kind::Pi1:
    case Formula::Kind::Pi2:
    case Formula::Kind::Fold:
      return mk_modal(f->kind, truncate_in(f->a, k));
    case Formula::Kind::Arrow:
      return mk_arrowf(truncate_in(f->a, k), truncate_in(f->b, k));
    case Formula::Kind::Box: {
      FormulaPtr body = truncate_in(f->a, k);
      std::vector<FormulaPtr> conj;
      FormulaPtr cur = body;
      for (int n = 0; n < k; ++n) {
        conj.push_back(cur);
        cur = next_step(cur);
      }
      return mk_andf(std::move(conj));
    }
    case Formula::Kind::Diam: {
      FormulaPtr body = truncate_in(f->a, k);
      std::vector<FormulaPtr> disj;
      FormulaPtr cur = body;
      for (int n = 0; n < k; ++n) {
        disj.push_back(cur);
        cur = next_step(cur);
      }
      return mk_orf(std::move(disj));
    }
    case Formula::Kind::AllBox:
    case Formula::Kind::ExBox: {
      FormulaPtr body = truncate_in(f->a, k);
      FormulaPtr theta = f_true();
      for (int n = 0; n < k; ++n) {
        FormulaPtr l = left_child(theta), r = right_child(theta);
        if (f->kind == Formula::Kind::AllBox)
          theta = mk_andf({body, l, r});
        else
          theta = mk_andf({body, mk_orf({l, r})});
      }
      return theta;
    }
    case Formula::Kind::AllDiam:
    case Formula::Kind::ExDiam: {
      FormulaPtr body = truncate_in(f->a, k);
      FormulaPtr theta = f_false();
      for (int n = 0; n < k; ++n) {
        FormulaPtr l = left_child(theta), r = right_child(theta);
        if (f->kind == Formula::Kind::AllDiam)
          theta = mk_orf({body, mk_andf({l, r})});
        else
          theta = mk_orf({body, l, r});
      }
      return theta;
    }
    case Formula::Kind::Mu:
    case Formula::Kind::Nu: {
      FormulaPtr body = truncate_in(f->a, k);
      FormulaPtr theta = f->kind == Formula::Kind::Mu ? f_false() : f_true();
      for (int n = 0; n < k; ++n) theta = subst_svar(body, f->var, theta);
      return theta;
    }
  }
  return f;
}

}  // namespace

FormulaPtr truncate(const FormulaPtr& phi, int k) {
  if (k < 0) throw Error("truncate: negative depth");
  return simplify_units(truncate_in(phi, k));
}

}  // namespace dtlf::logic
