#include "dtlf/evalsem.hpp"

#include <algorithm>
#include <sstream>

namespace dtlf::evalsem {

ValPtr v_approx(findom::FinPtr d, syntax::TypePtr tau) {
  auto v = std::make_shared<SemValue>();
  v->kind = SemValue::Kind::Approx;
  v->d = std::move(d);
  v->tau = std::move(tau);
  return v;
}

ValPtr v_closure(SemEnv env, const std::string& binder, syntax::TermPtr body) {
  auto v = std::make_shared<SemValue>();
  v->kind = SemValue::Kind::Closure;
  v->env = std::move(env);
  v->binder = binder;
  v->body = std::move(body);
  return v;
}

ValPtr v_thunk(SemEnv env, syntax::TermPtr term, int fuel) {
  auto v = std::make_shared<SemValue>();
  v->kind = SemValue::Kind::Thunk;
  v->env = std::move(env);
  v->term = std::move(term);
  v->fuel = fuel;
  return v;
}

ValPtr v_pair(ValPtr l, ValPtr r) {
  auto v = std::make_shared<SemValue>();
  v->kind = SemValue::Kind::PairV;
  v->first = std::move(l);
  v->second = std::move(r);
  return v;
}

ValPtr v_foldv(ValPtr inner) {
  auto v = std::make_shared<SemValue>();
  v->kind = SemValue::Kind::FoldV;
  v->first = std::move(inner);
  return v;
}

void ProbePool::add(const syntax::TypePtr& tau, const findom::FinPtr& d) {
  auto c = findom::canonicalize(d);
  if (findom::is_botlike(c)) return;
  auto& bucket = extra[syntax::print_type(tau)];
  for (const auto& e : bucket)
    if (findom::equal(e, c)) return;
  bucket.push_back(c);
}

void ProbePool::add_decomposed(const syntax::TypePtr& tau, const findom::FinPtr& d) {
  using FK = findom::FinElt::Kind;
  using TK = syntax::PureType::Kind;
  add(tau, d);
  switch (d->kind) {
    case FK::Pair:
      if (tau->kind == TK::Prod) {
        add_decomposed(tau->left, d->left);
        add_decomposed(tau->right, d->right);
      }
      return;
    case FK::Fold:
      if (tau->kind == TK::Rec) add_decomposed(syntax::unfold_rec(tau), d->inner);
      return;
    case FK::Fun:
      if (tau->kind == TK::Arrow)
        for (const auto& [a, r] : d->steps) {
          add_decomposed(tau->left, a);
          add_decomposed(tau->right, r);
        }
      return;
    default:
      return;
  }
}

std::vector<findom::FinPtr> ProbePool::probes(const syntax::TypePtr& tau, int rank,
                                              const syntax::BaseRegistry& reg) const {
  auto out = findom::enumerate(tau, rank, reg);
  auto it = extra.find(syntax::print_type(tau));
  if (it != extra.end()) {
    for (const auto& d : it->second) {
      bool seen = false;
      for (const auto& e : out)
        if (findom::equal(e, d)) { seen = true; break; }
      if (!seen) out.push_back(d);
    }
  }
  return out;
}

ValPtr Evaluator::force(const ValPtr& v) {
  if (v->kind != SemValue::Kind::Thunk) return v;
  if (v->memo) return v->memo;
  ValPtr r = eval(v->term, v->env, v->fuel);
  v->memo = r;
  return r;
}

size_t Evaluator::pool_count() const {
  if (!pool) return 0;
  size_t n = 0;
  for (const auto& [_, bucket] : pool->extra) n += bucket.size();
  return n;
}

ValPtr Evaluator::probe_val(const findom::FinPtr& d, const syntax::TypePtr& tau) {
  std::string key = findom::to_sexp(d) + "#" + syntax::print_type(tau);
  auto it = probe_vals_.find(key);
  if (it != probe_vals_.end()) return it->second;
  ValPtr v = v_approx(d, tau);
  probe_vals_.emplace(std::move(key), v);
  return v;
}

ValPtr Evaluator::apply_val(const ValPtr& f, const ValPtr& arg, int fuel) {
  ValPtr fn = force(f);
  auto key = std::make_tuple(fn.get(), arg.get(), fuel, depth_left_);
  auto hit = app_memo_.find(key);
  if (hit != app_memo_.end()) return hit->second;
  ValPtr out;
  switch (fn->kind) {
    case SemValue::Kind::Closure: {
      SemEnv env = fn->env;
      env.vars[fn->binder] = arg;
      out = eval(fn->body, env, fuel);
      break;
    }
    case SemValue::Kind::Approx: {
      if (findom::is_botlike(fn->d)) {
        out = v_approx(findom::fe_bot());
        break;
      }
      if (fn->d->kind != findom::FinElt::Kind::Fun)
        throw Error("apply_val: applying a non-function element");
      if (!fn->tau || fn->tau->kind != syntax::PureType::Kind::Arrow) {
        out = v_approx(findom::fe_bot());
        break;
      }
      findom::FinPtr da = lower(arg, fn->tau->left, fuel);
      out = v_approx(findom::apply_nt(fn->d, da), fn->tau->right);
      break;
    }
    default:
      throw Error("apply_val: applying a non-function value");
  }
  pins_.push_back(fn);
  pins_.push_back(arg);
  app_memo_.emplace(key, out);
  return out;
}

ValPtr Evaluator::eval(const syntax::TermPtr& t, const SemEnv& env, int fuel) {
  using K = syntax::Term::Kind;
  switch (t->kind) {
    case K::Var: {
      auto it = env.vars.find(t->name);
      if (it == env.vars.end()) throw Error("eval: unbound variable " + t->name);
      return force(it->second);
    }
    case K::Lam:
      return v_closure(env, t->name, t->a);
    case K::App: {
      ValPtr f = eval(t->a, env, fuel);
      return apply_val(f, v_thunk(env, t->b, fuel), fuel);
    }
    case K::Fix: {
      if (fuel <= 0) return v_approx(findom::fe_bot());
      SemEnv inner = env;
      inner.vars[t->name] = v_thunk(env, t, fuel - 1);
      return eval(t->a, inner, fuel);
    }
    case K::Fold:
      return v_foldv(v_thunk(env, t->a, fuel));
    case K::Unfold: {
      ValPtr v = eval(t->a, env, fuel);
      if (v->kind == SemValue::Kind::FoldV) return force(v->first);
      if (v->kind == SemValue::Kind::Approx) {
        syntax::TypePtr unrolled;
        if (v->tau && v->tau->kind == syntax::PureType::Kind::Rec)
          unrolled = syntax::unfold_rec(v->tau);
        if (findom::is_botlike(v->d)) return v_approx(findom::fe_bot(), unrolled);
        if (v->d->kind == findom::FinElt::Kind::Fold)
          return v_approx(v->d->inner, unrolled);
      }
      throw Error("eval: unfold of a non-fold value");
    }
    case K::Pair:
      return v_pair(v_thunk(env, t->a, fuel), v_thunk(env, t->b, fuel));
    case K::Proj: {
      ValPtr v = eval(t->a, env, fuel);
      if (v->kind == SemValue::Kind::PairV)
        return force(t->index == 1 ? v->first : v->second);
      if (v->kind == SemValue::Kind::Approx) {
        syntax::TypePtr comp;
        if (v->tau && v->tau->kind == syntax::PureType::Kind::Prod)
          comp = t->index == 1 ? v->tau->left : v->tau->right;
        if (findom::is_botlike(v->d)) return v_approx(findom::fe_bot(), comp);
        if (v->d->kind == findom::FinElt::Kind::Pair)
          return v_approx(t->index == 1 ? v->d->left : v->d->right, comp);
      }
      throw Error("eval: projection of a non-pair value");
    }
    case K::Const: {
      auto hit = reg.find_const(t->name);
      if (!hit) throw Error("eval: unknown constant " + t->name);
      return v_approx(findom::fe_atom(hit->first, t->name, hit->second),
                      syntax::mk_base(hit->first));
    }
    case K::Case: {
      ValPtr v = eval(t->a, env, fuel);
      if (v->kind != SemValue::Kind::Approx)
        throw Error("eval: case scrutinee is not a base value");
      if (findom::is_botlike(v->d)) return v_approx(findom::fe_bot());
      if (v->d->kind != findom::FinElt::Kind::Atom)
        throw Error("eval: case scrutinee is not a base value");
      for (const auto& [c, body] : t->branches)
        if (c == v->d->cname) return eval(body, env, fuel);
      throw Error("eval: no branch for constant " + v->d->cname);
    }
    case K::Ascribe:
      return eval(t->a, env, fuel);
  }
  throw Error("eval: unreachable");
}

findom::FinPtr Evaluator::lower(const ValPtr& raw, const syntax::TypePtr& tau, int fuel) {
  if (depth_left_ < 0) depth_left_ = probe_depth;
  ValPtr v = force(raw);
  std::ostringstream kb;
  kb << static_cast<const void*>(v.get()) << '#' << syntax::print_type(tau) << '#' << fuel
     << '#' << pool_count() << '#' << depth_left_;
  std::string key = kb.str();
  auto hit = lower_memo_.find(key);
  if (hit != lower_memo_.end()) return hit->second;
  findom::FinPtr res = lower_uncached(v, tau, fuel);
  pins_.push_back(v);
  lower_memo_.emplace(std::move(key), res);
  return res;
}

findom::FinPtr Evaluator::lower_uncached(const ValPtr& v, const syntax::TypePtr& tau,
                                         int fuel) {
  using TK = syntax::PureType::Kind;
  switch (v->kind) {
    case SemValue::Kind::Approx:
      return findom::canonicalize(v->d);
    case SemValue::Kind::PairV: {
      if (tau->kind != TK::Prod) throw Error("lower: pair value at " + syntax::print_type(tau));
      auto l = lower(v->first, tau->left, fuel);
      auto r = lower(v->second, tau->right, fuel);
      return findom::canonicalize(findom::fe_pair(l, r));
    }
    case SemValue::Kind::FoldV: {
      if (tau->kind != TK::Rec) throw Error("lower: fold value at " + syntax::print_type(tau));
      if (fuel <= 0) return findom::fe_bot();
      auto inner = lower(v->first, syntax::unfold_rec(tau), fuel - 1);
      return findom::canonicalize(findom::fe_fold(inner));
    }
    case SemValue::Kind::Closure: {
      if (tau->kind != TK::Arrow)
        throw Error("lower: closure at " + syntax::print_type(tau));
      if (depth_left_ <= 0) return findom::fe_bot();
      struct Guard {
        int& d;
        ~Guard() { ++d; }
      } guard{--depth_left_};
      std::vector<findom::FinPtr> args =
          pool ? pool->probes(tau->left, rank, reg)
               : findom::enumerate(tau->left, rank, reg);
      std::vector<findom::Step> steps;
      for (const auto& a : args) {
        ValPtr res = apply_val(v, probe_val(a, tau->left), fuel);
        findom::FinPtr r = lower(res, tau->right, fuel);
        if (!findom::is_botlike(r)) steps.emplace_back(findom::canonicalize(a), r);
      }
      return findom::fun_from_graph(steps);
    }
    case SemValue::Kind::Thunk:
      throw Error("lower: unforced thunk");
  }
  throw Error("lower: unreachable");
}

Tri Evaluator::member(const ValPtr& raw, const syntax::TypePtr& tau,
                      const logic::FormulaPtr& phi, int fuel) {
  using FK = logic::Formula::Kind;
  using TK = syntax::PureType::Kind;
  switch (phi->kind) {
    case FK::And: {
      for (const auto& i : phi->items)
        if (member(raw, tau, i, fuel) != Tri::Holds) return Tri::Unknown;
      return Tri::Holds;
    }
    case FK::Or: {
      for (const auto& i : phi->items)
        if (member(raw, tau, i, fuel) == Tri::Holds) return Tri::Holds;
      return Tri::Unknown;
    }
    case FK::Atom: {
      ValPtr v = force(raw);
      if (v->kind != SemValue::Kind::Approx) return Tri::Unknown;
      auto want = logic::compile(tau, phi, reg);
      return !want.empty() && findom::leq_nt(*want.up, v->d) ? Tri::Holds : Tri::Unknown;
    }
    case FK::Pi1:
    case FK::Pi2: {
      if (tau->kind != TK::Prod) throw Error("member: projection at " + syntax::print_type(tau));
      bool fst = phi->kind == FK::Pi1;
      syntax::TypePtr comp = fst ? tau->left : tau->right;
      ValPtr v = force(raw);
      if (v->kind == SemValue::Kind::PairV)
        return member(fst ? v->first : v->second, comp, phi->a, fuel);
      if (v->kind == SemValue::Kind::Approx) {
        if (findom::is_botlike(v->d))
          return member(v_approx(findom::fe_bot(), comp), comp, phi->a, fuel);
        if (v->d->kind == findom::FinElt::Kind::Pair)
          return member(v_approx(fst ? v->d->left : v->d->right, comp), comp, phi->a, fuel);
      }
      return Tri::Unknown;
    }
    case FK::Fold: {
      if (tau->kind != TK::Rec) throw Error("member: fold at " + syntax::print_type(tau));
      syntax::TypePtr unrolled = syntax::unfold_rec(tau);
      ValPtr v = force(raw);
      if (v->kind == SemValue::Kind::FoldV)
        return member(v->first, unrolled, phi->a, fuel);
      if (v->kind == SemValue::Kind::Approx) {
        if (findom::is_botlike(v->d))
          return member(v_approx(findom::fe_bot(), unrolled), unrolled, phi->a, fuel);
        if (v->d->kind == findom::FinElt::Kind::Fold)
          return member(v_approx(v->d->inner, unrolled), unrolled, phi->a, fuel);
      }
      return Tri::Unknown;
    }
    case FK::Arrow: {
      if (tau->kind != TK::Arrow) throw Error("member: -o at " + syntax::print_type(tau));
      std::vector<logic::FormulaPtr> domains;
      if (logic::classify(phi->a) == logic::FormulaClass::Conjunctive)
        domains.push_back(phi->a);
      else
        domains = logic::dnf_clauses(tau->left, phi->a, reg);
      for (const auto& psi : domains) {
        auto c = logic::compile(tau->left, psi, reg);
        if (c.empty()) continue;
        ValPtr res = apply_val(raw, probe_val(*c.up, tau->left), fuel);
        if (member(res, tau->right, phi->b, fuel) != Tri::Holds) return Tri::Unknown;
      }
      return Tri::Holds;
    }
    default:
      throw Error("member: schemas must be truncated first: " + logic::print_formula(phi));
  }
}

bool sat(const syntax::TypePtr& tau, const findom::FinPtr& d, const logic::FormulaPtr& phi,
         const syntax::BaseRegistry& reg) {
  using FK = logic::Formula::Kind;
  using TK = syntax::PureType::Kind;
  switch (phi->kind) {
    case FK::And: {
      for (const auto& i : phi->items)
        if (!sat(tau, d, i, reg)) return false;
      return true;
    }
    case FK::Or: {
      for (const auto& i : phi->items)
        if (sat(tau, d, i, reg)) return true;
      return false;
    }
    case FK::Atom: {
      auto want = logic::compile(tau, phi, reg);
      return !want.empty() && findom::leq_nt(*want.up, d);
    }
    case FK::Pi1:
    case FK::Pi2: {
      if (tau->kind != TK::Prod) throw Error("sat: projection at " + syntax::print_type(tau));
      bool fst = phi->kind == FK::Pi1;
      findom::FinPtr comp = findom::fe_bot();
      if (!findom::is_botlike(d)) {
        if (d->kind != findom::FinElt::Kind::Pair) throw Error("sat: ill-shaped element");
        comp = fst ? d->left : d->right;
      }
      return sat(fst ? tau->left : tau->right, comp, phi->a, reg);
    }
    case FK::Fold: {
      if (tau->kind != TK::Rec) throw Error("sat: fold at " + syntax::print_type(tau));
      findom::FinPtr inner = findom::fe_bot();
      if (!findom::is_botlike(d)) {
        if (d->kind != findom::FinElt::Kind::Fold) throw Error("sat: ill-shaped element");
        inner = d->inner;
      }
      return sat(syntax::unfold_rec(tau), inner, phi->a, reg);
    }
    case FK::Arrow: {
      if (tau->kind != TK::Arrow) throw Error("sat: -o at " + syntax::print_type(tau));
      if (logic::classify(phi->a) != logic::FormulaClass::Conjunctive)
        throw Error("sat: arrow antecedent is not Conjunctive: " +
                    logic::print_formula(phi->a));
      auto c = logic::compile(tau->left, phi->a, reg);
      if (c.empty()) return true;
      return sat(tau->right, findom::apply_nt(d, *c.up), phi->b, reg);
    }
    default:
      throw Error("sat: schemas must be truncated first: " + logic::print_formula(phi));
  }
}

bool oracle_entail(const syntax::TypePtr& tau, const logic::FormulaPtr& psi,
                   const logic::FormulaPtr& phi, int r, const syntax::BaseRegistry& reg) {
  for (const auto& d : findom::enumerate(tau, r, reg))
    if (sat(tau, d, psi, reg) && !sat(tau, d, phi, reg)) return false;
  return true;
}

bool oracle_consistent(const syntax::TypePtr& tau, const logic::FormulaPtr& phi, int r,
                       const syntax::BaseRegistry& reg) {
  for (const auto& d : findom::enumerate(tau, r, reg))
    if (sat(tau, d, phi, reg)) return true;
  return false;
}

ValPtr eval(const syntax::TermPtr& t, const SemEnv& env, int fuel,
            const syntax::BaseRegistry& reg) {
  Evaluator ev(reg);
  return ev.eval(t, env, fuel);
}

findom::FinPtr lower(const ValPtr& v, const syntax::TypePtr& tau, int fuel, int rank,
                     const syntax::BaseRegistry& reg) {
  Evaluator ev(reg);
  ev.rank = rank;
  return ev.lower(v, tau, fuel);
}

Tri member(const ValPtr& v, const syntax::TypePtr& tau, const logic::FormulaPtr& phi,
           int fuel, int rank, const syntax::BaseRegistry& reg) {
  Evaluator ev(reg);
  ev.rank = rank;
  return ev.member(v, tau, phi, fuel);
}

}  // namespace dtlf::evalsem
