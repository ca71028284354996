#include "dtlf/findom.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>

namespace dtlf::findom {

FinPtr fe_bot() {
  static FinPtr bot = [] {
    auto d = std::make_shared<FinElt>();
    d->kind = FinElt::Kind::Bot;
    return d;
  }();
  return bot;
}

FinPtr fe_atom(const std::string& base, const std::string& cname, int index) {
  auto d = std::make_shared<FinElt>();
  d->kind = FinElt::Kind::Atom;
  d->base = base;
  d->cname = cname;
  d->atom_index = index;
  return d;
}

FinPtr fe_pair(FinPtr l, FinPtr r) {
  auto d = std::make_shared<FinElt>();
  d->kind = FinElt::Kind::Pair;
  d->left = std::move(l);
  d->right = std::move(r);
  return d;
}

FinPtr fe_fold(FinPtr inner) {
  auto d = std::make_shared<FinElt>();
  d->kind = FinElt::Kind::Fold;
  d->inner = std::move(inner);
  return d;
}

FinPtr fe_fun_raw(std::vector<Step> steps) {
  auto d = std::make_shared<FinElt>();
  d->kind = FinElt::Kind::Fun;
  d->steps = std::move(steps);
  return d;
}

namespace {

int kind_rank(FinElt::Kind k) {
  switch (k) {
    case FinElt::Kind::Bot: return 0;
    case FinElt::Kind::Atom: return 1;
    case FinElt::Kind::Pair: return 2;
    case FinElt::Kind::Fold: return 3;
    case FinElt::Kind::Fun: return 4;
  }
  return 5;
}

}  // namespace

int compare(const FinPtr& a, const FinPtr& b) {
  if (a == b) return 0;
  int ra = kind_rank(a->kind), rb = kind_rank(b->kind);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a->kind) {
    case FinElt::Kind::Bot:
      return 0;
    case FinElt::Kind::Atom: {
      if (int c = a->base.compare(b->base)) return c < 0 ? -1 : 1;
      if (a->atom_index != b->atom_index) return a->atom_index < b->atom_index ? -1 : 1;
      if (int c = a->cname.compare(b->cname)) return c < 0 ? -1 : 1;
      return 0;
    }
    case FinElt::Kind::Pair: {
      if (int c = compare(a->left, b->left)) return c;
      return compare(a->right, b->right);
    }
    case FinElt::Kind::Fold:
      return compare(a->inner, b->inner);
    case FinElt::Kind::Fun: {
      if (a->steps.size() != b->steps.size())
        return a->steps.size() < b->steps.size() ? -1 : 1;
      for (size_t i = 0; i < a->steps.size(); ++i) {
        if (int c = compare(a->steps[i].first, b->steps[i].first)) return c;
        if (int c = compare(a->steps[i].second, b->steps[i].second)) return c;
      }
      return 0;
    }
  }
  return 0;
}

bool equal(const FinPtr& a, const FinPtr& b) { return compare(a, b) == 0; }

bool is_botlike(const FinPtr& d) {
  switch (d->kind) {
    case FinElt::Kind::Bot:
      return true;
    case FinElt::Kind::Atom:
      return false;
    case FinElt::Kind::Pair:
      return is_botlike(d->left) && is_botlike(d->right);
    case FinElt::Kind::Fold:
      return is_botlike(d->inner);
    case FinElt::Kind::Fun:
      for (const auto& [a, r] : d->steps)
        if (!is_botlike(r)) return false;
      return true;
  }
  return false;
}

namespace {

// Canonical step families: components canonical, no Bot results, args
// distinct, each result saturated to the family's full value at its arg,
// jointly redundant steps removed, sorted. Saturation matters: without it
// [⊥↘(tt,⊥), tt↘(⊥,ff)] and [⊥↘(tt,⊥), tt↘(tt,ff)] would be distinct
// representatives of the same function.
std::vector<Step> canonical_fun_steps(const std::vector<Step>& raw) {
  std::vector<Step> steps;
  steps.reserve(raw.size());
  for (const auto& [a, r] : raw) {
    FinPtr ca = canonicalize(a), cr = canonicalize(r);
    if (cr->kind == FinElt::Kind::Bot) continue;
    steps.emplace_back(std::move(ca), std::move(cr));
  }
  // merge equal args
  for (size_t i = 0; i < steps.size(); ++i) {
    for (size_t j = i + 1; j < steps.size();) {
      if (equal(steps[i].first, steps[j].first)) {
        auto s = sup_nt(steps[i].second, steps[j].second);
        if (!s) throw Error("inconsistent step family at equal args");
        steps[i].second = *s;
        steps.erase(steps.begin() + static_cast<long>(j));
      } else {
        ++j;
      }
    }
  }
  // saturate: result_i := join of all results fired at arg_i
  std::vector<FinPtr> sat(steps.size());
  for (size_t i = 0; i < steps.size(); ++i) {
    FinPtr acc = steps[i].second;
    for (size_t j = 0; j < steps.size(); ++j) {
      if (j == i || !leq_nt(steps[j].first, steps[i].first)) continue;
      auto s = sup_nt(acc, steps[j].second);
      if (!s) throw Error("inconsistent step family during saturation");
      acc = *s;
    }
    sat[i] = acc;
  }
  for (size_t i = 0; i < steps.size(); ++i) steps[i].second = sat[i];
  // drop steps whose value is already the join of the other fired steps
  std::vector<bool> redundant(steps.size(), false);
  for (size_t i = 0; i < steps.size(); ++i) {
    FinPtr acc = fe_bot();
    for (size_t j = 0; j < steps.size(); ++j) {
      if (j == i || !leq_nt(steps[j].first, steps[i].first)) continue;
      auto s = sup_nt(acc, steps[j].second);
      if (!s) throw Error("inconsistent step family during reduction");
      acc = *s;
    }
    if (leq_nt(steps[i].second, acc)) redundant[i] = true;
  }
  std::vector<Step> out;
  for (size_t i = 0; i < steps.size(); ++i)
    if (!redundant[i]) out.push_back(steps[i]);
  std::sort(out.begin(), out.end(), [](const Step& x, const Step& y) {
    if (int c = compare(x.first, y.first)) return c < 0;
    return compare(x.second, y.second) < 0;
  });
  return out;
}

}  // namespace

FinPtr canonicalize(const FinPtr& d) {
  switch (d->kind) {
    case FinElt::Kind::Bot:
    case FinElt::Kind::Atom:
      return d;
    case FinElt::Kind::Pair: {
      FinPtr l = canonicalize(d->left), r = canonicalize(d->right);
      if (l->kind == FinElt::Kind::Bot && r->kind == FinElt::Kind::Bot) return fe_bot();
      if (l == d->left && r == d->right) return d;
      return fe_pair(l, r);
    }
    case FinElt::Kind::Fold: {
      FinPtr i = canonicalize(d->inner);
      if (i->kind == FinElt::Kind::Bot) return fe_bot();
      if (i == d->inner) return d;
      return fe_fold(i);
    }
    case FinElt::Kind::Fun: {
      auto steps = canonical_fun_steps(d->steps);
      if (steps.empty()) return fe_bot();
      return fe_fun_raw(std::move(steps));
    }
  }
  return d;
}

bool leq_nt(const FinPtr& d, const FinPtr& e) {
  if (is_botlike(d)) return true;
  switch (d->kind) {
    case FinElt::Kind::Bot:
      return true;
    case FinElt::Kind::Atom:
      return e->kind == FinElt::Kind::Atom && d->base == e->base && d->cname == e->cname;
    case FinElt::Kind::Pair:
      return e->kind == FinElt::Kind::Pair && leq_nt(d->left, e->left) &&
             leq_nt(d->right, e->right);
    case FinElt::Kind::Fold:
      return e->kind == FinElt::Kind::Fold && leq_nt(d->inner, e->inner);
    case FinElt::Kind::Fun: {
      if (e->kind != FinElt::Kind::Fun) return false;
      for (const auto& [a, r] : d->steps)
        if (!leq_nt(r, apply_nt(e, a))) return false;
      return true;
    }
  }
  return false;
}

std::optional<FinPtr> sup_nt(const FinPtr& d, const FinPtr& e) {
  if (is_botlike(d)) return canonicalize(e);
  if (is_botlike(e)) return canonicalize(d);
  if (d->kind != e->kind) return std::nullopt;
  switch (d->kind) {
    case FinElt::Kind::Atom:
      if (d->base == e->base && d->cname == e->cname) return d;
      return std::nullopt;
    case FinElt::Kind::Pair: {
      auto l = sup_nt(d->left, e->left);
      if (!l) return std::nullopt;
      auto r = sup_nt(d->right, e->right);
      if (!r) return std::nullopt;
      return fe_pair(*l, *r);
    }
    case FinElt::Kind::Fold: {
      auto i = sup_nt(d->inner, e->inner);
      if (!i) return std::nullopt;
      return fe_fold(*i);
    }
    case FinElt::Kind::Fun: {
      std::vector<Step> all = d->steps;
      all.insert(all.end(), e->steps.begin(), e->steps.end());
      auto res = mk_fun_nt(all);
      if (!res.ok()) return std::nullopt;
      return res.fun;
    }
    default:
      return std::nullopt;
  }
}

FinPtr apply_nt(const FinPtr& f, const FinPtr& d) {
  if (is_botlike(f)) return fe_bot();
  if (f->kind != FinElt::Kind::Fun)
    throw Error("apply: not a function element: " + to_sexp(f));
  FinPtr acc = fe_bot();
  for (const auto& [a, r] : f->steps) {
    if (!leq_nt(a, d)) continue;
    auto s = sup_nt(acc, r);
    if (!s) throw Error("apply: inconsistent step family: " + to_sexp(f));
    acc = *s;
  }
  return acc;
}

void check_shape(const syntax::TypePtr& tau, const FinPtr& d) {
  if (d->kind == FinElt::Kind::Bot) return;
  switch (tau->kind) {
    case syntax::PureType::Kind::Base:
      if (d->kind != FinElt::Kind::Atom || d->base != tau->name)
        throw Error("element " + to_sexp(d) + " not shaped by " + syntax::print_type(tau));
      return;
    case syntax::PureType::Kind::Prod:
      if (d->kind != FinElt::Kind::Pair)
        throw Error("element " + to_sexp(d) + " not shaped by " + syntax::print_type(tau));
      check_shape(tau->left, d->left);
      check_shape(tau->right, d->right);
      return;
    case syntax::PureType::Kind::Arrow:
      if (d->kind != FinElt::Kind::Fun)
        throw Error("element " + to_sexp(d) + " not shaped by " + syntax::print_type(tau));
      for (const auto& [a, r] : d->steps) {
        check_shape(tau->left, a);
        check_shape(tau->right, r);
      }
      return;
    case syntax::PureType::Kind::Rec:
      if (d->kind != FinElt::Kind::Fold)
        throw Error("element " + to_sexp(d) + " not shaped by " + syntax::print_type(tau));
      check_shape(syntax::unfold_rec(tau), d->inner);
      return;
    case syntax::PureType::Kind::Var:
      throw Error("check_shape: open type " + syntax::print_type(tau));
  }
}

bool leq(const syntax::TypePtr& tau, const FinPtr& d, const FinPtr& e) {
  check_shape(tau, d);
  check_shape(tau, e);
  return leq_nt(d, e);
}

std::optional<FinPtr> sup(const syntax::TypePtr& tau, const FinPtr& d, const FinPtr& e) {
  check_shape(tau, d);
  check_shape(tau, e);
  return sup_nt(d, e);
}

bool consistent(const syntax::TypePtr& tau, const FinPtr& d, const FinPtr& e) {
  return sup(tau, d, e).has_value();
}

FinPtr apply(const syntax::TypePtr& tau, const FinPtr& f, const FinPtr& d) {
  if (tau->kind != syntax::PureType::Kind::Arrow)
    throw Error("apply: not an arrow type: " + syntax::print_type(tau));
  check_shape(tau, f);
  check_shape(tau->left, d);
  return apply_nt(f, d);
}

namespace {

std::optional<FinPtr> join_all(const std::vector<FinPtr>& xs) {
  FinPtr acc = fe_bot();
  for (const auto& x : xs) {
    auto s = sup_nt(acc, x);
    if (!s) return std::nullopt;
    acc = *s;
  }
  return acc;
}

}  // namespace

MkFunResult mk_fun_nt(const std::vector<Step>& raw) {
  std::vector<Step> steps;
  steps.reserve(raw.size());
  for (const auto& [a, r] : raw) steps.emplace_back(canonicalize(a), canonicalize(r));
  size_t n = steps.size();
  // The side condition is about all subsets; check them directly while the
  // family is small, otherwise walk the join closure of the args (every
  // joinable subset's arg join is a closure point, and the steps fired there
  // include the subset, so bounding its result join bounds the subset's).
  if (n <= 12) {
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      FinPtr ja = fe_bot();
      bool args_join = true;
      for (size_t i = 0; i < n && args_join; ++i) {
        if (!(mask & (1u << i))) continue;
        auto s = sup_nt(ja, steps[i].first);
        if (!s) args_join = false;
        else ja = *s;
      }
      if (!args_join) continue;
      FinPtr jr = fe_bot();
      for (size_t i = 0; i < n; ++i) {
        if (!(mask & (1u << i))) continue;
        auto s = sup_nt(jr, steps[i].second);
        if (!s) {
          MkFunResult fail;
          for (size_t k = 0; k < n; ++k)
            if (mask & (1u << k)) fail.violating.push_back(static_cast<int>(k));
          return fail;
        }
        jr = *s;
      }
    }
  } else {
    std::vector<FinPtr> closure;
    closure.push_back(fe_bot());
    for (const auto& [a, r] : steps) {
      bool fresh = true;
      for (const auto& x : closure)
        if (equal(x, a)) { fresh = false; break; }
      if (fresh) closure.push_back(a);
    }
    for (size_t i = 0; i < closure.size(); ++i) {
      for (size_t j = 0; j < i; ++j) {
        auto s = sup_nt(closure[i], closure[j]);
        if (!s) continue;
        bool fresh = true;
        for (const auto& x : closure)
          if (equal(x, *s)) { fresh = false; break; }
        if (fresh) closure.push_back(*s);
      }
    }
    for (const auto& x : closure) {
      FinPtr jr = fe_bot();
      std::vector<int> fired;
      bool ok = true;
      for (size_t i = 0; i < n; ++i) {
        if (!leq_nt(steps[i].first, x)) continue;
        fired.push_back(static_cast<int>(i));
        auto s = sup_nt(jr, steps[i].second);
        if (!s) { ok = false; break; }
        jr = *s;
      }
      if (!ok) {
        MkFunResult fail;
        fail.violating = fired;
        return fail;
      }
    }
  }
  MkFunResult res;
  res.fun = fe_fun_raw(canonical_fun_steps(steps));
  return res;
}

MkFunResult mk_fun(const syntax::TypePtr& tau, const std::vector<Step>& steps) {
  if (tau->kind != syntax::PureType::Kind::Arrow)
    throw Error("mk_fun: not an arrow type: " + syntax::print_type(tau));
  for (const auto& [a, r] : steps) {
    check_shape(tau->left, a);
    check_shape(tau->right, r);
  }
  return mk_fun_nt(steps);
}

FinPtr fun_from_graph(const std::vector<Step>& steps) {
  // Graphs sampled from a real monotone function satisfy the subset side
  // condition by construction: each result is below the function's value at
  // the join of the fired args, so result joins are bounded whenever arg
  // joins exist. Skip the subset sweep, canonicalize only.
  return fe_fun_raw(canonical_fun_steps(steps));
}

namespace {

std::mutex enum_mutex;
std::map<std::string, std::vector<FinPtr>> enum_memo;

void subsets_up_to(size_t n, size_t maxsz,
                   const std::function<void(const std::vector<size_t>&)>& visit) {
  std::vector<size_t> idx;
  std::function<void(size_t)> go = [&](size_t from) {
    visit(idx);
    if (idx.size() == maxsz) return;
    for (size_t i = from; i < n; ++i) {
      idx.push_back(i);
      go(i + 1);
      idx.pop_back();
    }
  };
  go(0);
}

}  // namespace

std::vector<FinPtr> enumerate(const syntax::TypePtr& tau, int r,
                              const syntax::BaseRegistry& reg) {
  std::string key = syntax::print_type(tau) + "#" + std::to_string(r);
  {
    std::lock_guard<std::mutex> lock(enum_mutex);
    auto it = enum_memo.find(key);
    if (it != enum_memo.end()) return it->second;
  }
  std::vector<FinPtr> out;
  out.push_back(fe_bot());
  switch (tau->kind) {
    case syntax::PureType::Kind::Base: {
      const auto& carrier = reg.carrier(tau->name);
      for (size_t i = 0; i < carrier.size(); ++i)
        out.push_back(fe_atom(tau->name, carrier[i], static_cast<int>(i)));
      break;
    }
    case syntax::PureType::Kind::Prod: {
      auto ls = enumerate(tau->left, r, reg);
      auto rs = enumerate(tau->right, r, reg);
      for (const auto& l : ls)
        for (const auto& rr : rs) out.push_back(fe_pair(l, rr));
      break;
    }
    case syntax::PureType::Kind::Rec: {
      if (r > 0) {
        auto inners = enumerate(syntax::unfold_rec(tau), r - 1, reg);
        for (const auto& i : inners) out.push_back(fe_fold(i));
      }
      break;
    }
    case syntax::PureType::Kind::Arrow: {
      if (r > 0) {
        auto doms = enumerate(tau->left, r - 1, reg);
        auto cods = enumerate(tau->right, r - 1, reg);
        std::vector<Step> candidates;
        for (const auto& a : doms)
          for (const auto& c : cods) candidates.emplace_back(a, c);
        subsets_up_to(candidates.size(), static_cast<size_t>(r),
                      [&](const std::vector<size_t>& idx) {
                        std::vector<Step> steps;
                        steps.reserve(idx.size());
                        for (size_t i : idx) steps.push_back(candidates[i]);
                        auto res = mk_fun_nt(steps);
                        if (res.ok()) out.push_back(res.fun);
                      });
      }
      break;
    }
    case syntax::PureType::Kind::Var:
      throw Error("enumerate: open type " + syntax::print_type(tau));
  }
  std::sort(out.begin(), out.end(),
            [](const FinPtr& a, const FinPtr& b) { return compare(a, b) < 0; });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const FinPtr& a, const FinPtr& b) { return equal(a, b); }),
            out.end());
  std::lock_guard<std::mutex> lock(enum_mutex);
  auto [it, inserted] = enum_memo.emplace(key, std::move(out));
  return it->second;
}

namespace {

// Oracle-private pointwise machinery. Deliberately does not call leq_nt's
// Fun case or apply_nt.
FinPtr apply_probe(const syntax::TypePtr& dom, const FinPtr& f, const FinPtr& x, int r);

bool leq_oracle_in(const syntax::TypePtr& tau, const FinPtr& d, const FinPtr& e, int r) {
  switch (tau->kind) {
    case syntax::PureType::Kind::Base: {
      if (d->kind == FinElt::Kind::Bot) return true;
      if (e->kind == FinElt::Kind::Bot) return false;
      return d->cname == e->cname;
    }
    case syntax::PureType::Kind::Prod: {
      FinPtr dl = d->kind == FinElt::Kind::Bot ? fe_bot() : d->left;
      FinPtr dr = d->kind == FinElt::Kind::Bot ? fe_bot() : d->right;
      FinPtr el = e->kind == FinElt::Kind::Bot ? fe_bot() : e->left;
      FinPtr er = e->kind == FinElt::Kind::Bot ? fe_bot() : e->right;
      return leq_oracle_in(tau->left, dl, el, r) && leq_oracle_in(tau->right, dr, er, r);
    }
    case syntax::PureType::Kind::Rec: {
      // arguments are canonical, so Bot decides the order without unfolding
      // (unfolding Bot against Bot would recurse forever)
      if (d->kind == FinElt::Kind::Bot) return true;
      if (e->kind == FinElt::Kind::Bot) return false;
      return leq_oracle_in(syntax::unfold_rec(tau), d->inner, e->inner, r);
    }
    case syntax::PureType::Kind::Arrow: {
      // probe set: both arg sets, closed under defined joins, plus Bot
      std::vector<FinPtr> probes;
      probes.push_back(fe_bot());
      auto add = [&](const FinPtr& x) {
        for (const auto& p : probes)
          if (equal(p, x)) return;
        probes.push_back(x);
      };
      if (d->kind == FinElt::Kind::Fun)
        for (const auto& [a, res] : d->steps) add(canonicalize(a));
      if (e->kind == FinElt::Kind::Fun)
        for (const auto& [a, res] : e->steps) add(canonicalize(a));
      for (size_t i = 0; i < probes.size(); ++i)
        for (size_t j = 0; j < i; ++j) {
          auto s = sup_nt(probes[i], probes[j]);
          if (s) add(*s);
        }
      for (const auto& p : probes) {
        FinPtr dv = apply_probe(tau->left, d, p, r);
        FinPtr ev = apply_probe(tau->left, e, p, r);
        if (!leq_oracle_in(tau->right, dv, ev, r)) return false;
      }
      return true;
    }
    case syntax::PureType::Kind::Var:
      throw Error("leq_oracle: open type");
  }
  return false;
}

FinPtr apply_probe(const syntax::TypePtr& dom, const FinPtr& f, const FinPtr& x, int r) {
  if (f->kind == FinElt::Kind::Bot) return fe_bot();
  FinPtr acc = fe_bot();
  for (const auto& [a, res] : f->steps) {
    if (!leq_oracle_in(dom, canonicalize(a), x, r)) continue;
    auto s = sup_nt(acc, res);
    if (!s) throw Error("leq_oracle: inconsistent step family");
    acc = *s;
  }
  return canonicalize(acc);
}

}  // namespace

bool leq_oracle(const syntax::TypePtr& tau, const FinPtr& d, const FinPtr& e, int r) {
  check_shape(tau, d);
  check_shape(tau, e);
  return leq_oracle_in(tau, canonicalize(d), canonicalize(e), r);
}

std::string to_sexp(const FinPtr& d) {
  std::ostringstream os;
  switch (d->kind) {
    case FinElt::Kind::Bot:
      os << "(bot)";
      break;
    case FinElt::Kind::Atom:
      os << "(atom " << d->cname << ")";
      break;
    case FinElt::Kind::Pair:
      os << "(pair " << to_sexp(d->left) << " " << to_sexp(d->right) << ")";
      break;
    case FinElt::Kind::Fold:
      os << "(fold " << to_sexp(d->inner) << ")";
      break;
    case FinElt::Kind::Fun: {
      os << "(fun";
      for (const auto& [a, r] : d->steps)
        os << " (" << to_sexp(a) << " -> " << to_sexp(r) << ")";
      os << ")";
      break;
    }
  }
  return os.str();
}

}  // namespace dtlf::findom
