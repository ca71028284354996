#pragma once

#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "dtlf/findom.hpp"
#include "dtlf/logic.hpp"
#include "dtlf/syntax.hpp"

namespace dtlf::evalsem {

struct SemValue;
using ValPtr = std::shared_ptr<SemValue>;

struct SemEnv {
  std::map<std::string, ValPtr> vars;
};

// Weak values of the bounded evaluator. Approx carries a finite element
// (with its type when known, required to apply it); Pair/Fold keep their
// components as unevaluated thunks, call-by-name.
struct SemValue {
  enum class Kind { Approx, Closure, Thunk, PairV, FoldV };
  Kind kind;
  // Approx
  findom::FinPtr d;
  syntax::TypePtr tau;  // may be null
  // Closure
  SemEnv env;
  std::string binder;
  syntax::TermPtr body;
  // Thunk: term in env at the fuel of its creation; memo is write-once.
  syntax::TermPtr term;
  int fuel = 0;
  ValPtr memo;
  // PairV / FoldV children (thunks or values)
  ValPtr first, second;
};

ValPtr v_approx(findom::FinPtr d, syntax::TypePtr tau = nullptr);
ValPtr v_closure(SemEnv env, const std::string& binder, syntax::TermPtr body);
ValPtr v_thunk(SemEnv env, syntax::TermPtr term, int fuel);
ValPtr v_pair(ValPtr l, ValPtr r);
ValPtr v_foldv(ValPtr inner);

enum class Tri { Holds, Unknown };

// Extra probe arguments for lowering closures, keyed by printed type. The
// checker feeds elements discovered during a run (context entries,
// application mediators, fixpoint iterates) so that probing is not limited
// to the rank-bounded enumeration.
struct ProbePool {
  std::map<std::string, std::vector<findom::FinPtr>> extra;
  void add(const syntax::TypePtr& tau, const findom::FinPtr& d);
  void add_decomposed(const syntax::TypePtr& tau, const findom::FinPtr& d);
  std::vector<findom::FinPtr> probes(const syntax::TypePtr& tau, int rank,
                                     const syntax::BaseRegistry& reg) const;
};

struct Evaluator {
  const syntax::BaseRegistry& reg;
  int rank = 2;
  const ProbePool* pool = nullptr;  // optional
  // How many arrow layers lower() probes before giving up with Bot. Types
  // that nest arrows under rec (resumptions) otherwise make probing blow up
  // exponentially in fuel; Bot for a deep closure is still a lower bound.
  int probe_depth = 2;

  explicit Evaluator(const syntax::BaseRegistry& r) : reg(r) {}

  // Weak evaluation; exhaustion degrades to Approx(Bot), never an error.
  ValPtr eval(const syntax::TermPtr& t, const SemEnv& env, int fuel);
  ValPtr force(const ValPtr& v);
  ValPtr apply_val(const ValPtr& f, const ValPtr& arg, int fuel);

  // Canonical finite element below the value's denotation. Fuel is charged
  // per Fold layer; closures are probed over the pool at this->rank.
  findom::FinPtr lower(const ValPtr& v, const syntax::TypePtr& tau, int fuel);

  // Sound membership: Holds implies the denotation satisfies phi. Never
  // refutes.
  Tri member(const ValPtr& v, const syntax::TypePtr& tau, const logic::FormulaPtr& phi,
             int fuel);

 private:
  // Applications and lowerings are pure in (value, type, fuel) for a fixed
  // probe pool, so they memoize over the shared value graph. Keys pin their
  // values to keep addresses stable; lower keys include the pool size, so a
  // grown pool forces recomputation (a stale entry would still be a sound
  // lower bound, just a weaker one).
  std::map<std::tuple<const SemValue*, const SemValue*, int, int>, ValPtr> app_memo_;
  std::map<std::string, findom::FinPtr> lower_memo_;
  std::map<std::string, ValPtr> probe_vals_;  // interned Approx probes
  std::vector<ValPtr> pins_;
  int depth_left_ = -1;  // set from probe_depth on first use

  ValPtr probe_val(const findom::FinPtr& d, const syntax::TypePtr& tau);
  size_t pool_count() const;
  findom::FinPtr lower_uncached(const ValPtr& v, const syntax::TypePtr& tau, int fuel);
};

// Structural satisfaction of a schema-free formula on a finite element.
// Exact when every arrow domain in phi is Conjunctive.
bool sat(const syntax::TypePtr& tau, const findom::FinPtr& d, const logic::FormulaPtr& phi,
         const syntax::BaseRegistry& reg);

// Exhaustive semantic checks over enumerate(tau, r).
bool oracle_entail(const syntax::TypePtr& tau, const logic::FormulaPtr& psi,
                   const logic::FormulaPtr& phi, int r, const syntax::BaseRegistry& reg);
bool oracle_consistent(const syntax::TypePtr& tau, const logic::FormulaPtr& phi, int r,
                       const syntax::BaseRegistry& reg);

// Convenience wrappers using a fresh evaluator with default rank.
ValPtr eval(const syntax::TermPtr& t, const SemEnv& env, int fuel,
            const syntax::BaseRegistry& reg);
findom::FinPtr lower(const ValPtr& v, const syntax::TypePtr& tau, int fuel, int rank,
                     const syntax::BaseRegistry& reg);
Tri member(const ValPtr& v, const syntax::TypePtr& tau, const logic::FormulaPtr& phi,
           int fuel, int rank, const syntax::BaseRegistry& reg);

}  // namespace dtlf::evalsem
