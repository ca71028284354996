#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dtlf/syntax.hpp"

namespace dtlf::findom {

struct FinElt;
using FinPtr = std::shared_ptr<const FinElt>;
using Step = std::pair<FinPtr, FinPtr>;

// Finite (compact) element of the domain of some pure type. Bot is a
// constructor at every type; Pair(Bot,Bot), Fold(Bot) and Fun[] denote the
// same point as Bot and canonicalize to it.
struct FinElt {
  enum class Kind { Bot, Atom, Pair, Fold, Fun };
  Kind kind;
  std::string base;   // Atom base type
  std::string cname;  // Atom constant
  int atom_index = -1;
  FinPtr left, right;  // Pair
  FinPtr inner;        // Fold
  std::vector<Step> steps;  // Fun, canonical: no Bot results, args distinct, sorted
};

FinPtr fe_bot();
FinPtr fe_atom(const std::string& base, const std::string& cname, int index);
FinPtr fe_pair(FinPtr l, FinPtr r);
FinPtr fe_fold(FinPtr inner);
// Raw Fun constructor: no consistency check, no canonicalization.
FinPtr fe_fun_raw(std::vector<Step> steps);

// Total order on element trees; Bot < Atom < Pair < Fold < Fun, atoms by
// (base, carrier index).
int compare(const FinPtr& a, const FinPtr& b);
bool equal(const FinPtr& a, const FinPtr& b);

// True when d denotes the least element of its domain.
bool is_botlike(const FinPtr& d);

// Canonical representative: botlike collapses to Bot; Fun steps lose Bot
// results and dominated entries, merge equal args, and sort.
FinPtr canonicalize(const FinPtr& d);

// Structural order/join/application; elements may be non-canonical.
bool leq_nt(const FinPtr& d, const FinPtr& e);
std::optional<FinPtr> sup_nt(const FinPtr& d, const FinPtr& e);
FinPtr apply_nt(const FinPtr& f, const FinPtr& d);

// Typed wrappers validating element shape against tau.
void check_shape(const syntax::TypePtr& tau, const FinPtr& d);
bool leq(const syntax::TypePtr& tau, const FinPtr& d, const FinPtr& e);
std::optional<FinPtr> sup(const syntax::TypePtr& tau, const FinPtr& d, const FinPtr& e);
bool consistent(const syntax::TypePtr& tau, const FinPtr& d, const FinPtr& e);
FinPtr apply(const syntax::TypePtr& tau, const FinPtr& f, const FinPtr& d);

// Step-family constructor enforcing the subset side condition: every subset
// of steps with joinable args must have joinable results. On failure,
// `violating` holds indices of an offending subset.
struct MkFunResult {
  FinPtr fun;  // null on failure
  std::vector<int> violating;
  bool ok() const { return fun != nullptr; }
};
MkFunResult mk_fun(const syntax::TypePtr& tau, const std::vector<Step>& steps);
MkFunResult mk_fun_nt(const std::vector<Step>& steps);

// Trusted constructor for graphs of monotone functions sampled from a real
// continuous function: results are all bounded by the function's value at
// the join of their args, so the subset condition holds by construction.
// Canonicalizes only.
FinPtr fun_from_graph(const std::vector<Step>& steps);

// All elements shaped by tau within rank r: rec-unfold depth and Fun step
// count are bounded by r, Fun step components drawn from rank r-1. Elements
// are distinct as trees (Bot and Pair(Bot,Bot) both appear); deterministic
// order, Bot first then ascending by compare. Memoized.
std::vector<FinPtr> enumerate(const syntax::TypePtr& tau, int r, const syntax::BaseRegistry& reg);

// Independent order check: probes both functions pointwise on the arguments
// occurring in d and e, closed under defined joins. Shares no code with the
// Fun case of leq.
bool leq_oracle(const syntax::TypePtr& tau, const FinPtr& d, const FinPtr& e, int r);

std::string to_sexp(const FinPtr& d);

}  // namespace dtlf::findom
