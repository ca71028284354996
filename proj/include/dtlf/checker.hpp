#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dtlf/evalsem.hpp"
#include "dtlf/logic.hpp"
#include "dtlf/subtype.hpp"
#include "dtlf/syntax.hpp"

namespace dtlf::checker {

struct CheckOptions {
  int k = 2;          // truncation depth for schemas
  int n_fix = 4;      // fixpoint iteration budget
  int fuel = 16;      // evaluation fuel
  int rank = 2;       // finite-element enumeration rank
  bool use_semantic_fallback = true;
  int disjunct_limit = 64;  // cap on context disjunct branches
};

struct TraceStep {
  std::string rule;
  std::string note;
  std::vector<int> premises;  // indices into the trace
};

struct Verdict {
  enum class Kind { Derivable, Unknown, IllTyped };
  Kind kind;
  std::vector<TraceStep> trace;
  std::string reason;           // for Unknown / IllTyped
  std::optional<int> failing;   // trace index of the failing step
  bool ok() const { return kind == Kind::Derivable; }
};

struct Judgment {
  subtype::RefContext ctx;
  syntax::TermPtr term;
  subtype::RefPtr goal;
};

// One parsed stanza of a judgment file: the judgment plus its directives.
struct JudgmentCase {
  std::string name;
  Judgment j;
  CheckOptions opts;      // file directives folded over the defaults
  std::string expect;     // "derivable" | "unknown" | "" (unspecified)
  bool has_opts = false;
};

struct CorpusFile {
  syntax::BaseRegistry reg;
  std::vector<JudgmentCase> cases;
};

Verdict check(const Judgment& j, const CheckOptions& opts, const syntax::BaseRegistry& reg);

// Kleene iteration for unannotated fix: chain psi_0 = True, psi_{j+1} =
// char_formula(lower(eval(body, x -> compile(psi_j)))). Returns the chain up
// to the first link entailing the Conjunctive target, absent if no link
// within opts.n_fix suffices. Links are re-verified by the caller.
std::optional<std::vector<logic::FormulaPtr>> fix_iterate(
    const subtype::RefContext& ctx, const std::string& x, const syntax::TermPtr& body,
    const syntax::TypePtr& tau, const logic::FormulaPtr& target, const CheckOptions& opts,
    const syntax::BaseRegistry& reg, const evalsem::ProbePool* pool);

// Eta-expands the goal so the refinement sits on a base or recursive type:
// product goals split into projection judgments, arrow goals bind a fresh
// variable. Returns the list of residual judgments.
std::vector<Judgment> eta_expand(const Judgment& j, const syntax::BaseRegistry& reg);

Verdict check_normal(const Judgment& j, const CheckOptions& opts,
                     const syntax::BaseRegistry& reg);

CorpusFile parse_judgment_file(const std::string& text);

std::string print_judgment(const Judgment& j);
std::string print_trace(const Verdict& v);

}  // namespace dtlf::checker
