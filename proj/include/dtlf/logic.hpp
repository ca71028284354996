#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dtlf/findom.hpp"
#include "dtlf/syntax.hpp"

namespace dtlf::logic {

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Negation-free modal formulas with finite connectives plus named temporal
// schemas. True = And[], False = Or[]. Schemas are eliminated by truncate
// before any decision procedure runs.
struct Formula {
  enum class Kind {
    Atom,        // <a>
    Pi1, Pi2,    // [pi1] f, [pi2] f
    Fold,        // [fold] f
    Arrow,       // psi -o phi
    And, Or,     // finite connectives
    Box, Diam,                        // stream schemas
    AllBox, ExBox, AllDiam, ExDiam,   // tree schemas
    Mu, Nu,      // fixpoint schemas, positive bodies
    SVar         // fixpoint variable
  };
  Kind kind;
  std::string base, cname;  // Atom
  std::string var;          // Mu/Nu binder, SVar name
  FormulaPtr a;             // unary child / Arrow dom / Mu/Nu body / schema body
  FormulaPtr b;             // Arrow cod
  std::vector<FormulaPtr> items;  // And / Or
};

FormulaPtr mk_atomf(const std::string& base, const std::string& cname);
FormulaPtr mk_pi1f(FormulaPtr f);
FormulaPtr mk_pi2f(FormulaPtr f);
FormulaPtr mk_foldf(FormulaPtr f);
FormulaPtr mk_arrowf(FormulaPtr dom, FormulaPtr cod);
FormulaPtr mk_andf(std::vector<FormulaPtr> items);
FormulaPtr mk_orf(std::vector<FormulaPtr> items);
FormulaPtr mk_schema(Formula::Kind kind, FormulaPtr body);
FormulaPtr mk_mu(const std::string& var, FormulaPtr body);
FormulaPtr mk_nu(const std::string& var, FormulaPtr body);
FormulaPtr mk_svar(const std::string& var);
FormulaPtr f_true();
FormulaPtr f_false();

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);
int formula_size(const FormulaPtr& f);  // AST node count
bool has_schema(const FormulaPtr& f);
std::string print_formula(const FormulaPtr& f);
FormulaPtr parse_formula(const std::string& text, const syntax::BaseRegistry& reg);

// Checks the formation rules of f at tau (modalities match the type
// constructor, atoms belong to the base carrier, schemas sit at stream/tree
// shaped recs, mu/nu bodies are positive: the bound variable never occurs in
// the domain of an arrow). Throws Error on violation.
void validate_formula(const syntax::TypePtr& tau, const FormulaPtr& f,
                      const syntax::BaseRegistry& reg);

enum class FormulaClass { Conjunctive, Normal, Open, General };
std::string class_name(FormulaClass c);

// Tightest class of a schema-free formula. Conjunctive: finite conjunctions,
// empty disjunctions only (recursively, including arrow components). Normal:
// And of Or of Conjunctive. Open: built from Conjunctive pieces by
// disjunction and finite conjunction.
FormulaClass classify(const FormulaPtr& f);

// Extension of a Conjunctive formula: Empty when it denotes the empty set,
// Up(d) when it denotes the upward closure of the canonical element d.
struct Compiled {
  std::optional<findom::FinPtr> up;
  bool empty() const { return !up.has_value(); }
  static Compiled mk_empty() { return Compiled{std::nullopt}; }
  static Compiled mk_up(findom::FinPtr d) { return Compiled{std::move(d)}; }
};

Compiled compile(const syntax::TypePtr& tau, const FormulaPtr& phi,
                 const syntax::BaseRegistry& reg);

// Conjunctive formula whose extension is exactly the upward closure of d.
FormulaPtr char_formula(const syntax::TypePtr& tau, const findom::FinPtr& d,
                        const syntax::BaseRegistry& reg);

bool consistent_f(const syntax::TypePtr& tau, const FormulaPtr& phi,
                  const syntax::BaseRegistry& reg);
bool entail_conj(const syntax::TypePtr& tau, const FormulaPtr& psi, const FormulaPtr& phi,
                 const syntax::BaseRegistry& reg);

// Decides inclusion of extensions for schema-free formulas with finite
// connectives. Both sides are normalized to disjunctions of Conjunctive
// formulas (arrows are rebuilt with Conjunctive components first).
bool entail_fin(const syntax::TypePtr& tau, const FormulaPtr& psi, const FormulaPtr& phi,
                const syntax::BaseRegistry& reg);

// Distributes pi1/pi2/fold over non-empty conjunctions and all disjunctions.
// Keeps modal-over-True; collapses modal-over-False to False.
FormulaPtr push_modalities(const FormulaPtr& f);

// Unit laws: drops True conjuncts and False disjuncts, collapses And with a
// False member and Or with a True member, modal over True/False, arrows with
// False domain or True codomain, unary And/Or wrappers.
FormulaPtr simplify_units(const FormulaPtr& f);

// Disjunctive normal form: Or of And of Conjunctive. Arrow components are
// normalized recursively (domain split by disjunction, codomain by
// conjunction) and the resulting arrows treated as atoms.
FormulaPtr to_dnf(const syntax::TypePtr& tau, const FormulaPtr& phi,
                  const syntax::BaseRegistry& reg);

// Replaces every schema node by its k-th finite unfolding and simplifies
// units. Box: conj of the first k next-iterates; Diam: disj; tree schemas:
// k rounds of label-plus-children steps; Mu/Nu: k-fold substitution into
// False/True.
FormulaPtr truncate(const FormulaPtr& phi, int k);

// Internals shared with entail_fin, exposed for tests: the list of
// Conjunctive disjuncts of the normalized formula.
std::vector<FormulaPtr> dnf_clauses(const syntax::TypePtr& tau, const FormulaPtr& phi,
                                    const syntax::BaseRegistry& reg);
// And-of-Or view over Conjunctive leaves of the normalized formula.
std::vector<std::vector<FormulaPtr>> cnf_clauses(const syntax::TypePtr& tau,
                                                 const FormulaPtr& phi,
                                                 const syntax::BaseRegistry& reg);

}  // namespace dtlf::logic
