#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dtlf/logic.hpp"
#include "dtlf/syntax.hpp"

namespace dtlf::subtype {

struct RefType;
using RefPtr = std::shared_ptr<const RefType>;

// Refinement types: pure carriers, refinements { tau | phi }, and product /
// arrow combinations of refinement types.
struct RefType {
  enum class Kind { PureT, Refine, ProdT, ArrowT };
  Kind kind;
  syntax::TypePtr tau;     // PureT, Refine
  logic::FormulaPtr phi;   // Refine
  RefPtr left, right;      // ProdT, ArrowT
};

RefPtr mk_puret(syntax::TypePtr tau);
RefPtr mk_refine(syntax::TypePtr tau, logic::FormulaPtr phi);
RefPtr mk_prodt(RefPtr l, RefPtr r);
RefPtr mk_arrowt(RefPtr dom, RefPtr cod);

using RefContext = std::vector<std::pair<std::string, RefPtr>>;

syntax::TypePtr underlying(const RefPtr& T);

// Characteristic formula: (|T|, phi) with T equivalent to { |T| | phi }.
std::pair<syntax::TypePtr, logic::FormulaPtr> char_type(const RefPtr& T);

// Entailment of the k-truncated characteristic formulas. Underlying types
// must coincide.
bool subtype(const RefPtr& S, const RefPtr& T, int k, const syntax::BaseRegistry& reg);

std::string print_reftype(const RefPtr& T);
RefPtr parse_reftype(const std::string& text, const syntax::BaseRegistry& reg);

}  // namespace dtlf::subtype
