#pragma once

#include <string>
#include <utility>
#include <vector>

#include "brackets/gamma_product.hpp"

namespace brackets {

enum class RepClass {
  classical,
  totally_null,
  partially_null,
  partially_divergent,
  totally_divergent,
  formally_divergent,
  bracket,  // carries structural brackets; not a plain series
};

const char* rep_class_name(RepClass c);
RepClass parse_rep_class(const std::string& name);

// f(x) = Σ φ_n coeff(n) x^{xExponent(n)} ⟨brackets⟩, with φ_n = (-1)^n/Γ(n+1) implicit
// for every index.
struct SeriesRep {
  std::string name;
  std::vector<std::string> indices;
  GammaProduct coeff;
  AffineForm xExponent;
  std::vector<AffineForm> brackets;
  RepClass repClass = RepClass::classical;

  std::string str() const;
};

bool operator==(const SeriesRep& a, const SeriesRep& b);

struct BracketSeries {
  std::vector<std::string> indices;
  GammaProduct coeff;
  std::vector<AffineForm> brackets;  // structural brackets first, integration bracket last

  int index() const { return static_cast<int>(indices.size()) - static_cast<int>(brackets.size()); }
  std::string str() const;
};

bool operator==(const BracketSeries& a, const BracketSeries& b);

// base^E for a monomial base (rational constant times powers with constant exponents).
GammaProduct monomial_power(const GammaProduct& base, const AffineForm& exponent);

// f(scale · x^k) from the representation of f(x).
SeriesRep apply_argument(const SeriesRep& rep, const GammaProduct& scale, const Rational& k);

// Rule P1: attach ⟨xExponent + shift + 1⟩ to the series.
BracketSeries expand_p1(const SeriesRep& rep, const AffineForm& monomialShift);

// Rule P2: (Σ coeff_i x^{xExp_i})^alpha. Returns the multi-index series carrying the
// bracket ⟨-alpha + Σ m_i⟩ and the factor 1/Γ(-alpha). A single term collapses to
// coeff^alpha x^{alpha·xExp}.
SeriesRep expand_p2(const std::vector<std::pair<GammaProduct, AffineForm>>& terms,
                    const AffineForm& alpha);

// Product of factor series with indices renamed apart to n1, n2, ...
SeriesRep multiply_reps(const std::vector<SeriesRep>& factors);

// Product followed by Rule P1 on the merged x-exponent.
BracketSeries compose_product(const std::vector<SeriesRep>& factors,
                              const AffineForm& monomialShift = AffineForm());

// Renames indices to n1..nk in order of appearance; used to compare series structurally.
BracketSeries canonical_indices(const BracketSeries& bs);
SeriesRep canonical_indices(const SeriesRep& rep, int firstIndex = 1);

}  // namespace brackets
