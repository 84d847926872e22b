#pragma once

#include <functional>
#include <string>
#include <vector>

#include "brackets/solution.hpp"

namespace brackets {

// Series-level normal form for a coefficient summed over index ∈ ℕ:
//   - Γ families with a pole at every n are rewritten by reflection into Γ(0) times
//     regular factors, keeping the 1/α of the limit along the index;
//   - Γ(K·n + c) with integer K ≥ 2 is expanded by the Gauss multiplication formula;
//   - integer multiples of the index in (-1) exponents are reduced mod 2.
GammaProduct normalize_series_coeff(const GammaProduct& coeff, const std::string& index);

// Term n (φ_n included) of a single-index series, as a limit along the index.
PointValue series_term(const GammaProduct& coeff, const std::string& index, long n,
                       const RealPoint& point);

// Pole (> 0) or zero (< 0) order of the term at integer n, for generic parameters.
int pole_order(const GammaProduct& coeff, const std::string& index, long n);

Classification classify_series(const SolutionSeries& s);

// Substitutes n = m + k and renormalizes; the indicator shift is included.
SolutionSeries shift_index(const SolutionSeries& s, int k);

// Recovers the argument map of a single-index series from its coefficient.
std::map<std::string, AffineForm> argument_of(const GammaProduct& coeff,
                                              const std::vector<std::string>& freeIndices);

HyperForm to_hyper(const SolutionSeries& s);
ClosedForm closed_form(const HyperForm& h);

long double numeric_sum(const HyperForm& h, const RealPoint& point);

struct AsymptoticValue {
  long double value = 0;
  long double errorBound = 0;
  int terms = 0;
};
AsymptoticValue asymptotic_truncate(const HyperForm& h, const RealPoint& point, int maxTerms);

struct LimitValue {
  long double value = 0;
  long double residual = 0;
  std::vector<long double> samples;
};
// Samples V at ε_k = 10^-2 · 2^-k, k = 0..6, and extrapolates to ε = 0.
LimitValue epsilon_limit(const std::function<long double(long double)>& family);

long double evaluate_closed_form(const ClosedForm& cf, const RealPoint& point);
std::optional<Rational> exact_closed_form(const ClosedForm& cf, const ExactPoint& point);

ClosedForm substitute(const ClosedForm& cf, const std::map<std::string, AffineForm>& values);

}  // namespace brackets
