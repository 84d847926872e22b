#pragma once

#include <string>
#include <vector>

#include "brackets/series_rep.hpp"
#include "brackets/solution.hpp"

namespace brackets {

struct Diagnostic {
  std::string candidate;
  std::string reason;  // kept | duplicate | divergent-discarded | null-discarded | added-to-group g | ...
};

struct CandidateGroup {
  std::string key;  // exponent ray of the series argument
  std::vector<SolutionSeries> members;
  std::vector<SolutionSeries> discarded;
  bool viable() const { return !members.empty(); }
};

struct ResolutionResult {
  std::vector<SolutionSeries> candidates;
  std::vector<SolutionSeries> selected;
  std::vector<CandidateGroup> groups;  // viable groups first, then by key
  std::vector<SolutionSeries> asymptotic;
  std::vector<Diagnostic> diagnostics;
  bool methodFails = false;
  std::string failure;
};

// One index, one bracket ⟨αn + b⟩: (1/|α|) a(n*) Γ(-n*) with n* = -b/α.
SolutionSeries solve_rule_e1(const BracketSeries& bs);

// Eliminates every index outside `freeIndices` through the brackets, which must leave a
// square nonsingular system: (1/|det B|) a(n*) Π Γ(-n_i*).
SolutionSeries solve_rule_e2(const BracketSeries& bs, const std::vector<std::string>& freeIndices = {});

// One candidate per nonsingular choice of free indices, labelled T1, T2, ... in order.
std::vector<SolutionSeries> enumerate_free(const BracketSeries& bs,
                                           std::vector<Diagnostic>* diagnostics = nullptr);

// Same part and the same series up to renaming the free index (and, for a shift, with the
// skipped terms vanishing).
bool structurally_equal(const SolutionSeries& a, const SolutionSeries& b);

// n → d·m + r for r = 0..d-1; each piece is renormalized.
std::vector<SolutionSeries> parity_split(const SolutionSeries& s, int d);

BracketSeries epsilon_deform(const BracketSeries& bs, size_t bracketIndex,
                             const std::string& eps = "eps");

struct ScaleParameter {
  std::string marker;  // power base carrying the parameter in the coefficient
  Rational k;          // x-exponent of the argument it scales
};

// Series of -(1/ρ) Σ_j k_j a_j ∂/∂a_j applied to the integral, one per parameter.
std::vector<BracketSeries> parametric_reduction(const BracketSeries& bs,
                                                const std::vector<ScaleParameter>& parameters,
                                                const AffineForm& rho, bool boundaryVanishes);

// Exponent-ray key of a single-index candidate; multi-index candidates key on the full map.
std::string argument_key(const SolutionSeries& s);

ResolutionResult group_and_select(std::vector<SolutionSeries> candidates);

}  // namespace brackets
