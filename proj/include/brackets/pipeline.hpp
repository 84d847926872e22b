#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "brackets/numeric.hpp"
#include "brackets/series_eval.hpp"
#include "brackets/solver.hpp"
#include "brackets/spec.hpp"

namespace brackets {

struct EvalOptions {
  std::map<int, std::string> reps;  // overrides the spec's `rep` choices
  bool verify = true;
  long double tol = 1e-8;
  bool autoEpsilon = true;
};

struct PartReport {
  std::string bracketSeries;
  std::vector<std::string> candidates;
  std::vector<Diagnostic> diagnostics;
  std::vector<std::string> selected;
  std::string group;
  std::vector<std::string> asymptotic;
  std::vector<std::string> values;  // per selected member: closed form or "numeric ..."
};

struct EvalReport {
  std::string integrand;
  std::vector<std::string> combination;  // "f1=divergent", ...
  int index = 0;
  std::optional<int> epsilonBracket;     // 1-based, when the ε deformation was used
  std::vector<PartReport> parts;
  std::vector<std::string> notes;
  std::vector<std::string> rejected;     // combinations tried before the chosen one

  std::optional<ClosedForm> closedForm;  // in the spec parameters (and eps)
  std::optional<Rational> exact;
  std::optional<long double> value;
  std::optional<LimitValue> limit;
  std::optional<QuadratureResult> oracle;
  std::optional<Verdict> verdict;
  long double tolerance = 0;

  bool methodFails = false;
  std::string failure;

  std::string text(bool trace = false) const;
  std::string json() const;
};

EvalReport run_pipeline(const IntegrandSpec& spec, const EvalOptions& options = {});

// x^{mellin-1} Π factors at a numeric point, as the oracle sees it.
long double integrand_value(const IntegrandSpec& spec, const RealPoint& point, long double x);

// Quadrature of the integrand; oscillatory tails are detected from the factor list.
QuadratureResult integrate_spec(const IntegrandSpec& spec, const RealPoint& point, double tol = 1e-11);

// Frequency handed to the quadrature when the tail oscillates without decay; 0 otherwise.
long double tail_frequency(const IntegrandSpec& spec, const RealPoint& point);

}  // namespace brackets
