#pragma once

#include <functional>
#include <vector>
#include <string>

#include "brackets/affine.hpp"

namespace brackets {

struct QuadratureResult {
  long double value = 0;
  long double absErrorEstimate = 0;
  long evaluations = 0;
  long double splitPoint = 0;
};

struct QuadOptions {
  double tol = 1e-11;  // relative, per panel
  // Angular frequency of a persistent oscillation in the tail; 0 for none.
  long double frequency = 0;
  long budget = 20'000'000;
};

using Integrand = std::function<long double(long double)>;

// ∫ₐᵇ f by adaptive Gauss-Kronrod.
QuadratureResult quad_finite(const Integrand& f, long double a, long double b, double tol = 1e-11);

// ∫₀^∞ f: [0, S] in geometric panels toward 0, [S, ∞) through t = S/u (or by half-period
// intervals with epsilon acceleration when a tail frequency is given).
QuadratureResult quad_semiinfinite(const Integrand& f, const RealPoint& params,
                                   const QuadOptions& options = {});

// S = 10 (1 + max |parameter|).
long double split_point(const RealPoint& params);

struct Verdict {
  bool pass = false;
  long double difference = 0;
  long double allowed = 0;
};

// PASS when |symbolic - oracle| <= max(tol, 3·error estimate).
Verdict compare(long double symbolic, const QuadratureResult& oracle, long double tol);

// Wynn's epsilon algorithm on a sequence of partial sums; returns the last diagonal estimate
// and, through `error`, its distance from the previous one.
long double wynn_epsilon(const std::vector<long double>& partialSums, long double* error = nullptr);

}  // namespace brackets
