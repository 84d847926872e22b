#pragma once

#include <string>
#include <vector>

namespace brackets {

// Pointwise values of catalog functions under the catalog's argument conventions:
// exp(x) = e^{-x}, Ei(x) = Ei(-x); "pFq" names are the plain series at x.
long double eval_function(const std::string& name, const std::vector<long double>& params,
                          long double x);

// Kν(x) from ∫₀^∞ e^{-x cosh t} cosh(νt) dt through the project quadrature.
long double bessel_k_integral(long double nu, long double x);

// U(a,b,x) from Γ(a)U = ∫₀^∞ e^{-xt} t^{a-1} (1+t)^{b-a-1} dt.
long double tricomi_u_integral(long double a, long double b, long double x);

}  // namespace brackets
