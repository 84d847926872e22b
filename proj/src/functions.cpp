#include "brackets/functions.hpp"

#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <cmath>

#include "brackets/catalog.hpp"
#include "brackets/errors.hpp"
#include "brackets/numeric.hpp"

namespace brackets {

namespace {

void need(size_t got, size_t want, const std::string& name) {
  if (got != want)
    throw Error(ErrorKind::DomainError, name + " expects " + std::to_string(want) + " parameters");
}

long double hypergeometric_series(int p, int q, const std::vector<long double>& params, long double z) {
  long double t = 1, sum = 1;
  for (int n = 0; n < 100000; ++n) {
    long double r = z / (n + 1);
    for (int i = 0; i < p; ++i) r *= params[i] + n;
    for (int j = 0; j < q; ++j) r /= params[p + j] + n;
    t *= r;
    sum += t;
    if (t == 0 || std::fabs(t) < 1e-19L * std::fabs(sum)) return sum;
  }
  throw Error(ErrorKind::NonConverged, "hypergeometric factor did not converge");
}

}  // namespace

long double bessel_k_integral(long double nu, long double x) {
  if (x <= 0) throw Error(ErrorKind::DomainError, "K needs x > 0");
  // e^{-x cosh t} is below e^{-745} beyond this point.
  long double tmax = std::acosh(745.0L / x + 1);
  auto f = [&](long double t) { return std::exp(-x * std::cosh(t)) * std::cosh(nu * t); };
  return quad_finite(f, 0, tmax, 1e-13).value;
}

long double tricomi_u_integral(long double a, long double b, long double x) {
  if (a <= 0 || x <= 0) throw Error(ErrorKind::DomainError, "U integral needs a > 0, x > 0");
  // t = s/x puts the exponential decay on the unit scale.
  auto f = [&](long double s) {
    if (s == 0) return 0.0L;
    return std::exp(-s + (a - 1) * std::log(s) + (b - a - 1) * std::log1p(s / x));
  };
  QuadOptions opt;
  opt.tol = 1e-12;
  return std::pow(x, -a) * quad_semiinfinite(f, {{"a", a}}, opt).value / std::tgamma(a);
}

long double eval_function(const std::string& name, const std::vector<long double>& params,
                          long double x) {
  namespace bm = boost::math;
  if (name == "exp") return std::exp(-x);
  if (name == "cos") return std::cos(x);
  if (name == "sin") return std::sin(x);
  if (name == "J0") return bm::cyl_bessel_j(0, static_cast<double>(x));
  if (name == "I0") return bm::cyl_bessel_i(0, static_cast<double>(x));
  if (name == "Jnu") {
    need(params.size(), 1, name);
    if (x < 0) throw Error(ErrorKind::DomainError, "Jnu needs x >= 0");
    return bm::cyl_bessel_j(static_cast<double>(params[0]), static_cast<double>(x));
  }
  if (name == "Ei") {
    if (x <= 0) throw Error(ErrorKind::DomainError, "Ei(-x) needs x > 0");
    return -bm::expint(1, static_cast<double>(x));
  }
  if (name == "K0") return bessel_k_integral(0, x);
  if (name == "Knu") {
    need(params.size(), 1, name);
    return bessel_k_integral(params[0], x);
  }
  if (name == "Ai") return bm::airy_ai(static_cast<double>(x));
  if (name == "TricomiU") {
    need(params.size(), 2, name);
    return tricomi_u_integral(params[0], params[1], x);
  }
  int p = 0, q = 0;
  if (parse_hypergeometric_name(name, p, q)) {
    need(params.size(), static_cast<size_t>(p + q), name);
    if ((p == q + 1 && std::fabs(x) >= 1) || (p > q + 1 && x != 0))
      throw Error(ErrorKind::DomainError, name + " series does not converge at " + std::to_string(static_cast<double>(x)));
    return hypergeometric_series(p, q, params, x);
  }
  throw Error(ErrorKind::UnknownFunction, "no evaluator for '" + name + "'");
}

}  // namespace brackets
