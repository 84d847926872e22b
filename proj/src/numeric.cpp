#include "brackets/numeric.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>
#include <vector>

#include "brackets/errors.hpp"

namespace brackets {

namespace {

constexpr int kMaxPanels = 400;

struct Accumulator {
  long double value = 0;
  long double error = 0;
  long evaluations = 0;
  int quiet = 0;

  // True once several consecutive panels stop contributing.
  bool add(const QuadratureResult& r) {
    value += r.value;
    error += r.absErrorEstimate;
    evaluations += r.evaluations;
    if (value != 0 && std::fabs(r.value) <= 1e-17L * std::fabs(value))
      ++quiet;
    else
      quiet = 0;
    return quiet >= 4;
  }
};

}  // namespace

QuadratureResult quad_finite(const Integrand& f, long double a, long double b, double tol) {
  // Globally adaptive: always bisect the segment with the largest Kronrod error estimate.
  struct Segment {
    long double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
  };
  long count = 0;
  auto g = [&](double x) {
    ++count;
    long double v = f(x);
    if (!std::isfinite(v)) throw Error(ErrorKind::EndpointSingular, "integrand not finite");
    return static_cast<double>(v);
  };
  // Boost's single-rule error estimate is not rescaled by the interval width, so each
  // segment is mapped onto [-1, 1] here.
  auto rule = [&](long double lo, long double hi) {
    long double c = (lo + hi) / 2, r = (hi - lo) / 2;
    auto h = [&](double t) { return g(static_cast<double>(c + r * t)) * static_cast<double>(r); };
    double err = 0;
    double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(h, -1.0, 1.0, 0, 0.0, &err);
    return Segment{lo, hi, v, err};
  };
  std::priority_queue<Segment> heap;
  heap.push(rule(a, b));
  long double value = heap.top().value, error = heap.top().error;
  constexpr int kMaxSegments = 4000;
  for (int n = 1; n < kMaxSegments; ++n) {
    if (error <= tol * std::fabs(value) || error <= 1e-300L) break;
    Segment worst = heap.top();
    long double mid = (worst.a + worst.b) / 2;
    if (mid <= worst.a || mid >= worst.b) break;
    heap.pop();
    Segment left = rule(worst.a, mid), right = rule(mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-add in one pass to shed the drift of the running updates.
  value = 0;
  error = 0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  QuadratureResult r;
  r.value = value;
  r.absErrorEstimate = error;
  r.evaluations = count;
  return r;
}

long double split_point(const RealPoint& params) {
  long double m = 0;
  for (const auto& [name, v] : params) m = std::max(m, std::fabs(v));
  return 10 * (1 + m);
}

QuadratureResult quad_semiinfinite(const Integrand& f, const RealPoint& params,
                                   const QuadOptions& options) {
  long double S = split_point(params);
  Accumulator head;
  for (int k = 0; k < kMaxPanels; ++k) {
    long double b = S * std::ldexp(1.0L, -k);
    if (b < 1e-290L) break;
    if (head.add(quad_finite(f, b / 2, b, options.tol)) && k > 8) break;
    if (head.evaluations > options.budget)
      throw Error(ErrorKind::NonConverged, "quadrature budget exhausted near 0");
  }

  Accumulator tail;
  if (options.frequency > 0) {
    long double h = M_PIl / options.frequency;
    std::vector<long double> partial;
    long double running = 0;
    for (int j = 0; j < 80; ++j) {
      QuadratureResult r = quad_finite(f, S + j * h, S + (j + 1) * h, options.tol);
      running += r.value;
      tail.error += r.absErrorEstimate;
      tail.evaluations += r.evaluations;
      partial.push_back(running);
    }
    long double werr = 0;
    tail.value = wynn_epsilon(partial, &werr);
    tail.error += werr;
  } else {
    auto g = [&](long double u) { return f(S / u) * S / (u * u); };
    for (int k = 0; k < kMaxPanels; ++k) {
      long double b = std::ldexp(1.0L, -k);
      if (S / b > 1e290L) break;
      if (tail.add(quad_finite(g, b / 2, b, options.tol)) && k > 4) break;
      if (tail.evaluations > options.budget)
        throw Error(ErrorKind::NonConverged, "quadrature budget exhausted in the tail");
    }
  }

  QuadratureResult out;
  out.value = head.value + tail.value;
  out.absErrorEstimate = head.error + tail.error;
  out.evaluations = head.evaluations + tail.evaluations;
  out.splitPoint = S;
  if (!std::isfinite(out.value)) throw Error(ErrorKind::NonConverged, "quadrature is not finite");
  return out;
}

long double wynn_epsilon(const std::vector<long double>& s, long double* error) {
  size_t n = s.size();
  if (n == 0) return 0;
  // e[k][i]: column k, row i.
  std::vector<std::vector<long double>> e(n + 1);
  e[0] = std::vector<long double>(n + 1, 0.0L);
  e[1] = s;
  long double best = s.back(), prev = n > 1 ? s[n - 2] : s.back();
  for (size_t k = 2; k <= n; ++k) {
    size_t len = e[k - 1].size() - 1;
    if (len == 0) break;
    e[k].resize(len);
    bool ok = true;
    for (size_t i = 0; i < len; ++i) {
      long double d = e[k - 1][i + 1] - e[k - 1][i];
      if (d == 0) {
        ok = false;
        break;
      }
      e[k][i] = e[k - 2][i + 1] + 1 / d;
    }
    if (!ok) break;
    if (k % 2 == 1 && len >= 2) {  // odd storage columns hold the even epsilon estimates
      prev = e[k][len - 2];
      best = e[k][len - 1];
    }
  }
  if (error) *error = std::fabs(best - prev);
  return best;
}

Verdict compare(long double symbolic, const QuadratureResult& oracle, long double tol) {
  Verdict v;
  v.difference = std::fabs(symbolic - oracle.value);
  v.allowed = std::max(tol, 3 * oracle.absErrorEstimate);
  v.pass = std::isfinite(symbolic) && v.difference <= v.allowed;
  return v;
}

}  // namespace brackets
