#include <algorithm>
#include <cmath>
#include <numeric>

#include "brackets/errors.hpp"
#include "brackets/series_eval.hpp"

namespace brackets {

const char* series_class_name(SeriesClass c) {
  switch (c) {
    case SeriesClass::convergent: return "convergent";
    case SeriesClass::terminating: return "terminating";
    case SeriesClass::totally_null: return "totally_null";
    case SeriesClass::partially_null: return "partially_null";
    case SeriesClass::partially_divergent: return "partially_divergent";
    case SeriesClass::totally_divergent: return "totally_divergent";
    case SeriesClass::formally_divergent: return "formally_divergent";
  }
  return "convergent";
}

namespace {

// Reduces integer multiples of `index` in the (-1) exponent mod 2.
GammaProduct reduce_sign_power(const GammaProduct& g, const std::string& index) {
  auto it = g.powers().find("-1");
  if (it == g.powers().end()) return g;
  Rational u = it->second.coeff(index);
  if (u == 0 || !is_integer(u)) return g;
  Rational target = mpz_odd_p(u.get_num_mpz_t()) ? Rational(1) : Rational(0);
  return g * GammaProduct::power("-1", AffineForm::symbol(index, target - u));
}

bool rewrite_one(GammaProduct& g, const std::string& index) {
  for (const auto& [L, e] : g.gammas()) {
    Rational a = L.coeff(index);
    if (a == 0 || !is_integer(a)) continue;
    AffineForm rest = L.without(index);
    if (a < 0 && rest.is_constant() && is_integer(rest.constant()) && rest.constant() <= 0) {
      // Γ(αn + c) near its pole: (-1)^{c + αn} / (α δ Γ(1 - c - αn)), with Γ(0) standing for 1/δ.
      GammaProduct rep(1 / a);
      rep.mul_gamma(AffineForm(0), 1);
      rep.mul_power("-1", AffineForm::symbol(index, a) + AffineForm(rest.constant()));
      rep.mul_gamma(AffineForm(1) - L, -1);
      g = g * GammaProduct::gamma(L, -e) * rep.pow(e);
      return true;
    }
    mpz_class K = abs(a.get_num());
    if (K >= 2) {
      long k = K.get_si();
      // Γ(L) = (2π)^{(1-k)/2} k^{L-1/2} Π_j Γ((L + j)/k)
      GammaProduct rep = GammaProduct::rational_power(2, AffineForm(Rational(1 - k, 2)));
      rep.mul_gamma(AffineForm(Rational(1, 2)), static_cast<int>(1 - k));
      rep.mul_rational_power(Rational(k), L - AffineForm(Rational(1, 2)));
      for (long j = 0; j < k; ++j) rep.mul_gamma((L + AffineForm(j)) * Rational(1, k), 1);
      g = g * GammaProduct::gamma(L, -e) * rep.pow(e);
      return true;
    }
  }
  return false;
}

long lcm_long(long a, long b) { return a / std::gcd(a, b) * b; }

Rational growth_of(const GammaProduct& c, const std::string& index) {
  Rational g = -1;
  for (const auto& [L, e] : c.gammas()) g += L.coeff(index) * e;
  return g;
}

}  // namespace

GammaProduct normalize_series_coeff(const GammaProduct& coeff, const std::string& index) {
  GammaProduct g = coeff;
  for (int iter = 0; iter < 64 && rewrite_one(g, index); ++iter) {
  }
  return reduce_sign_power(g, index);
}

int pole_order(const GammaProduct& c, const std::string& index, long n) {
  int order = 0;
  for (const auto& [L, e] : c.gammas()) {
    AffineForm rest = L.without(index);
    if (!rest.is_constant()) continue;
    Rational x = L.coeff(index) * n + rest.constant();
    if (is_integer(x) && x <= 0) order += e;
  }
  return order;
}

PointValue series_term(const GammaProduct& coeff, const std::string& index, long n,
                       const RealPoint& point) {
  RealPoint p = point;
  p[index] = static_cast<long double>(n);
  PointValue v = gp_eval(coeff, p, {{index, Rational(1)}});
  if (v.finite()) {
    long double phi = std::exp(-std::lgamma(static_cast<long double>(n + 1)));
    v.value *= (n % 2 ? -phi : phi);
  }
  return v;
}

Classification classify_series(const SolutionSeries& s) {
  Classification out;
  if (s.freeIndices.empty()) {
    out.tag = SeriesClass::terminating;
    out.witness = "no free index";
    return out;
  }
  if (s.freeIndices.size() > 1) {
    // Per-index analysis is done after collapsing; here only uniform Γ(0) factors matter.
    GammaProduct c = s.coeff;
    for (const auto& f : s.freeIndices) c = normalize_series_coeff(c, f);
    auto it = c.gammas().find(AffineForm(0));
    int z0 = it == c.gammas().end() ? 0 : it->second;
    if (c.is_zero() || z0 < 0) {
      out.tag = SeriesClass::totally_null;
      out.witness = "uncancelled Γ(0) in the denominator";
    } else if (z0 > 0) {
      out.tag = SeriesClass::totally_divergent;
      out.witness = "uncancelled Γ(0) in the numerator";
    } else {
      out.tag = SeriesClass::convergent;
      out.witness = "multi-index series";
    }
    return out;
  }

  const std::string& n = s.freeIndices[0];
  GammaProduct c = normalize_series_coeff(s.coeff, n);
  if (c.is_zero()) {
    out.tag = SeriesClass::totally_null;
    out.witness = "zero coefficient";
    return out;
  }
  out.growth = growth_of(c, n);

  long period = 1;
  long reach = 0;
  for (const auto& [L, e] : c.gammas()) {
    Rational a = L.coeff(n);
    if (a == 0) continue;
    period = lcm_long(period, a.get_den().get_si());
    AffineForm rest = L.without(n);
    if (!rest.is_constant()) continue;
    Rational t = abs(rest.constant() / a);
    reach = std::max(reach, floor_of(t).get_si() + 1);
  }
  period = std::min(period, 64L);
  long window = std::min(reach + 4 * period + 8, 4000L);

  std::vector<int> orders(window);
  for (long k = 0; k < window; ++k) orders[k] = pole_order(c, n, k);
  auto count = [&](auto pred) { return std::count_if(orders.begin(), orders.end(), pred); };
  long poles = count([](int o) { return o > 0; });
  long zeros = count([](int o) { return o < 0; });
  auto first = [&](auto pred) {
    return std::find_if(orders.begin(), orders.end(), pred) - orders.begin();
  };

  if (poles == window) {
    out.tag = SeriesClass::totally_divergent;
    out.witness = "pole at every n";
    return out;
  }
  if (zeros == window) {
    out.tag = SeriesClass::totally_null;
    out.witness = "zero at every n";
    return out;
  }
  if (poles > 0) {
    out.tag = SeriesClass::partially_divergent;
    out.witness = "pole at n=" + std::to_string(first([](int o) { return o > 0; }));
    return out;
  }
  if (zeros > 0) {
    long tailStart = window - 2 * period;
    bool tailZero = std::all_of(orders.begin() + tailStart, orders.end(), [](int o) { return o < 0; });
    if (tailZero) {
      long m = window;
      while (m > 0 && orders[m - 1] < 0) --m;
      out.tag = SeriesClass::terminating;
      out.witness = "zero for n >= " + std::to_string(m);
      return out;
    }
    long lead = first([](int o) { return o >= 0; });
    bool onlyLeading = std::all_of(orders.begin() + lead, orders.end(), [](int o) { return o >= 0; });
    out.tag = SeriesClass::partially_null;
    if (onlyLeading) {
      out.leadingZeros = static_cast<int>(lead);
      out.witness = "zero for n < " + std::to_string(lead);
    } else {
      out.witness = "zero at n=" + std::to_string(first([](int o) { return o < 0; }));
    }
    return out;
  }
  if (out.growth > 0) {
    out.tag = SeriesClass::formally_divergent;
    out.witness = "terms grow like Γ(" + to_string(out.growth) + "·n)";
  } else {
    out.tag = SeriesClass::convergent;
    out.witness = out.growth < 0 ? "entire" : "finite radius";
  }
  return out;
}

SolutionSeries shift_index(const SolutionSeries& s, int k) {
  if (s.freeIndices.size() != 1) throw Error(ErrorKind::DomainError, "shift needs one free index");
  const std::string& n = s.freeIndices[0];
  AffineForm nn = AffineForm::symbol(n);
  SolutionSeries out = s;
  GammaProduct c = s.coeff.substitute({{n, nn + AffineForm(k)}});
  c.mul_constant(k % 2 ? -1 : 1);
  c.mul_gamma(nn + AffineForm(1), 1);
  c.mul_gamma(nn + AffineForm(k + 1), -1);
  out.coeff = normalize_series_coeff(c, n);
  out.argument = argument_of(out.coeff, out.freeIndices);
  out.classification.reset();
  return out;
}

std::map<std::string, AffineForm> argument_of(const GammaProduct& coeff,
                                              const std::vector<std::string>& freeIndices) {
  std::map<std::string, AffineForm> out;
  for (const auto& [base, E] : coeff.powers()) {
    if (is_numeric_base(base)) continue;
    AffineForm part;
    for (const auto& f : freeIndices)
      if (E.coeff(f) != 0) part += AffineForm::symbol(f, E.coeff(f));
    if (!part.is_zero()) out[base] = part;
  }
  return out;
}

}  // namespace brackets
