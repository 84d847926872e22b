#include <algorithm>
#include <cmath>

#include "brackets/errors.hpp"
#include "brackets/functions.hpp"
#include "brackets/series_eval.hpp"

namespace brackets {

namespace {

const char* kDot = " \xC2\xB7 ";

std::string join(const std::vector<AffineForm>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i].str();
  return out;
}

bool nonpositive_integer(const AffineForm& a) {
  return a.is_constant() && is_integer(a.constant()) && a.constant() <= 0;
}

long double eval_z(const GammaProduct& z, const RealPoint& point) {
  PointValue v = gp_eval(z, point);
  if (!v.finite()) throw Error(ErrorKind::DomainError, "argument " + z.str() + " is singular");
  return v.value;
}

long double eval_coeff(const GammaProduct& c, const RealPoint& point) {
  PointValue v = gp_eval(c, point);
  if (v.kind == PointValue::Kind::Zero) return 0;
  if (v.kind == PointValue::Kind::Pole)
    throw Error(ErrorKind::DomainError, "coefficient " + c.str() + " has a pole at the point");
  return v.value;
}

long double atan_ratio(long double z) {
  if (z == 0) return 1;
  if (z < 0) {
    long double r = std::sqrt(-z);
    return std::atan(r) / r;
  }
  if (z >= 1) throw Error(ErrorKind::OutsideRegion, "atan form needs z < 1");
  long double r = std::sqrt(z);
  return std::atanh(r) / r;
}

long double asin_ratio(long double z) {
  if (z == 0) return 1;
  if (z >= 1) throw Error(ErrorKind::OutsideRegion, "asin form needs z < 1");
  if (z < 0) {
    long double r = std::sqrt(-z);
    return std::asinh(r) / (r * std::sqrt(1 - z));
  }
  long double r = std::sqrt(z);
  return std::asin(r) / (r * std::sqrt(1 - z));
}

long double log_ratio(long double z) {
  if (z == 0) return 1;
  if (z >= 1) throw Error(ErrorKind::OutsideRegion, "log form needs z < 1");
  return -std::log1p(-z) / z;
}

long double pow1m(long double z, long double e) {
  long double b = 1 - z;
  if (b > 0) return std::pow(b, e);
  if (b == 0) {
    if (e > 0) return 0;
    if (e == 0) return 1;
    throw Error(ErrorKind::OutsideRegion, "(1 - z)^e diverges at z = 1");
  }
  long double r = std::nearbyint(e);
  if (std::fabs(e - r) > 1e-12L)
    throw Error(ErrorKind::DomainError, "(1 - z)^e with 1 - z < 0 and non-integer e");
  return std::pow(b, r);
}

// The table entries: (upper multiset, lower) -> kind.
bool table_kind(std::vector<AffineForm> up, const std::vector<AffineForm>& low,
                ClosedFormTerm::Kind& kind) {
  if (up.size() != 2 || low.size() != 1) return false;
  for (const auto& a : up)
    if (!a.is_constant()) return false;
  if (!low[0].is_constant()) return false;
  std::sort(up.begin(), up.end());
  Rational a = up[0].constant(), b = up[1].constant(), c = low[0].constant();
  if (a == Rational(1, 2) && b == 1 && c == Rational(3, 2)) {
    kind = ClosedFormTerm::Kind::AtanRatio;
    return true;
  }
  if (a == 1 && b == 1 && c == Rational(3, 2)) {
    kind = ClosedFormTerm::Kind::AsinRatio;
    return true;
  }
  if (a == 1 && b == 1 && c == 2) {
    kind = ClosedFormTerm::Kind::LogRatio;
    return true;
  }
  return false;
}

GammaProduct pochhammer_product(const std::vector<AffineForm>& params, long k) {
  GammaProduct g;
  for (const auto& a : params) g = g * pochhammer_expand(a, AffineForm(k));
  return g;
}

}  // namespace

std::string HyperForm::str() const {
  std::string out = prefactor.str() + kDot;
  out += std::to_string(upper.size()) + "F" + std::to_string(lower.size());
  out += "(" + join(upper) + "; " + join(lower) + "; " + argument.str() + ")";
  return out;
}

std::string ClosedFormTerm::str() const {
  std::string zs = "[" + z.str() + "]";
  std::string head = coeff.str();
  std::string arg = zs;
  if (pfaff) {
    head += kDot + std::string("(1 - ") + zs + ")^(" + pfaffExponent.str() + ")";
    arg = zs + "/(" + zs + " - 1)";
  }
  switch (kind) {
    case Kind::Product: return head;
    case Kind::Pow1m: return head + kDot + "(1 - " + zs + ")^(" + exponent.str() + ")";
    case Kind::Exp: return head + kDot + "exp(" + zs + ")";
    case Kind::AtanRatio: return head + kDot + "atan_ratio(" + arg + ")";
    case Kind::AsinRatio: return head + kDot + "asin_ratio(" + arg + ")";
    case Kind::LogRatio: return head + kDot + "log_ratio(" + arg + ")";
    case Kind::Hyper: return head + kDot + hyper.str();
    case Kind::Function: {
      std::string p = join(functionParams);
      return head + kDot + function + "(" + (p.empty() ? "" : p + "; ") + zs + ")";
    }
  }
  return head;
}

bool ClosedForm::reduced() const {
  return std::none_of(terms.begin(), terms.end(),
                      [](const ClosedFormTerm& t) { return t.kind == ClosedFormTerm::Kind::Hyper; });
}

std::string ClosedForm::str() const {
  if (terms.empty()) return "0";
  std::string out;
  for (size_t i = 0; i < terms.size(); ++i) out += (i ? " + " : "") + terms[i].str();
  return out;
}

std::string SolutionSeries::str() const {
  std::string out = label.empty() ? "" : label + ": ";
  if (!freeIndices.empty()) {
    out += "\xCE\xA3 \xCF\x86_{";
    for (size_t i = 0; i < freeIndices.size(); ++i) out += (i ? "," : "") + freeIndices[i];
    out += "} ";
  }
  out += coeff.str();
  if (classification) out += "  [" + std::string(series_class_name(classification->tag)) + "]";
  return out;
}

HyperForm to_hyper(const SolutionSeries& s) {
  if (s.freeIndices.size() != 1)
    throw Error(ErrorKind::NotHypergeometric, "hypergeometric form needs exactly one free index");
  const std::string& n = s.freeIndices[0];
  GammaProduct c = normalize_series_coeff(s.coeff, n);
  HyperForm h;
  h.prefactor = GammaProduct(c.constant());
  h.argument = GammaProduct(Rational(-1));  // from φ_n

  for (const auto& [L, e] : c.gammas()) {
    Rational a = L.coeff(n);
    AffineForm c0 = L.without(n);
    if (a == 0) {
      h.prefactor.mul_gamma(L, e);
    } else if (a == 1) {
      if (nonpositive_integer(c0))
        throw Error(ErrorKind::NotHypergeometric, "Γ(" + L.str() + ") is singular at n = 0");
      h.prefactor.mul_gamma(c0, e);
      for (int i = 0; i < std::abs(e); ++i) (e > 0 ? h.upper : h.lower).push_back(c0);
    } else if (a == -1) {
      // Γ(c0 - n) = Γ(c0) (-1)^n / (1 - c0)_n
      if (nonpositive_integer(c0))
        throw Error(ErrorKind::NotHypergeometric, "Γ(" + L.str() + ") is singular at n = 0");
      h.prefactor.mul_gamma(c0, e);
      if (e % 2) h.argument.mul_constant(-1);
      AffineForm p = AffineForm(1) - c0;
      for (int i = 0; i < std::abs(e); ++i) (e > 0 ? h.lower : h.upper).push_back(p);
    } else {
      throw Error(ErrorKind::NotHypergeometric,
                  "Γ(" + L.str() + ") has index coefficient " + to_string(a));
    }
  }
  for (const auto& [base, E] : c.powers()) {
    Rational u = E.coeff(n);
    AffineForm rest = E.without(n);
    if (!rest.is_zero()) h.prefactor.mul_power(base, rest);
    if (u != 0) h.argument.mul_power(base, AffineForm(u));
  }

  // Cancel parameters that appear both above and below.
  for (auto it = h.upper.begin(); it != h.upper.end();) {
    auto jt = std::find(h.lower.begin(), h.lower.end(), *it);
    if (jt != h.lower.end()) {
      h.lower.erase(jt);
      it = h.upper.erase(it);
    } else {
      ++it;
    }
  }
  std::sort(h.upper.begin(), h.upper.end());
  std::sort(h.lower.begin(), h.lower.end());
  return h;
}

ClosedForm closed_form(const HyperForm& h) {
  using Kind = ClosedFormTerm::Kind;
  ClosedForm cf;
  auto term = [&](Kind kind) {
    ClosedFormTerm t;
    t.kind = kind;
    t.coeff = h.prefactor;
    t.z = h.argument;
    return t;
  };

  // Terminating: a nonpositive integer upper parameter.
  long terminate = -1;
  for (const auto& a : h.upper)
    if (nonpositive_integer(a)) {
      long m = -to_long(a.constant());
      terminate = terminate < 0 ? m : std::min(terminate, m);
    }
  if (terminate >= 0) {
    for (long k = 0; k <= terminate; ++k) {
      ClosedFormTerm t = term(Kind::Product);
      t.coeff = h.prefactor * pochhammer_product(h.upper, k) * pochhammer_product(h.lower, k).inverse() *
                h.argument.pow(static_cast<int>(k));
      t.coeff.mul_constant(1 / factorial(static_cast<unsigned long>(k)));
      t.z = GammaProduct();
      if (!t.coeff.is_zero()) cf.terms.push_back(t);
    }
    return cf;
  }

  size_t p = h.upper.size(), q = h.lower.size();
  bool unitArgument = h.argument == GammaProduct();

  if (p == 2 && q == 1 && unitArgument) {
    const AffineForm &a = h.upper[0], &b = h.upper[1], &c = h.lower[0];
    ClosedFormTerm t = term(Kind::Product);
    t.coeff = h.prefactor * GammaProduct::gamma(c) * GammaProduct::gamma(c - a - b) *
              GammaProduct::gamma(c - a, -1) * GammaProduct::gamma(c - b, -1);
    t.z = GammaProduct();
    cf.terms.push_back(t);
    return cf;
  }

  if (p == 1 && q == 0) {
    const AffineForm& a = h.upper[0];
    if (h.argument.is_rational()) {
      Rational base = 1 - h.argument.constant();
      if (base > 0) {
        ClosedFormTerm t = term(Kind::Product);
        t.coeff = h.prefactor * GammaProduct::rational_power(base, -a);
        t.z = GammaProduct();
        cf.terms.push_back(t);
        return cf;
      }
      if (base == 0 && a.is_constant()) {
        if (a.constant() < 0) return cf;  // (1 - 1)^{-a} = 0
        throw Error(ErrorKind::OutsideRegion, "1F0(" + a.str() + "; 1) diverges");
      }
    }
    ClosedFormTerm t = term(Kind::Pow1m);
    t.exponent = -a;
    cf.terms.push_back(t);
    return cf;
  }

  if (p == 0 && q == 0) {
    cf.terms.push_back(term(Kind::Exp));
    return cf;
  }

  if (p == 2 && q == 1) {
    Kind kind;
    if (table_kind(h.upper, h.lower, kind)) {
      cf.terms.push_back(term(kind));
      return cf;
    }
    // Pfaff: 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)).
    for (int swap = 0; swap < 2; ++swap) {
      const AffineForm& a = h.upper[swap];
      const AffineForm& b = h.upper[1 - swap];
      const AffineForm& c = h.lower[0];
      if (table_kind({a, c - b}, {c}, kind)) {
        ClosedFormTerm t = term(kind);
        t.pfaff = true;
        t.pfaffExponent = -a;
        cf.terms.push_back(t);
        return cf;
      }
    }
  }

  ClosedFormTerm t = term(Kind::Hyper);
  t.hyper = h;
  t.hyper.prefactor = GammaProduct();
  cf.terms.push_back(t);
  return cf;
}

long double numeric_sum(const HyperForm& h, const RealPoint& point) {
  std::vector<long double> a, b;
  bool terminating = false;
  for (const auto& u : h.upper) {
    a.push_back(u.eval(point));
    if (nonpositive_integer(u)) terminating = true;
  }
  for (const auto& l : h.lower) {
    b.push_back(l.eval(point));
    long double r = std::nearbyint(b.back());
    if (r <= 0 && std::fabs(b.back() - r) < 1e-14L)
      throw Error(ErrorKind::DomainError, "lower parameter " + l.str() + " is a nonpositive integer");
  }
  long double z = eval_z(h.argument, point);
  long double pre = eval_coeff(h.prefactor, point);
  size_t p = a.size(), q = b.size();
  if (!terminating) {
    if (p > q + 1 && z != 0)
      throw Error(ErrorKind::OutsideRegion, "formally divergent series has no sum");
    if (p == q + 1 && std::fabs(z) >= 1)
      throw Error(ErrorKind::OutsideRegion, "|z| >= 1 for a " + std::to_string(p) + "F" +
                                                std::to_string(q) + " series");
  }

  long double t = 1, sum = 1, comp = 0;
  int quiet = 0;
  for (long n = 0; n < 1000000; ++n) {
    long double ratio = z / (n + 1);
    for (long double x : a) ratio *= x + n;
    for (long double x : b) ratio /= x + n;
    t *= ratio;
    if (t == 0) return pre * (sum + comp);
    long double y = t - comp;
    long double s2 = sum + y;
    comp = (s2 - sum) - y;
    sum = s2;
    if (std::fabs(t) <= 1e-19L * std::fabs(sum) || std::fabs(t) < 1e-300L) {
      if (++quiet >= 3) return pre * sum;
    } else {
      quiet = 0;
    }
  }
  throw Error(ErrorKind::NonConverged, "no convergence after 10^6 terms");
}

AsymptoticValue asymptotic_truncate(const HyperForm& h, const RealPoint& point, int maxTerms) {
  std::vector<long double> a, b;
  for (const auto& u : h.upper) a.push_back(u.eval(point));
  for (const auto& l : h.lower) b.push_back(l.eval(point));
  long double z = eval_z(h.argument, point);
  long double pre = eval_coeff(h.prefactor, point);

  AsymptoticValue out;
  long double t = 1, sum = 0;
  for (int n = 0; n < maxTerms; ++n) {
    long double ratio = z / (n + 1);
    for (long double x : a) ratio *= x + n;
    for (long double x : b) ratio /= x + n;
    long double next = t * ratio;
    sum += t;
    out.terms = n + 1;
    if (next == 0) {
      out.value = pre * sum;
      out.errorBound = 0;
      return out;
    }
    if (std::fabs(next) >= std::fabs(t)) {
      if (n == 0) throw Error(ErrorKind::NoDescent, "first term already grows");
      out.value = pre * sum;
      out.errorBound = std::fabs(pre * next);
      return out;
    }
    t = next;
  }
  out.value = pre * sum;
  out.errorBound = std::fabs(pre * t);
  return out;
}

LimitValue epsilon_limit(const std::function<long double(long double)>& family) {
  constexpr int kNodes = 7;
  LimitValue out;
  std::vector<long double> eps(kNodes);
  for (int k = 0; k < kNodes; ++k) {
    eps[k] = 1e-2L * std::ldexp(1.0L, -k);
    out.samples.push_back(family(eps[k]));
  }
  long double first = std::fabs(out.samples[1] - out.samples[0]);
  long double last = std::fabs(out.samples[kNodes - 1] - out.samples[kNodes - 2]);
  if (last > first && last > 1e-12L * std::fabs(out.samples.back()))
    throw Error(ErrorKind::GrowthDetected, "V(ε) is not settling as ε → 0");

  auto neville = [&](int m) {
    std::vector<long double> p(out.samples.begin(), out.samples.begin() + m);
    for (int level = 1; level < m; ++level)
      for (int i = 0; i < m - level; ++i)
        p[i] = (eps[i + level] * p[i] - eps[i] * p[i + 1]) / (eps[i + level] - eps[i]);
    return p[0];
  };
  out.value = neville(kNodes);
  out.residual = std::fabs(out.value - neville(kNodes - 1));
  return out;
}

long double evaluate_closed_form(const ClosedForm& cf, const RealPoint& point) {
  using Kind = ClosedFormTerm::Kind;
  long double total = 0;
  for (const auto& t : cf.terms) {
    long double c = eval_coeff(t.coeff, point);
    if (t.kind == Kind::Product) {
      total += c;
      continue;
    }
    long double z = eval_z(t.z, point);
    long double w = z, pre = 1;
    if (t.pfaff) {
      if (z >= 1) throw Error(ErrorKind::OutsideRegion, "Pfaff transform needs z < 1");
      w = z / (z - 1);
      pre = std::pow(1 - z, t.pfaffExponent.eval(point));
    }
    long double v = 0;
    switch (t.kind) {
      case Kind::Pow1m: v = pow1m(z, t.exponent.eval(point)); break;
      case Kind::Exp: v = std::exp(z); break;
      case Kind::AtanRatio: v = atan_ratio(w); break;
      case Kind::AsinRatio: v = asin_ratio(w); break;
      case Kind::LogRatio: v = log_ratio(w); break;
      case Kind::Hyper: v = numeric_sum(t.hyper, point); break;
      case Kind::Function: {
        std::vector<long double> params;
        for (const auto& p : t.functionParams) params.push_back(p.eval(point));
        v = eval_function(t.function, params, z);
        break;
      }
      case Kind::Product: break;
    }
    total += c * pre * v;
  }
  return total;
}

std::optional<Rational> exact_closed_form(const ClosedForm& cf, const ExactPoint& point) {
  Rational total = 0;
  for (const auto& t : cf.terms) {
    GammaProduct g = t.coeff;
    if (t.kind == ClosedFormTerm::Kind::Pow1m && !t.pfaff) {
      auto z = gp_exact(t.z, point);
      if (!z) return std::nullopt;
      Rational e = t.exponent.eval_exact(point);
      Rational base = 1 - *z;
      if (base == 0) {
        if (e > 0) continue;
        return std::nullopt;
      }
      g = g * GammaProduct::rational_power(base, AffineForm(e));
    } else if (t.kind != ClosedFormTerm::Kind::Product) {
      return std::nullopt;
    }
    auto v = gp_exact(g, point);
    if (!v) return std::nullopt;
    total += *v;
  }
  return total;
}

ClosedForm substitute(const ClosedForm& cf, const std::map<std::string, AffineForm>& values) {
  ClosedForm out = cf;
  for (auto& t : out.terms) {
    t.coeff = t.coeff.substitute(values);
    t.z = t.z.substitute(values);
    t.exponent = t.exponent.substitute(values);
    t.pfaffExponent = t.pfaffExponent.substitute(values);
    for (auto& a : t.hyper.upper) a = a.substitute(values);
    for (auto& a : t.hyper.lower) a = a.substitute(values);
    t.hyper.argument = t.hyper.argument.substitute(values);
    t.hyper.prefactor = t.hyper.prefactor.substitute(values);
    for (auto& p : t.functionParams) p = p.substitute(values);
  }
  return out;
}

}  // namespace brackets
