#include "brackets/gamma_product.hpp"

#include <cmath>
#include <vector>

#include "brackets/errors.hpp"

namespace brackets {

namespace {

const char* kDot = " \xC2\xB7 ";  // " · "
const char* kGamma = "\xCE\x93";  // "Γ"

// Prime factorization by trial division; a cofactor that survives up to 10^6 is kept whole.
std::map<std::string, long> factor_integer(mpz_class n) {
  std::map<std::string, long> out;
  if (n < 0) n = -n;
  for (unsigned long p = 2; p <= 1000000 && n > 1; p += (p == 2 ? 1 : 2)) {
    if (mpz_class(p) * p > n) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      out[std::to_string(p)] += 1;
    }
  }
  if (n > 1) out[n.get_str()] += 1;
  return out;
}

int sign_of(int e) { return e > 0 ? 1 : -1; }

}  // namespace

bool is_numeric_base(const std::string& base) {
  return !base.empty() && (std::isdigit(static_cast<unsigned char>(base[0])) || base[0] == '-');
}

GammaProduct::GammaProduct(const Rational& constant) : constant_(reduced(constant)) { canonicalize(); }

GammaProduct GammaProduct::gamma(const AffineForm& arg, int exponent) {
  GammaProduct g;
  g.mul_gamma(arg, exponent);
  return g;
}

GammaProduct GammaProduct::power(const std::string& base, const AffineForm& exponent) {
  GammaProduct g;
  g.mul_power(base, exponent);
  return g;
}

GammaProduct GammaProduct::rational_power(const Rational& base, const AffineForm& exponent) {
  GammaProduct g;
  g.mul_rational_power(base, exponent);
  return g;
}

std::set<std::string> GammaProduct::symbols() const {
  std::set<std::string> out;
  for (const auto& [L, e] : gammas_)
    for (const auto& s : L.symbols()) out.insert(s);
  for (const auto& [b, E] : powers_) {
    if (!is_numeric_base(b)) out.insert(b);
    for (const auto& s : E.symbols()) out.insert(s);
  }
  return out;
}

bool GammaProduct::depends_on(const std::string& symbol) const {
  return symbols().count(symbol) > 0;
}

GammaProduct& GammaProduct::mul_constant(const Rational& c) {
  constant_ *= reduced(c);
  canonicalize();
  return *this;
}

GammaProduct& GammaProduct::mul_gamma(const AffineForm& arg, int exponent) {
  if (exponent == 0) return *this;
  gammas_[arg] += exponent;
  canonicalize();
  return *this;
}

GammaProduct& GammaProduct::mul_power(const std::string& base, const AffineForm& exponent) {
  if (exponent.is_zero()) return *this;
  if (is_numeric_base(base) && base != "-1") return mul_rational_power(parse_rational(base), exponent);
  powers_[base] += exponent;
  canonicalize();
  return *this;
}

GammaProduct& GammaProduct::mul_rational_power(const Rational& value, const AffineForm& exponent) {
  Rational base = reduced(value);
  if (base == 0) throw Error(ErrorKind::DomainError, "zero base in a power");
  if (exponent.is_zero()) return *this;
  if (base < 0) powers_["-1"] += exponent;
  for (const auto& [p, k] : factor_integer(base.get_num())) powers_[p] += exponent * Rational(k);
  for (const auto& [p, k] : factor_integer(base.get_den())) powers_[p] += exponent * Rational(-k);
  canonicalize();
  return *this;
}

void GammaProduct::fold_constant_gammas() {
  std::map<AffineForm, int> kept;
  for (const auto& [L, e] : gammas_) {
    if (e == 0) continue;
    if (!L.is_constant()) {
      kept[L] += e;
      continue;
    }
    const Rational& q = L.constant();
    if (is_integer(q)) {
      long n = to_long(q);
      if (n >= 1) {
        constant_ *= rpow(factorial(static_cast<unsigned long>(n - 1)), e);
      } else {
        // Γ(-m) = Γ(0) (-1)^m / m! under argument perturbation.
        long m = -n;
        Rational r = factorial(static_cast<unsigned long>(m));
        if (m % 2) r = -r;
        constant_ *= rpow(r, -e);
        kept[AffineForm(0)] += e;
      }
      continue;
    }
    mpz_class f = floor_of(q);
    Rational q0 = q - Rational(f);
    Rational ratio = 1;
    long fl = f.get_si();
    if (fl > 0)
      for (long j = 0; j < fl; ++j) ratio *= q0 + j;
    else
      for (long j = fl; j < 0; ++j) ratio /= q0 + j;
    constant_ *= rpow(ratio, e);
    kept[AffineForm(q0)] += e;
  }
  gammas_.clear();
  for (const auto& [L, e] : kept)
    if (e != 0) gammas_[L] = e;
}

bool GammaProduct::apply_reflection_once() {
  for (const auto& [M, e1] : gammas_) {
    if (M.is_constant()) continue;
    AffineForm Mc = AffineForm(1) - M;
    auto it2 = gammas_.find(Mc);
    if (it2 == gammas_.end() || sign_of(it2->second) != sign_of(e1)) continue;
    int s = sign_of(e1);
    for (const auto& [L, e3] : gammas_) {
      if (sign_of(e3) == s) continue;
      AffineForm result;
      Rational k;
      AffineForm d = L - M;
      if (d.is_constant() && is_integer(d.constant()) && d.constant() != 0) {
        k = d.constant();
        result = AffineForm(1) - M - AffineForm(k);
      } else {
        d = L - Mc;
        if (!(d.is_constant() && is_integer(d.constant()) && d.constant() != 0)) continue;
        k = d.constant();
        result = M - AffineForm(k);
      }
      AffineForm m = M, mc = Mc, l = L;
      gammas_[m] -= s;
      gammas_[mc] -= s;
      gammas_[l] += s;
      gammas_[result] += s;
      if (to_long(k) % 2 != 0) constant_ = -constant_;
      for (auto it = gammas_.begin(); it != gammas_.end();)
        it = it->second == 0 ? gammas_.erase(it) : std::next(it);
      return true;
    }
  }
  return false;
}

void GammaProduct::normalize_powers() {
  for (auto it = powers_.begin(); it != powers_.end();) {
    const std::string& base = it->first;
    AffineForm& E = it->second;
    if (base == "-1") {
      Rational c = E.constant();
      if (is_integer(c)) {
        if (mpz_odd_p(c.get_num_mpz_t())) constant_ = -constant_;
        E = E.with_constant(0);
      } else {
        Rational half = c / 2;
        E = E.with_constant(c - 2 * Rational(floor_of(half)));
      }
    } else if (is_numeric_base(base)) {
      mpz_class f = floor_of(E.constant());
      if (f != 0) {
        constant_ *= rpow(parse_rational(base), f.get_si());
        E = E.with_constant(E.constant() - Rational(f));
      }
    }
    it = E.is_zero() ? powers_.erase(it) : std::next(it);
  }
}

void GammaProduct::canonicalize() {
  if (constant_ == 0) {
    gammas_.clear();
    powers_.clear();
    return;
  }
  fold_constant_gammas();
  while (apply_reflection_once()) {
  }
  normalize_powers();
}

GammaProduct operator*(const GammaProduct& a, const GammaProduct& b) {
  GammaProduct out = a;
  out.constant_ *= b.constant_;
  for (const auto& [L, e] : b.gammas_) out.gammas_[L] += e;
  for (const auto& [base, E] : b.powers_) out.powers_[base] += E;
  out.canonicalize();
  return out;
}

GammaProduct gp_mul(const GammaProduct& a, const GammaProduct& b) { return a * b; }

bool operator<(const GammaProduct& a, const GammaProduct& b) {
  if (a.constant_ != b.constant_) return a.constant_ < b.constant_;
  if (a.gammas_ != b.gammas_) return a.gammas_ < b.gammas_;
  return a.powers_ < b.powers_;
}

GammaProduct GammaProduct::substitute(const std::map<std::string, AffineForm>& values) const {
  GammaProduct out(constant_);
  for (const auto& [L, e] : gammas_) out.gammas_[L.substitute(values)] += e;
  for (const auto& [base, E] : powers_) {
    AffineForm E2 = E.substitute(values);
    auto it = values.find(base);
    if (it == values.end() || is_numeric_base(base)) {
      out.powers_[base] += E2;
      continue;
    }
    const AffineForm& v = it->second;
    if (v.is_constant()) {
      if (v.constant() == 0) {
        if (E2.is_constant() && E2.constant() > 0) return GammaProduct(Rational(0));
        throw Error(ErrorKind::DomainError, "zero base '" + base + "' with exponent " + E2.str());
      }
      out.canonicalize();
      out.mul_rational_power(v.constant(), E2);
    } else if (v.coeffs().size() == 1 && v.constant() == 0 && v.coeffs().begin()->second == 1) {
      out.powers_[v.coeffs().begin()->first] += E2;
    } else {
      throw Error(ErrorKind::DomainError, "cannot substitute '" + v.str() + "' for power base '" + base + "'");
    }
  }
  out.canonicalize();
  return out;
}

GammaProduct GammaProduct::substitute_base(const std::string& base, const GammaProduct& value) const {
  auto it = powers_.find(base);
  if (it == powers_.end()) return *this;
  if (!value.gammas_.empty())
    throw Error(ErrorKind::DomainError, "base value must be a monomial, got " + value.str());
  AffineForm E = it->second;
  GammaProduct out = *this;
  out.powers_.erase(base);
  out.mul_rational_power(value.constant_, E);
  for (const auto& [b, F] : value.powers_) {
    if (F.is_constant())
      out.powers_[b] += E * F.constant();
    else if (E.is_constant())
      out.powers_[b] += F * E.constant();
    else
      throw Error(ErrorKind::DomainError, "non-linear exponent after substituting '" + base + "'");
  }
  out.canonicalize();
  return out;
}

GammaProduct GammaProduct::inverse() const {
  if (is_zero()) throw Error(ErrorKind::DomainError, "inverse of zero");
  GammaProduct out;
  out.constant_ = 1 / constant_;
  for (const auto& [L, e] : gammas_) out.gammas_[L] = -e;
  for (const auto& [b, E] : powers_) out.powers_[b] = -E;
  out.canonicalize();
  return out;
}

GammaProduct GammaProduct::pow(int k) const {
  if (k == 0) return GammaProduct();
  if (is_zero()) {
    if (k < 0) throw Error(ErrorKind::DomainError, "zero to a negative power");
    return *this;
  }
  GammaProduct out;
  out.constant_ = rpow(constant_, k);
  for (const auto& [L, e] : gammas_) out.gammas_[L] = e * k;
  for (const auto& [b, E] : powers_) out.powers_[b] = E * Rational(k);
  out.canonicalize();
  return out;
}

std::string GammaProduct::str() const {
  std::string out = to_string(constant_);
  for (const auto& [L, e] : gammas_) {
    out += kDot;
    out += std::string(kGamma) + "(" + L.str() + ")";
    if (e != 1) out += "^" + std::to_string(e);
  }
  for (const auto& [b, E] : powers_) {
    out += kDot;
    out += (b == "-1" ? std::string("(-1)") : b) + "^(" + E.str() + ")";
  }
  return out;
}

PointValue gp_eval(const GammaProduct& g, const RealPoint& point,
                   const std::map<std::string, Rational>& direction) {
  if (g.is_zero()) return {PointValue::Kind::Finite, 0.0L};
  long double logmag = 0;
  int sign = g.constant() < 0 ? -1 : 1;
  int order = 0;
  logmag += std::log(std::fabs(to_long_double(g.constant())));

  for (const auto& [L, e] : g.gammas()) {
    long double x = L.eval(point);
    long double r = std::nearbyint(x);
    if (r <= 0 && std::fabs(x - r) <= 1e-13L * (1 + std::fabs(x))) {
      long k = static_cast<long>(-r);
      Rational alpha = 0;
      for (const auto& [s, c] : L.coeffs()) {
        auto it = direction.find(s);
        if (it != direction.end()) alpha += c * it->second;
      }
      if (alpha == 0) alpha = 1;
      order += e;
      long double part = -std::lgamma(static_cast<long double>(k + 1)) -
                         std::log(std::fabs(to_long_double(alpha)));
      int part_sign = ((k % 2) ? -1 : 1) * (alpha < 0 ? -1 : 1);
      logmag += e * part;
      if (part_sign < 0 && (e % 2 != 0)) sign = -sign;
    } else {
      int sg = 1;
      long double lg = lgammal_r(x, &sg);
      logmag += e * lg;
      if (sg < 0 && (e % 2 != 0)) sign = -sign;
    }
  }

  for (const auto& [base, E] : g.powers()) {
    long double ev = E.eval(point);
    if (base == "-1") {
      long double r = std::nearbyint(ev);
      if (std::fabs(ev - r) > 1e-9L)
        throw Error(ErrorKind::DomainError, "(-1)^" + E.str() + " is not real");
      if (std::fmod(std::fabs(r), 2.0L) == 1.0L) sign = -sign;
      continue;
    }
    long double b;
    if (is_numeric_base(base)) {
      b = std::strtold(base.c_str(), nullptr);
    } else {
      auto it = point.find(base);
      if (it == point.end()) throw Error(ErrorKind::MissingAssignment, "symbol '" + base + "'");
      b = it->second;
    }
    if (b > 0) {
      logmag += ev * std::log(b);
    } else if (b == 0) {
      if (ev > 0) order -= 1;
      if (ev < 0) order += 1;
    } else {
      long double r = std::nearbyint(ev);
      if (std::fabs(ev - r) > 1e-9L)
        throw Error(ErrorKind::DomainError, "negative base '" + base + "' to a non-integer power");
      logmag += ev * std::log(-b);
      if (std::fmod(std::fabs(r), 2.0L) == 1.0L) sign = -sign;
    }
  }

  if (order > 0) return {PointValue::Kind::Pole, 0.0L};
  if (order < 0) return {PointValue::Kind::Zero, 0.0L};
  return {PointValue::Kind::Finite, sign * std::exp(logmag)};
}

std::optional<Rational> gp_exact(const GammaProduct& g, const ExactPoint& point) {
  std::map<std::string, AffineForm> values;
  for (const auto& s : g.symbols()) {
    auto it = point.find(s);
    if (it == point.end()) throw Error(ErrorKind::MissingAssignment, "symbol '" + s + "'");
    values[s] = AffineForm(it->second);
  }
  GammaProduct c = g.substitute(values);
  if (c.is_rational()) return c.constant();
  return std::nullopt;
}

GammaProduct pochhammer_expand(const AffineForm& a, const AffineForm& k) {
  if (k.is_constant() && is_integer(k.constant()) && k.constant() < 0) {
    Rational m = -k.constant();
    GammaProduct g(is_integer(m / 2) ? Rational(1) : Rational(-1));
    g.mul_gamma(AffineForm(1) - a, 1);
    g.mul_gamma(AffineForm(1) - a + AffineForm(m), -1);
    return g;
  }
  GammaProduct g;
  g.mul_gamma(a + k, 1);
  g.mul_gamma(a, -1);
  return g;
}

Rewrite pochhammer_duplicate(const AffineForm& a, const std::string& n) {
  AffineForm nn = AffineForm::symbol(n);
  Rewrite r;
  r.lhs = pochhammer_expand(a, nn * Rational(2));
  r.rhs = GammaProduct::rational_power(2, nn * Rational(2)) *
          pochhammer_expand(a * Rational(1, 2), nn) *
          pochhammer_expand((a + AffineForm(1)) * Rational(1, 2), nn);
  return r;
}

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  size_t e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

// Text inside the parenthesis group that opens at `open`; `close` receives its end.
std::string group(const std::string& s, size_t open, size_t& close) {
  int depth = 0;
  for (size_t i = open; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')' && --depth == 0) {
      close = i;
      return s.substr(open + 1, i - open - 1);
    }
  }
  throw Error(ErrorKind::ParseError, "unbalanced parentheses in '" + s + "'");
}

}  // namespace

GammaProduct parse_gamma_product(const std::string& text) {
  std::vector<std::string> pieces;
  const std::string dot = "\xC2\xB7";
  size_t start = 0;
  while (true) {
    size_t p = text.find(dot, start);
    pieces.push_back(trim(text.substr(start, p == std::string::npos ? std::string::npos : p - start)));
    if (p == std::string::npos) break;
    start = p + dot.size();
  }
  GammaProduct g;
  const std::string gam = kGamma;
  for (const auto& piece : pieces) {
    if (piece.empty()) throw Error(ErrorKind::ParseError, "empty factor in '" + text + "'");
    if (piece.compare(0, gam.size(), gam) == 0) {
      size_t close = 0;
      AffineForm arg = parse_affine(group(piece, gam.size(), close));
      int e = 1;
      std::string rest = trim(piece.substr(close + 1));
      if (!rest.empty()) {
        if (rest[0] != '^') throw Error(ErrorKind::ParseError, "bad gamma factor '" + piece + "'");
        e = std::stoi(rest.substr(1));
      }
      g.mul_gamma(arg, e);
      continue;
    }
    size_t caret = piece.find("^(");
    if (caret != std::string::npos) {
      std::string base = trim(piece.substr(0, caret));
      if (base == "(-1)") base = "-1";
      size_t close = 0;
      AffineForm E = parse_affine(group(piece, caret + 1, close));
      if (is_numeric_base(base) && base != "-1")
        g.mul_rational_power(parse_rational(base), E);
      else
        g.mul_power(base, E);
      continue;
    }
    g.mul_constant(parse_rational(piece));
  }
  return g;
}

}  // namespace brackets
