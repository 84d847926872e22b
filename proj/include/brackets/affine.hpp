#pragma once

#include <map>
#include <ostream>
#include <set>
#include <string>

#include "brackets/rational.hpp"

namespace brackets {

// Assignments used for numeric evaluation.
using RealPoint = std::map<std::string, long double>;
using ExactPoint = std::map<std::string, Rational>;

// c_1*s_1 + ... + c_k*s_k + constant, with no zero coefficients stored.
class AffineForm {
 public:
  AffineForm() = default;
  AffineForm(const Rational& constant);  // NOLINT: implicit on purpose
  AffineForm(long constant) : AffineForm(Rational(constant)) {}  // NOLINT
  static AffineForm symbol(const std::string& name, const Rational& coeff = 1);

  const std::map<std::string, Rational>& coeffs() const { return coeffs_; }
  const Rational& constant() const { return constant_; }
  Rational coeff(const std::string& name) const;

  bool is_constant() const { return coeffs_.empty(); }
  bool is_zero() const { return coeffs_.empty() && constant_ == 0; }
  bool depends_on(const std::string& name) const { return coeffs_.count(name) > 0; }
  std::set<std::string> symbols() const;

  AffineForm& operator+=(const AffineForm& other);
  AffineForm& operator-=(const AffineForm& other);
  AffineForm& operator*=(const Rational& k);
  friend AffineForm operator+(AffineForm a, const AffineForm& b) { return a += b; }
  friend AffineForm operator-(AffineForm a, const AffineForm& b) { return a -= b; }
  friend AffineForm operator*(AffineForm a, const Rational& k) { return a *= k; }
  friend AffineForm operator*(const Rational& k, AffineForm a) { return a *= k; }
  AffineForm operator-() const { return *this * Rational(-1); }

  AffineForm with_constant(const Rational& c) const;
  AffineForm without(const std::string& name) const;
  AffineForm substitute(const std::map<std::string, AffineForm>& values) const;

  long double eval(const RealPoint& point) const;
  // Value when every symbol is assigned exactly; throws MissingAssignment otherwise.
  Rational eval_exact(const ExactPoint& point) const;

  std::string str() const;

  friend bool operator==(const AffineForm& a, const AffineForm& b) {
    return a.constant_ == b.constant_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const AffineForm& a, const AffineForm& b) { return !(a == b); }
  friend bool operator<(const AffineForm& a, const AffineForm& b);

 private:
  std::map<std::string, Rational> coeffs_;
  Rational constant_{0};
};

// Linear expressions over identifiers: "2*n + s - 1/2", "(s - nu)/2", "-n".
AffineForm parse_affine(const std::string& text);

bool is_identifier_start(char c);
bool is_identifier_char(char c);

inline std::ostream& operator<<(std::ostream& os, const AffineForm& f) { return os << f.str(); }

}  // namespace brackets
