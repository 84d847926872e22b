#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>

#include "brackets/affine.hpp"
#include "brackets/rational.hpp"

namespace brackets {

// constant × Π Γ(L_i)^e_i × Π base^(E_j).
//
// Power bases are parameter symbols, prime numbers written in decimal, or "-1".
// Canonical form:
//   - constant Γ arguments are shifted into (0,1) or folded to Γ(0), Γ(1) = 1;
//   - numeric bases are split into primes; the integer part of a prime's exponent
//     constant moves into the rational constant;
//   - Γ(M)Γ(1-M)/Γ(M+k) collapses to (-1)^k Γ(1-M-k) for integer k;
//   - π appears only as Γ(1/2)^2.
class GammaProduct {
 public:
  GammaProduct() = default;
  explicit GammaProduct(const Rational& constant);

  static GammaProduct gamma(const AffineForm& arg, int exponent = 1);
  static GammaProduct power(const std::string& base, const AffineForm& exponent);
  static GammaProduct rational_power(const Rational& base, const AffineForm& exponent);
  static GammaProduct pi() { return gamma(Rational(1, 2), 2); }

  const Rational& constant() const { return constant_; }
  const std::map<AffineForm, int>& gammas() const { return gammas_; }
  const std::map<std::string, AffineForm>& powers() const { return powers_; }

  bool is_zero() const { return constant_ == 0; }
  bool is_rational() const { return gammas_.empty() && powers_.empty(); }
  std::set<std::string> symbols() const;
  bool depends_on(const std::string& symbol) const;

  GammaProduct substitute(const std::map<std::string, AffineForm>& values) const;
  // Replaces base^E by value^E; value must be a constant times powers.
  GammaProduct substitute_base(const std::string& base, const GammaProduct& value) const;
  GammaProduct inverse() const;
  GammaProduct pow(int k) const;

  std::string str() const;

  friend GammaProduct operator*(const GammaProduct& a, const GammaProduct& b);
  friend bool operator==(const GammaProduct& a, const GammaProduct& b) {
    return a.constant_ == b.constant_ && a.gammas_ == b.gammas_ && a.powers_ == b.powers_;
  }
  friend bool operator!=(const GammaProduct& a, const GammaProduct& b) { return !(a == b); }
  friend bool operator<(const GammaProduct& a, const GammaProduct& b);

  // Builders for code that assembles a product piece by piece.
  GammaProduct& mul_constant(const Rational& c);
  GammaProduct& mul_gamma(const AffineForm& arg, int exponent);
  GammaProduct& mul_power(const std::string& base, const AffineForm& exponent);
  GammaProduct& mul_rational_power(const Rational& base, const AffineForm& exponent);

 private:
  Rational constant_{1};
  std::map<AffineForm, int> gammas_;
  std::map<std::string, AffineForm> powers_;

  void canonicalize();
  void fold_constant_gammas();
  bool apply_reflection_once();
  void normalize_powers();
};

GammaProduct gp_mul(const GammaProduct& a, const GammaProduct& b);

bool is_numeric_base(const std::string& base);

struct PointValue {
  enum class Kind { Finite, Pole, Zero };
  Kind kind = Kind::Finite;
  long double value = 0;
  bool finite() const { return kind == Kind::Finite; }
};

// Poles are resolved as limits. Each Γ factor hitting -k contributes the residue-free
// part (-1)^k/(k! α), where α is the directional derivative of its argument along
// `direction`; α = 0 (or an empty direction) means the argument itself is perturbed.
PointValue gp_eval(const GammaProduct& g, const RealPoint& point,
                   const std::map<std::string, Rational>& direction = {});

// Exact value when every symbol is assigned and the result is rational.
std::optional<Rational> gp_exact(const GammaProduct& g, const ExactPoint& point);

// Γ(a+k)/Γ(a); for a negative integer literal k = -m, the form (-1)^m/(1-a)_m.
GammaProduct pochhammer_expand(const AffineForm& a, const AffineForm& k);

struct Rewrite {
  GammaProduct lhs;
  GammaProduct rhs;
};
// (a)_{2n} = 2^{2n} (a/2)_n ((a+1)/2)_n.
Rewrite pochhammer_duplicate(const AffineForm& a, const std::string& n);

// Inverse of GammaProduct::str().
GammaProduct parse_gamma_product(const std::string& text);

inline std::ostream& operator<<(std::ostream& os, const GammaProduct& g) { return os << g.str(); }

}  // namespace brackets
