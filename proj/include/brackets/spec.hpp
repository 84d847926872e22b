#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "brackets/gamma_product.hpp"

namespace brackets {

struct Factor {
  enum class Kind { Function, Multinomial, Monomial };
  Kind kind = Kind::Function;
  std::string name;                // Function
  std::vector<AffineForm> params;  // Function parameters, in catalog order
  GammaProduct scale;              // Function: argument is scale · x^k
  Rational k = 1;
  std::vector<std::pair<GammaProduct, Rational>> terms;  // Multinomial: Σ c_j x^{e_j}
  AffineForm power;                                      // Multinomial exponent or x power
  std::string text;
};

struct SpecOptions {
  std::map<int, std::string> reps;     // 1-based factor position -> representation name
  std::optional<int> epsilonBracket;   // 1-based; structural brackets come first
  int parityModulusMax = 4;
  bool parametricReduction = false;
  bool boundaryVanishes = false;
};

struct IntegrandSpec {
  std::vector<Factor> factors;
  AffineForm mellin = AffineForm(1);  // the integrand carries x^{mellin - 1}
  std::vector<std::string> parameters;
  std::map<std::string, Rational> values;
  SpecOptions options;
  std::string source;

  bool has_all_values() const;
  ExactPoint exact_point() const;
  RealPoint real_point() const;
};

// Keys integrand / mellin / params / options / rep, one per line or separated by ';' at
// parenthesis depth 0. See docs/formats.md.
IntegrandSpec parse_spec(const std::string& text);

// "f2=integral, f1=null" or "2=integral"; used by the spec `rep` key and the CLI.
void parse_rep_choices(const std::string& text, std::map<int, std::string>& out);

}  // namespace brackets
