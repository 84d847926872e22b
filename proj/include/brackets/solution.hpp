#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "brackets/gamma_product.hpp"

namespace brackets {

enum class SeriesClass {
  convergent,
  terminating,
  totally_null,
  partially_null,
  partially_divergent,
  totally_divergent,
  formally_divergent,
};

const char* series_class_name(SeriesClass c);

struct Classification {
  SeriesClass tag = SeriesClass::convergent;
  std::string witness;
  // Σ e·α over Γ factors minus one: < 0 entire, = 0 finite radius, > 0 formally divergent.
  Rational growth = -1;
  int leadingZeros = 0;  // zero terms before the first nonzero one, when that is the only defect
};

// Σ Π(upper)_n / Π(lower)_n · z^n / n!, times prefactor.
struct HyperForm {
  std::vector<AffineForm> upper;
  std::vector<AffineForm> lower;
  GammaProduct argument;
  GammaProduct prefactor;

  std::string str() const;
};

struct ClosedFormTerm {
  enum class Kind {
    Product,    // coeff
    Pow1m,      // coeff · (1 - z)^exponent
    Exp,        // coeff · e^z
    AtanRatio,  // coeff · 2F1(1/2, 1; 3/2; z)
    AsinRatio,  // coeff · 2F1(1, 1; 3/2; z)
    LogRatio,   // coeff · 2F1(1, 1; 2; z) = -log(1 - z)/z
    Hyper,      // coeff · hyper (unreduced)
    Function,   // coeff · f(z) for a catalog function f
  };
  Kind kind = Kind::Product;
  GammaProduct coeff;
  GammaProduct z;
  AffineForm exponent;
  // Pfaff: evaluate the table function at z/(z-1) and multiply by (1 - z)^pfaffExponent.
  bool pfaff = false;
  AffineForm pfaffExponent;
  HyperForm hyper;
  std::string function;
  std::vector<AffineForm> functionParams;

  std::string str() const;
};

struct ClosedForm {
  std::vector<ClosedFormTerm> terms;

  bool is_gamma_product() const {
    return terms.size() == 1 && terms[0].kind == ClosedFormTerm::Kind::Product;
  }
  bool reduced() const;  // no unreduced hypergeometric term
  std::string str() const;
};

struct SolutionSeries {
  std::string label;
  int part = 0;  // which bracket series of a parametric reduction produced it
  std::vector<std::string> freeIndices;
  GammaProduct coeff;  // φ implicit for each free index
  // Exponent of each symbolic power base that depends on the free indices.
  std::map<std::string, AffineForm> argument;
  std::optional<Classification> classification;
  std::string note;

  std::string str() const;
};

}  // namespace brackets
