#include "brackets/rational.hpp"

#include <cmath>
#include <regex>

#include "brackets/errors.hpp"

namespace brackets {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingAssignment: return "MissingAssignment";
    case ErrorKind::ZeroPivot: return "ZeroPivot";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::IndexCollision: return "IndexCollision";
    case ErrorKind::UnknownFunction: return "UnknownFunction";
    case ErrorKind::UnknownRepresentation: return "UnknownRepresentation";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UndeclaredParameter: return "UndeclaredParameter";
    case ErrorKind::NotHypergeometric: return "NotHypergeometric";
    case ErrorKind::NonConverged: return "NonConverged";
    case ErrorKind::OutsideRegion: return "OutsideRegion";
    case ErrorKind::NoDescent: return "NoDescent";
    case ErrorKind::GrowthDetected: return "GrowthDetected";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::EndpointSingular: return "EndpointSingular";
    case ErrorKind::UnsupportedModulus: return "UnsupportedModulus";
    case ErrorKind::BoundaryNotAsserted: return "BoundaryNotAsserted";
    case ErrorKind::CorpusFormatError: return "CorpusFormatError";
    case ErrorKind::MethodFails: return "MethodFails";
  }
  return "Error";
}

Rational parse_rational(const std::string& text) {
  static const std::regex frac(R"(\s*([+-]?\d+)\s*/\s*(\d+)\s*)");
  static const std::regex dec(R"(\s*([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*)");
  std::smatch m;
  if (std::regex_match(text, m, frac)) {
    mpz_class num(m[1].str());
    mpz_class den(m[2].str());
    if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + text + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  if (std::regex_match(text, m, dec) && (m[2].length() > 0 || m[3].length() > 0)) {
    std::string digits = m[2].str() + m[3].str();
    if (digits.empty()) digits = "0";
    mpz_class num(digits);
    mpz_class den = 1;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, m[3].length());
    long e = m[4].matched ? std::stol(m[4].str()) : 0;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(e)));
    if (e > 0) num *= scale;
    if (e < 0) den *= scale;
    if (m[1].str() == "-") num = -num;
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  throw Error(ErrorKind::ParseError, "not a rational number: '" + text + "'");
}

std::string to_string(const Rational& r) { return r.get_str(); }

bool is_integer(const Rational& r) { return r.get_den() == 1; }

mpz_class floor_of(const Rational& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

long to_long(const Rational& r) {
  if (!is_integer(r) || !r.get_num().fits_slong_p())
    throw Error(ErrorKind::DomainError, "expected a machine integer, got " + to_string(r));
  return r.get_num().get_si();
}

long double to_long_double(const Rational& r) {
  long en = 0;
  long ed = 0;
  double n = mpz_get_d_2exp(&en, r.get_num_mpz_t());
  double d = mpz_get_d_2exp(&ed, r.get_den_mpz_t());
  if (std::abs(en) < 1000 && std::abs(ed) < 1000 && r.get_num().fits_slong_p() &&
      r.get_den().fits_slong_p()) {
    return static_cast<long double>(r.get_num().get_si()) /
           static_cast<long double>(r.get_den().get_si());
  }
  return std::ldexp(static_cast<long double>(n) / d, static_cast<int>(en - ed));
}

Rational rpow(const Rational& base, long exponent) {
  if (exponent == 0) return Rational(1);
  if (base == 0) {
    if (exponent < 0) throw Error(ErrorKind::DomainError, "0 to a negative power");
    return Rational(0);
  }
  unsigned long e = static_cast<unsigned long>(std::labs(exponent));
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  Rational r = exponent > 0 ? Rational(num, den) : Rational(den, num);
  r.canonicalize();
  return r;
}

Rational factorial(unsigned long n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(f);
}

std::optional<Rational> exact_root(const Rational& value, unsigned long n) {
  if (value < 0) return std::nullopt;
  mpz_class rn, rd;
  if (!mpz_root(rn.get_mpz_t(), value.get_num_mpz_t(), n)) return std::nullopt;
  if (!mpz_root(rd.get_mpz_t(), value.get_den_mpz_t(), n)) return std::nullopt;
  Rational r(rn, rd);
  r.canonicalize();
  return r;
}

}  // namespace brackets
