#include "brackets/affine.hpp"

#include <cctype>

#include "brackets/errors.hpp"

namespace brackets {

AffineForm::AffineForm(const Rational& constant) : constant_(reduced(constant)) {}

AffineForm AffineForm::symbol(const std::string& name, const Rational& coeff) {
  AffineForm f;
  if (coeff != 0) f.coeffs_[name] = reduced(coeff);
  return f;
}

Rational AffineForm::coeff(const std::string& name) const {
  auto it = coeffs_.find(name);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

std::set<std::string> AffineForm::symbols() const {
  std::set<std::string> out;
  for (const auto& [s, c] : coeffs_) out.insert(s);
  return out;
}

AffineForm& AffineForm::operator+=(const AffineForm& other) {
  constant_ += other.constant_;
  for (const auto& [s, c] : other.coeffs_) {
    Rational& slot = coeffs_[s];
    slot += c;
    if (slot == 0) coeffs_.erase(s);
  }
  return *this;
}

AffineForm& AffineForm::operator-=(const AffineForm& other) { return *this += -other; }

AffineForm& AffineForm::operator*=(const Rational& factor) {
  Rational k = reduced(factor);
  if (k == 0) {
    coeffs_.clear();
    constant_ = 0;
    return *this;
  }
  constant_ *= k;
  for (auto& [s, c] : coeffs_) c *= k;
  return *this;
}

AffineForm AffineForm::with_constant(const Rational& c) const {
  AffineForm f = *this;
  f.constant_ = reduced(c);
  return f;
}

AffineForm AffineForm::without(const std::string& name) const {
  AffineForm f = *this;
  f.coeffs_.erase(name);
  return f;
}

AffineForm AffineForm::substitute(const std::map<std::string, AffineForm>& values) const {
  AffineForm out(constant_);
  for (const auto& [s, c] : coeffs_) {
    auto it = values.find(s);
    if (it == values.end())
      out += symbol(s, c);
    else
      out += it->second * c;
  }
  return out;
}

long double AffineForm::eval(const RealPoint& point) const {
  long double v = to_long_double(constant_);
  for (const auto& [s, c] : coeffs_) {
    auto it = point.find(s);
    if (it == point.end()) throw Error(ErrorKind::MissingAssignment, "symbol '" + s + "'");
    v += to_long_double(c) * it->second;
  }
  return v;
}

Rational AffineForm::eval_exact(const ExactPoint& point) const {
  Rational v = constant_;
  for (const auto& [s, c] : coeffs_) {
    auto it = point.find(s);
    if (it == point.end()) throw Error(ErrorKind::MissingAssignment, "symbol '" + s + "'");
    v += c * it->second;
  }
  return v;
}

std::string AffineForm::str() const {
  std::string out;
  bool first = true;
  auto emit = [&](const Rational& c, const std::string& body) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    if (body.empty()) {
      out += to_string(mag);
    } else {
      if (mag != 1) out += to_string(mag) + "*";
      out += body;
    }
  };
  for (const auto& [s, c] : coeffs_) emit(c, s);
  if (constant_ != 0 || first) emit(constant_, "");
  return out;
}

bool operator<(const AffineForm& a, const AffineForm& b) {
  if (a.coeffs_ != b.coeffs_) return a.coeffs_ < b.coeffs_;
  return a.constant_ < b.constant_;
}

bool is_identifier_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '@' || c == '%';
}

bool is_identifier_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

namespace {

class LinearParser {
 public:
  explicit LinearParser(const std::string& text) : s_(text) {}

  AffineForm parse() {
    AffineForm f = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return f;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) {
    throw Error(ErrorKind::ParseError,
                msg + " at column " + std::to_string(pos_ + 1) + " in '" + s_ + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool take(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  AffineForm expr() {
    AffineForm f = term();
    while (true) {
      if (take('+'))
        f += term();
      else if (take('-'))
        f -= term();
      else
        return f;
    }
  }

  AffineForm term() {
    AffineForm f = unary();
    while (true) {
      if (take('*')) {
        AffineForm g = unary();
        if (f.is_constant())
          f = g * f.constant();
        else if (g.is_constant())
          f *= g.constant();
        else
          fail("product of two non-constant linear forms");
      } else if (take('/')) {
        AffineForm g = unary();
        if (!g.is_constant() || g.constant() == 0) fail("division by a non-constant or zero");
        f *= 1 / g.constant();
      } else {
        return f;
      }
    }
  }

  AffineForm unary() {
    if (take('-')) return -unary();
    if (take('+')) return unary();
    return atom();
  }

  AffineForm atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      AffineForm f = expr();
      if (!take(')')) fail("expected ')'");
      return f;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
        ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E') && pos_ + 1 < s_.size() &&
          (std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '-')) {
        ++pos_;
        if (s_[pos_] == '-') ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
      return AffineForm(parse_rational(s_.substr(start, pos_ - start)));
    }
    if (is_identifier_start(c)) {
      size_t start = pos_++;
      while (pos_ < s_.size() && is_identifier_char(s_[pos_])) ++pos_;
      return AffineForm::symbol(s_.substr(start, pos_ - start));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

}  // namespace

AffineForm parse_affine(const std::string& text) { return LinearParser(text).parse(); }

}  // namespace brackets
