#include "brackets/spec.hpp"

#include <cctype>
#include <set>

#include "brackets/catalog.hpp"
#include "brackets/errors.hpp"

namespace brackets {

namespace {

struct Item {
  std::string text;
  int line = 1;
  int column = 1;
};

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  size_t e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

[[noreturn]] void fail_at(const Item& item, size_t offset, const std::string& msg) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(item.line) + ", column " +
                                         std::to_string(item.column + static_cast<int>(offset)) + ": " + msg);
}

std::vector<Item> split_items(const std::string& text) {
  std::vector<Item> out;
  int depth = 0, line = 1, col = 1;
  Item cur;
  cur.line = line;
  cur.column = col;
  auto flush = [&]() {
    std::string t = cur.text;
    size_t lead = t.find_first_not_of(" \t\r");
    if (lead != std::string::npos) {
      Item it = cur;
      it.column += static_cast<int>(lead);
      it.text = trim(t);
      int open = 0;
      for (size_t i = 0; i < it.text.size(); ++i) {
        if (it.text[i] == '(') ++open;
        if (it.text[i] == ')' && --open < 0) fail_at(it, i, "unmatched ')'");
      }
      if (open > 0) fail_at(it, it.text.size(), "missing ')'");
      out.push_back(it);
    }
  };
  bool comment = false;
  for (char c : text) {
    if (comment && c != '\n') {
      ++col;
      continue;
    }
    comment = false;
    if (c == '#' && trim(cur.text).empty()) {
      comment = true;
      ++col;
      continue;
    }
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if ((c == ';' && depth == 0) || c == '\n') {
      flush();
      if (c == '\n') {
        ++line;
        col = 0;
        depth = 0;
      }
      cur = Item{};
      cur.line = line;
      cur.column = col + 1;
    } else {
      cur.text += c;
    }
    ++col;
  }
  flush();
  return out;
}

// Splits on `sep` at parenthesis depth 0, returning pieces with their offsets.
std::vector<std::pair<std::string, size_t>> split_top(const std::string& s, char sep) {
  std::vector<std::pair<std::string, size_t>> out;
  int depth = 0;
  size_t start = 0;
  for (size_t i = 0; i <= s.size(); ++i) {
    char c = i < s.size() ? s[i] : sep;
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.emplace_back(s.substr(start, i - start), start);
      start = i + 1;
    }
  }
  return out;
}

class MonomialParser {
 public:
  MonomialParser(const std::string& s, const Item& item, size_t offset)
      : s_(s), item_(item), offset_(offset) {}

  std::pair<GammaProduct, Rational> parse() {
    GammaProduct scale;
    Rational k = 0;
    skip();
    if (peek() == '-') {
      ++pos_;
      scale.mul_constant(-1);
    } else if (peek() == '+') {
      ++pos_;
    }
    bool divide = false;
    bool any = false;
    while (true) {
      skip();
      if (pos_ >= s_.size()) break;
      atom(scale, k, divide);
      any = true;
      skip();
      if (pos_ >= s_.size()) break;
      char c = s_[pos_];
      if (c == '*' || c == '/') {
        divide = c == '/';
        ++pos_;
      } else {
        fail("expected '*' or '/'");
      }
    }
    if (!any) fail("empty expression");
    return {scale, k};
  }

 private:
  const std::string& s_;
  const Item& item_;
  size_t offset_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) { fail_at(item_, offset_ + pos_, msg); }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::string exponent_text() {
    skip();
    if (peek() == '(') {
      int depth = 0;
      size_t start = pos_;
      for (; pos_ < s_.size(); ++pos_) {
        if (s_[pos_] == '(') ++depth;
        if (s_[pos_] == ')' && --depth == 0) break;
      }
      if (pos_ >= s_.size()) fail("unbalanced parenthesis");
      ++pos_;
      return s_.substr(start + 1, pos_ - start - 2);
    }
    size_t start = pos_;
    if (peek() == '-') ++pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                                s_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("missing exponent");
    return s_.substr(start, pos_ - start);
  }

  AffineForm exponent() {
    std::string e = exponent_text();
    try {
      return parse_affine(e);
    } catch (const Error& err) {
      fail("bad exponent '" + e + "': " + err.what());
    }
  }

  void atom(GammaProduct& scale, Rational& k, bool divide) {
    Rational sign = divide ? -1 : 1;
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E') && pos_ + 1 < s_.size() &&
          (std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '-')) {
        pos_ += 2;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
      Rational v = parse_rational(s_.substr(start, pos_ - start));
      AffineForm e(1);
      skip();
      if (peek() == '^') {
        ++pos_;
        e = exponent();
      }
      if (v == 0) fail("zero factor in a scale");
      scale.mul_rational_power(v, e * sign);
      return;
    }
    if (c == '(') {
      std::string inner = exponent_text();
      Rational v;
      try {
        v = parse_rational(trim(inner));
      } catch (const Error&) {
        fail("only numbers may be parenthesized inside a scale");
      }
      AffineForm e(1);
      skip();
      if (peek() == '^') {
        ++pos_;
        e = exponent();
      }
      scale.mul_rational_power(v, e * sign);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() && is_identifier_char(s_[pos_])) ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      AffineForm e(1);
      skip();
      if (peek() == '^') {
        ++pos_;
        e = exponent();
      }
      if (name == "x") {
        if (!e.is_constant()) fail("x exponent must be a number");
        k += e.constant() * sign;
      } else {
        scale.mul_power(name, e * sign);
      }
      return;
    }
    fail(std::string("unexpected '") + c + "'");
  }
};

Factor parse_factor(const std::string& text, const Item& item, size_t offset) {
  Factor f;
  f.text = trim(text);
  size_t lead = text.find_first_not_of(" \t");
  std::string t = f.text;
  if (t.empty()) fail_at(item, offset, "empty factor");
  if (t[0] == '(') {
    int depth = 0;
    size_t close = 0;
    for (size_t i = 0; i < t.size(); ++i) {
      if (t[i] == '(') ++depth;
      if (t[i] == ')' && --depth == 0) {
        close = i;
        break;
      }
    }
    if (close == 0) fail_at(item, offset + lead, "unbalanced parenthesis");
    std::string inner = t.substr(1, close - 1);
    std::string rest = trim(t.substr(close + 1));
    if (rest.empty() || rest[0] != '^') fail_at(item, offset + lead + close + 1, "multinomial needs an exponent");
    std::string e = trim(rest.substr(1));
    if (!e.empty() && e.front() == '(' && e.back() == ')') e = e.substr(1, e.size() - 2);
    f.kind = Factor::Kind::Multinomial;
    f.power = parse_affine(e);
    // Terms split on + and - at depth 0, keeping the sign with the term.
    std::vector<std::pair<std::string, size_t>> terms;
    int d = 0;
    size_t start = 0;
    for (size_t i = 0; i < inner.size(); ++i) {
      char c = inner[i];
      if (c == '(') ++d;
      if (c == ')') --d;
      if ((c == '+' || c == '-') && d == 0 && i > start) {
        size_t prev = inner.find_last_not_of(" \t", i - 1);
        if (prev != std::string::npos && inner[prev] != '^' && trim(inner.substr(start, i - start)) != "") {
          terms.emplace_back(inner.substr(start, i - start), start);
          start = i;
        }
      }
    }
    terms.emplace_back(inner.substr(start), start);
    for (const auto& [term, off] : terms) {
      MonomialParser mp(term, item, offset + lead + 1 + off);
      auto [c, k] = mp.parse();
      f.terms.emplace_back(c, k);
    }
    return f;
  }
  if (t == "x" || t.rfind("x^", 0) == 0) {
    MonomialParser mp(t, item, offset + lead);
    auto [c, k] = mp.parse();
    if (c != GammaProduct()) fail_at(item, offset + lead, "a bare power of x takes no coefficient");
    f.kind = Factor::Kind::Monomial;
    f.power = AffineForm(k);
    return f;
  }
  size_t open = t.find('(');
  if (open == std::string::npos || t.back() != ')')
    fail_at(item, offset + lead, "expected NAME(argument) in '" + t + "'");
  f.kind = Factor::Kind::Function;
  f.name = trim(t.substr(0, open));
  for (char c : f.name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
      fail_at(item, offset + lead, "bad function name '" + f.name + "'");
  std::string inner = t.substr(open + 1, t.size() - open - 2);
  auto parts = split_top(inner, ';');
  if (parts.size() > 2) fail_at(item, offset + lead + open, "too many ';' in arguments");
  std::string arg = parts.back().first;
  size_t argOff = offset + lead + open + 1 + parts.back().second;
  if (parts.size() == 2) {
    for (const auto& [p, off] : split_top(parts[0].first, ',')) {
      try {
        f.params.push_back(parse_affine(trim(p)));
      } catch (const Error& err) {
        fail_at(item, offset + lead + open + 1 + off, err.what());
      }
    }
  }
  MonomialParser mp(arg, item, argOff);
  auto [scale, k] = mp.parse();
  if (k == 0) fail_at(item, argOff, "argument must contain x");
  f.scale = scale;
  f.k = k;
  return f;
}

int option_int(const std::string& text, const Item& item, size_t offset) {
  size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) fail_at(item, offset, "expected an integer in '" + text + "'");
  return v;
}

void collect_symbols(const GammaProduct& g, std::set<std::string>& out) {
  for (const auto& s : g.symbols()) out.insert(s);
}

}  // namespace

bool IntegrandSpec::has_all_values() const {
  for (const auto& p : parameters)
    if (!values.count(p)) return false;
  return true;
}

ExactPoint IntegrandSpec::exact_point() const { return ExactPoint(values.begin(), values.end()); }

RealPoint IntegrandSpec::real_point() const {
  RealPoint out;
  for (const auto& [k, v] : values) out[k] = to_long_double(v);
  return out;
}

void parse_rep_choices(const std::string& text, std::map<int, std::string>& out) {
  for (const auto& [piece, off] : split_top(text, ',')) {
    std::string p = trim(piece);
    if (p.empty()) continue;
    size_t eq = p.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "representation choice needs '=': " + p);
    std::string lhs = trim(p.substr(0, eq));
    std::string rhs = trim(p.substr(eq + 1));
    if (!lhs.empty() && lhs[0] == 'f') lhs = lhs.substr(1);
    if (lhs.empty() || rhs.empty() || lhs.size() > 6 || lhs.find_first_not_of("0123456789") != std::string::npos)
      throw Error(ErrorKind::ParseError, "bad representation choice '" + p + "'");
    int position = std::stoi(lhs);
    if (position < 1) throw Error(ErrorKind::ParseError, "factor positions count from 1 in '" + p + "'");
    out[position] = rhs;
  }
}

IntegrandSpec parse_spec(const std::string& text) {
  IntegrandSpec spec;
  bool haveIntegrand = false;
  for (const auto& item : split_items(text)) {
    spec.source += (spec.source.empty() ? "" : "\n") + item.text;
    size_t colon = item.text.find(':');
    if (colon == std::string::npos) fail_at(item, 0, "expected 'key: value'");
    std::string key = trim(item.text.substr(0, colon));
    std::string value = item.text.substr(colon + 1);
    size_t valueOff = colon + 1;
    if (key == "integrand") {
      haveIntegrand = true;
      for (const auto& [piece, off] : split_top(value, '*')) {
        // '*' at depth 0 also joins "x^k" style factors; scales live inside parentheses.
        spec.factors.push_back(parse_factor(piece, item, valueOff + off));
      }
    } else if (key == "mellin") {
      try {
        spec.mellin = parse_affine(trim(value));
      } catch (const Error& err) {
        fail_at(item, valueOff, err.what());
      }
    } else if (key == "params") {
      for (const auto& [piece, off] : split_top(value, ',')) {
        std::string p = trim(piece);
        if (p.empty()) continue;
        size_t eq = p.find('=');
        std::string name = trim(p.substr(0, eq));
        if (name.empty() || !is_identifier_start(name[0]) || name == "x")
          fail_at(item, valueOff + off, "bad parameter name '" + name + "'");
        spec.parameters.push_back(name);
        if (eq != std::string::npos) {
          try {
            spec.values[name] = parse_rational(trim(p.substr(eq + 1)));
          } catch (const Error& err) {
            fail_at(item, valueOff + off + eq + 1, err.what());
          }
        }
      }
    } else if (key == "options") {
      for (const auto& [piece, off] : split_top(value, ',')) {
        std::string o = trim(piece);
        if (o.empty()) continue;
        if (o == "parametric_reduction") {
          spec.options.parametricReduction = true;
        } else if (o == "boundary_vanishes") {
          spec.options.boundaryVanishes = true;
        } else if (o.rfind("epsilon_bracket=", 0) == 0) {
          int b = option_int(o.substr(16), item, valueOff + off);
          if (b < 1) fail_at(item, valueOff + off, "epsilon_bracket counts from 1");
          spec.options.epsilonBracket = b;
        } else if (o.rfind("parity_modulus_max=", 0) == 0) {
          int d = option_int(o.substr(19), item, valueOff + off);
          if (d < 1 || d > 4) fail_at(item, valueOff + off, "parity_modulus_max must be 1..4");
          spec.options.parityModulusMax = d;
        } else {
          fail_at(item, valueOff + off, "unknown option '" + o + "'");
        }
      }
    } else if (key == "rep") {
      try {
        parse_rep_choices(value, spec.options.reps);
      } catch (const Error& err) {
        fail_at(item, valueOff, err.what());
      }
    } else {
      fail_at(item, 0, "unknown key '" + key + "'");
    }
  }
  if (!haveIntegrand) throw Error(ErrorKind::ParseError, "missing 'integrand:'");

  std::set<std::string> used;
  for (const auto& s : spec.mellin.symbols()) used.insert(s);
  for (size_t i = 0; i < spec.factors.size(); ++i) {
    const Factor& f = spec.factors[i];
    if (f.kind == Factor::Kind::Function) {
      catalog_lookup(f.name, f.params);  // UnknownFunction / arity
      collect_symbols(f.scale, used);
      for (const auto& p : f.params)
        for (const auto& s : p.symbols()) used.insert(s);
    } else if (f.kind == Factor::Kind::Multinomial) {
      for (const auto& [c, k] : f.terms) collect_symbols(c, used);
      for (const auto& s : f.power.symbols()) used.insert(s);
    }
  }
  std::set<std::string> declared(spec.parameters.begin(), spec.parameters.end());
  for (const auto& s : used)
    if (!declared.count(s)) throw Error(ErrorKind::UndeclaredParameter, "parameter '" + s + "' is not declared");
  for (const auto& [pos, name] : spec.options.reps)
    if (pos < 1 || pos > static_cast<int>(spec.factors.size()))
      throw Error(ErrorKind::ParseError, "representation choice for missing factor f" + std::to_string(pos));
  return spec;
}

}  // namespace brackets
