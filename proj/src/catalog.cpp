#include "brackets/catalog.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <sstream>

#include "brackets/errors.hpp"

namespace brackets {

namespace {

struct RepRow {
  const char* function;
  const char* rep;
  RepClass cls;
  std::vector<std::string> indices;
  const char* coeff;
  const char* xexp;
  std::vector<std::string> brackets;
};

// The frozen representation table. Coefficients use the debug-printer syntax.
const std::vector<RepRow>& rows() {
  static const std::vector<RepRow> table = {
      {"exp", "series", RepClass::classical, {"n"}, "1", "n", {}},
      {"cos", "series", RepClass::classical, {"n"},
       "Γ(1/2) · Γ(n + 1/2)^-1 · 2^(-2*n)", "2*n", {}},
      {"sin", "series", RepClass::classical, {"n"},
       "1/2 · Γ(1/2) · Γ(n + 3/2)^-1 · 2^(-2*n)", "2*n + 1", {}},
      {"J0", "series", RepClass::classical, {"n"}, "Γ(n + 1)^-1 · 2^(-2*n)", "2*n", {}},
      {"Jnu", "series", RepClass::classical, {"n"},
       "Γ(n + %nu + 1)^-1 · 2^(-2*n - %nu)", "2*n + %nu", {}},
      {"I0", "series", RepClass::classical, {"n"},
       "Γ(n + 1)^-1 · (-1)^(n) · 2^(-2*n)", "2*n", {}},
      {"Ei", "series", RepClass::partially_divergent, {"n"}, "Γ(n) · Γ(n + 1)^-1", "n", {}},
      {"K0", "divergent", RepClass::totally_divergent, {"n"},
       "1/2 · Γ(-n) · 2^(-2*n)", "2*n", {}},
      {"K0", "null", RepClass::totally_null, {"n"},
       "Γ(n + 1/2)^2 · Γ(-n)^-1 · 2^(2*n)", "-2*n - 1", {}},
      {"K0", "null_alt", RepClass::totally_null, {"n"},
       "2 · Γ(n + 1)^2 · Γ(-n)^-1 · 2^(2*n)", "-2*n - 2", {}},
      {"K0", "integral", RepClass::bracket, {"n1", "n2"},
       "1/2 · 2^(-2*n2)", "2*n2", {"n1 - n2"}},
      {"Knu", "T1", RepClass::classical, {"n"},
       "Γ(-n + %nu) · 2^(-2*n + %nu - 1)", "2*n - %nu", {}},
      {"Knu", "T2", RepClass::classical, {"n"},
       "Γ(-n - %nu) · 2^(-2*n - %nu - 1)", "2*n + %nu", {}},
      {"Knu", "T3", RepClass::totally_null, {"n"},
       "Γ(n + 1/2) · Γ(n + %nu + 1/2) · Γ(-n)^-1 · 2^(2*n + %nu)", "-2*n - %nu - 1", {}},
      {"Knu", "integral", RepClass::bracket, {"n1", "n2"},
       "2^(-2*n2 - %nu - 1)", "2*n2 + %nu", {"n1 - n2 - %nu"}},
      {"Ai", "T1", RepClass::totally_null, {"n"},
       "1/2 · Γ(1/2)^-1 · Γ(-3*n - 1/2) · Γ(-2*n)^-1 · 3^(n + 1/2) · 2^(-2*n)", "3*n + 1/2", {}},
      {"Ai", "T2", RepClass::partially_null, {"n"},
       "Γ(1/2)^-1 · Γ(-1/3*n + 1/6) · Γ(-2/3*n + 1/3)^-1 · 3^(1/3*n - 2/3) · 2^(-2/3*n - 2/3)",
       "n", {}},
      {"Ai", "T3", RepClass::totally_null, {"n"},
       "Γ(1/2)^-1 · Γ(3*n + 1) · Γ(n + 1/2) · Γ(-n)^-1 · Γ(2*n + 1)^-1 · 2^(2*n) · 3^(-n)",
       "-3*n - 1", {}},
      {"TricomiU", "U1", RepClass::classical, {"n"},
       "Γ(-%b + 1) · Γ(%a - %b + 1)^-1 · Γ(n + %a) · Γ(%a)^-1 · Γ(%b) · Γ(n + %b)^-1 · (-1)^(n)",
       "n", {}},
      {"TricomiU", "U2", RepClass::classical, {"n"},
       "Γ(%b - 1) · Γ(%a)^-1 · Γ(n + %a - %b + 1) · Γ(%a - %b + 1)^-1 · Γ(-%b + 2) · "
       "Γ(n - %b + 2)^-1 · (-1)^(n)",
       "n - %b + 1", {}},
      {"TricomiU", "U3", RepClass::formally_divergent, {"n"},
       "Γ(n + %a) · Γ(%a)^-1 · Γ(n + %a - %b + 1) · Γ(%a - %b + 1)^-1", "-n - %a", {}},
  };
  return table;
}

const std::vector<std::pair<std::string, std::vector<std::string>>>& functions() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> f = {
      {"exp", {}}, {"cos", {}}, {"sin", {}}, {"J0", {}}, {"Jnu", {"%nu"}},
      {"I0", {}},  {"Ei", {}},  {"K0", {}},  {"Knu", {"%nu"}}, {"Ai", {}},
      {"TricomiU", {"%a", "%b"}},
  };
  return f;
}

std::vector<CatalogEntry> build() {
  std::vector<CatalogEntry> out;
  for (const auto& [name, params] : functions()) {
    CatalogEntry e;
    e.name = name;
    e.parameters = params;
    for (const auto& row : rows()) {
      if (name != row.function) continue;
      SeriesRep r;
      r.name = row.rep;
      r.repClass = row.cls;
      r.indices = row.indices;
      r.coeff = parse_gamma_product(row.coeff);
      r.xExponent = parse_affine(row.xexp);
      for (const auto& b : row.brackets) r.brackets.push_back(parse_affine(b));
      e.reps.push_back(r);
    }
    out.push_back(e);
  }
  return out;
}

SeriesRep bind_parameters(const SeriesRep& rep, const std::map<std::string, AffineForm>& values) {
  SeriesRep out = rep;
  out.coeff = rep.coeff.substitute(values);
  out.xExponent = rep.xExponent.substitute(values);
  out.brackets.clear();
  for (const auto& b : rep.brackets) out.brackets.push_back(b.substitute(values));
  return out;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

}  // namespace

const SeriesRep& CatalogEntry::rep(const std::string& repName) const {
  for (const auto& r : reps)
    if (r.name == repName) return r;
  throw Error(ErrorKind::UnknownRepresentation, name + " has no representation '" + repName + "'");
}

std::vector<std::vector<std::string>> CatalogEntry::choices() const {
  static const std::map<std::string, std::vector<std::string>> summands = {{"TricomiU", {"U1", "U2"}}};
  std::vector<std::vector<std::string>> out;
  auto it = summands.find(name);
  bool grouped = false;
  for (const auto& r : reps) {
    bool part = it != summands.end() &&
                std::find(it->second.begin(), it->second.end(), r.name) != it->second.end();
    if (!part) {
      out.push_back({r.name});
    } else if (!grouped) {
      out.push_back(it->second);
      grouped = true;
    }
  }
  return out;
}

std::vector<std::string> split_choice(const std::string& choice) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t plus = choice.find('+', start);
    out.push_back(trim(choice.substr(start, plus == std::string::npos ? std::string::npos : plus - start)));
    if (plus == std::string::npos) break;
    start = plus + 1;
  }
  return out;
}

bool operator==(const CatalogEntry& a, const CatalogEntry& b) {
  return a.name == b.name && a.parameters == b.parameters && a.reps == b.reps;
}

const std::vector<CatalogEntry>& builtin_catalog() {
  static const std::vector<CatalogEntry> entries = build();
  return entries;
}

bool parse_hypergeometric_name(const std::string& name, int& p, int& q) {
  static const std::regex re(R"((\d)F(\d))");
  std::smatch m;
  if (!std::regex_match(name, m, re)) return false;
  p = std::stoi(m[1].str());
  q = std::stoi(m[2].str());
  return true;
}

CatalogEntry catalog_lookup(const std::string& name, const std::vector<AffineForm>& bindings) {
  int p = 0, q = 0;
  if (parse_hypergeometric_name(name, p, q)) {
    if (static_cast<int>(bindings.size()) != p + q)
      throw Error(ErrorKind::ParseError, name + " expects " + std::to_string(p + q) + " parameters");
    SeriesRep r;
    r.name = "series";
    r.indices = {"n"};
    r.xExponent = AffineForm::symbol("n");
    r.repClass = p >= q + 2 ? RepClass::formally_divergent : RepClass::classical;
    AffineForm n = AffineForm::symbol("n");
    r.coeff = GammaProduct::power("-1", n);
    for (int i = 0; i < p + q; ++i) {
      int sgn = i < p ? 1 : -1;
      r.coeff.mul_gamma(bindings[i] + n, sgn);
      r.coeff.mul_gamma(bindings[i], -sgn);
    }
    CatalogEntry e;
    e.name = name;
    e.reps.push_back(r);
    return e;
  }
  for (const auto& entry : builtin_catalog()) {
    if (entry.name != name) continue;
    if (bindings.size() != entry.parameters.size())
      throw Error(ErrorKind::ParseError, name + " expects " + std::to_string(entry.parameters.size()) +
                                             " parameters, got " + std::to_string(bindings.size()));
    std::map<std::string, AffineForm> values;
    for (size_t i = 0; i < bindings.size(); ++i) values[entry.parameters[i]] = bindings[i];
    CatalogEntry out;
    out.name = entry.name;
    for (const auto& r : entry.reps) out.reps.push_back(bind_parameters(r, values));
    return out;
  }
  throw Error(ErrorKind::UnknownFunction, "'" + name + "' is not in the catalog");
}

std::string serialize_catalog(const std::vector<CatalogEntry>& entries) {
  std::ostringstream os;
  for (const auto& e : entries) {
    os << "function " << e.name;
    for (const auto& p : e.parameters) os << " " << p;
    os << "\n";
    for (const auto& r : e.reps) {
      os << "  rep " << r.name << " " << rep_class_name(r.repClass) << "\n";
      os << "    indices:";
      for (const auto& i : r.indices) os << " " << i;
      os << "\n";
      os << "    coeff: " << r.coeff.str() << "\n";
      os << "    xexp: " << r.xExponent.str() << "\n";
      for (const auto& b : r.brackets) os << "    bracket: " << b.str() << "\n";
    }
    os << "\n";
  }
  return os.str();
}

std::vector<CatalogEntry> parse_catalog(const std::string& text) {
  std::vector<CatalogEntry> out;
  std::istringstream is(text);
  std::string line;
  int lineNo = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::ParseError, "catalog line " + std::to_string(lineNo) + ": " + msg);
  };
  while (std::getline(is, line)) {
    ++lineNo;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream ls(t);
    std::string key;
    ls >> key;
    if (key == "function") {
      CatalogEntry e;
      ls >> e.name;
      std::string p;
      while (ls >> p) e.parameters.push_back(p);
      out.push_back(e);
      continue;
    }
    if (out.empty()) fail("entry before any 'function' line");
    auto& reps = out.back().reps;
    if (key == "rep") {
      SeriesRep r;
      std::string cls;
      ls >> r.name >> cls;
      r.repClass = parse_rep_class(cls);
      reps.push_back(r);
      continue;
    }
    if (reps.empty()) fail("field before any 'rep' line");
    SeriesRep& r = reps.back();
    std::string value = trim(t.substr(key.size()));
    if (key == "indices:") {
      std::istringstream vs(value);
      std::string i;
      while (vs >> i) r.indices.push_back(i);
    } else if (key == "coeff:") {
      r.coeff = parse_gamma_product(value);
    } else if (key == "xexp:") {
      r.xExponent = parse_affine(value);
    } else if (key == "bracket:") {
      r.brackets.push_back(parse_affine(value));
    } else {
      fail("unknown field '" + key + "'");
    }
  }
  return out;
}

}  // namespace brackets
