#include "brackets/series_rep.hpp"

#include <algorithm>
#include <set>

#include "brackets/errors.hpp"

namespace brackets {

const char* rep_class_name(RepClass c) {
  switch (c) {
    case RepClass::classical: return "classical";
    case RepClass::totally_null: return "totally_null";
    case RepClass::partially_null: return "partially_null";
    case RepClass::partially_divergent: return "partially_divergent";
    case RepClass::totally_divergent: return "totally_divergent";
    case RepClass::formally_divergent: return "formally_divergent";
    case RepClass::bracket: return "bracket";
  }
  return "classical";
}

RepClass parse_rep_class(const std::string& name) {
  for (RepClass c : {RepClass::classical, RepClass::totally_null, RepClass::partially_null,
                     RepClass::partially_divergent, RepClass::totally_divergent,
                     RepClass::formally_divergent, RepClass::bracket})
    if (name == rep_class_name(c)) return c;
  throw Error(ErrorKind::ParseError, "unknown representation class '" + name + "'");
}

namespace {

std::string join_indices(const std::vector<std::string>& idx) {
  std::string out;
  for (size_t i = 0; i < idx.size(); ++i) out += (i ? "," : "") + idx[i];
  return out;
}

std::string brackets_str(const std::vector<AffineForm>& bs) {
  std::string out;
  for (const auto& b : bs) out += " \xE2\x9F\xA8" + b.str() + "\xE2\x9F\xA9";
  return out;
}

std::map<std::string, AffineForm> renaming(const std::vector<std::string>& from,
                                           const std::vector<std::string>& to) {
  std::map<std::string, AffineForm> m;
  for (size_t i = 0; i < from.size(); ++i) m[from[i]] = AffineForm::symbol(to[i]);
  return m;
}

}  // namespace

std::string SeriesRep::str() const {
  std::string out;
  if (!indices.empty()) out += "\xCE\xA3 \xCF\x86_{" + join_indices(indices) + "} ";
  out += coeff.str() + " \xC2\xB7 x^(" + xExponent.str() + ")";
  out += brackets_str(brackets);
  return out;
}

std::string BracketSeries::str() const {
  std::string out;
  if (!indices.empty()) out += "\xCE\xA3 \xCF\x86_{" + join_indices(indices) + "} ";
  out += coeff.str();
  out += brackets_str(brackets);
  return out;
}

bool operator==(const SeriesRep& a, const SeriesRep& b) {
  return a.name == b.name && a.indices == b.indices && a.coeff == b.coeff &&
         a.xExponent == b.xExponent && a.brackets == b.brackets && a.repClass == b.repClass;
}

bool operator==(const BracketSeries& a, const BracketSeries& b) {
  return a.indices == b.indices && a.coeff == b.coeff && a.brackets == b.brackets;
}

GammaProduct monomial_power(const GammaProduct& base, const AffineForm& exponent) {
  if (!base.gammas().empty())
    throw Error(ErrorKind::DomainError, "scale must be a monomial, got " + base.str());
  GammaProduct out = GammaProduct::rational_power(base.constant(), exponent);
  for (const auto& [b, F] : base.powers()) {
    if (F.is_constant())
      out.mul_power(b, exponent * F.constant());
    else if (exponent.is_constant())
      out.mul_power(b, F * exponent.constant());
    else
      throw Error(ErrorKind::DomainError, "non-linear exponent in monomial power");
  }
  return out;
}

SeriesRep apply_argument(const SeriesRep& rep, const GammaProduct& scale, const Rational& k) {
  SeriesRep out = rep;
  out.coeff = rep.coeff * monomial_power(scale, rep.xExponent);
  out.xExponent = rep.xExponent * k;
  return out;
}

BracketSeries expand_p1(const SeriesRep& rep, const AffineForm& monomialShift) {
  BracketSeries bs;
  bs.indices = rep.indices;
  bs.coeff = rep.coeff;
  bs.brackets = rep.brackets;
  bs.brackets.push_back(rep.xExponent + monomialShift + AffineForm(1));
  return bs;
}

SeriesRep expand_p2(const std::vector<std::pair<GammaProduct, AffineForm>>& terms,
                    const AffineForm& alpha) {
  if (terms.empty()) throw Error(ErrorKind::DomainError, "empty multinomial");
  SeriesRep rep;
  rep.name = "multinomial";
  if (terms.size() == 1) {
    if (!terms[0].second.is_constant() && !alpha.is_constant())
      throw Error(ErrorKind::DomainError, "non-linear exponent in single-term power");
    rep.coeff = monomial_power(terms[0].first, alpha);
    rep.xExponent = terms[0].second.is_constant() ? alpha * terms[0].second.constant()
                                                  : terms[0].second * alpha.constant();
    return rep;
  }
  rep.repClass = RepClass::bracket;
  AffineForm bracket = -alpha;
  for (size_t i = 0; i < terms.size(); ++i) {
    std::string m = "m" + std::to_string(i + 1);
    AffineForm mi = AffineForm::symbol(m);
    rep.indices.push_back(m);
    rep.coeff = rep.coeff * monomial_power(terms[i].first, mi);
    if (!terms[i].second.is_constant())
      throw Error(ErrorKind::DomainError, "multinomial term exponents must be constants");
    rep.xExponent += mi * terms[i].second.constant();
    bracket += mi;
  }
  rep.coeff.mul_gamma(-alpha, -1);
  rep.brackets.push_back(bracket);
  return rep;
}

SeriesRep multiply_reps(const std::vector<SeriesRep>& factors) {
  SeriesRep out;
  out.name = "product";
  out.repClass = RepClass::bracket;
  int next = 1;
  std::set<std::string> used;
  for (const auto& f : factors) {
    std::vector<std::string> fresh;
    for (size_t i = 0; i < f.indices.size(); ++i) fresh.push_back("n" + std::to_string(next++));
    std::set<std::string> own(f.indices.begin(), f.indices.end());
    for (const auto& s : f.coeff.symbols())
      if (!own.count(s) && std::find(fresh.begin(), fresh.end(), s) != fresh.end())
        throw Error(ErrorKind::IndexCollision, "parameter '" + s + "' clashes with an index name");
    for (const auto& s : fresh)
      if (!used.insert(s).second) throw Error(ErrorKind::IndexCollision, "index '" + s + "' reused");
    auto ren = renaming(f.indices, fresh);
    out.indices.insert(out.indices.end(), fresh.begin(), fresh.end());
    out.coeff = out.coeff * f.coeff.substitute(ren);
    out.xExponent += f.xExponent.substitute(ren);
    for (const auto& b : f.brackets) out.brackets.push_back(b.substitute(ren));
  }
  return out;
}

BracketSeries compose_product(const std::vector<SeriesRep>& factors,
                              const AffineForm& monomialShift) {
  return expand_p1(multiply_reps(factors), monomialShift);
}

BracketSeries canonical_indices(const BracketSeries& bs) {
  std::vector<std::string> fresh;
  for (size_t i = 0; i < bs.indices.size(); ++i) fresh.push_back("n" + std::to_string(i + 1));
  auto ren = renaming(bs.indices, fresh);
  BracketSeries out;
  out.indices = fresh;
  out.coeff = bs.coeff.substitute(ren);
  for (const auto& b : bs.brackets) out.brackets.push_back(b.substitute(ren));
  return out;
}

SeriesRep canonical_indices(const SeriesRep& rep, int firstIndex) {
  std::vector<std::string> fresh;
  for (size_t i = 0; i < rep.indices.size(); ++i)
    fresh.push_back("n" + std::to_string(firstIndex + static_cast<int>(i)));
  auto ren = renaming(rep.indices, fresh);
  SeriesRep out = rep;
  out.indices = fresh;
  out.coeff = rep.coeff.substitute(ren);
  out.xExponent = rep.xExponent.substitute(ren);
  out.brackets.clear();
  for (const auto& b : rep.brackets) out.brackets.push_back(b.substitute(ren));
  return out;
}

}  // namespace brackets
