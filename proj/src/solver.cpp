#include "brackets/solver.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "brackets/errors.hpp"
#include "brackets/series_eval.hpp"

namespace brackets {

namespace {

SolutionSeries finish(const BracketSeries& bs, const std::vector<std::string>& freeIdx,
                      const std::map<std::string, AffineForm>& solution, const Rational& det) {
  SolutionSeries s;
  s.freeIndices = freeIdx;
  GammaProduct c = bs.coeff.substitute(solution);
  for (const auto& [idx, value] : solution) c.mul_gamma(-value, 1);
  c.mul_constant(1 / abs(det));
  s.coeff = c;
  if (freeIdx.size() == 1) s.coeff = normalize_series_coeff(s.coeff, freeIdx[0]);
  s.argument = argument_of(s.coeff, freeIdx);
  return s;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
  return out;
}

bool usable_class(SeriesClass c) {
  return c == SeriesClass::convergent || c == SeriesClass::terminating ||
         c == SeriesClass::partially_null;
}

bool asymptotic_class(const Classification& c) {
  return c.tag == SeriesClass::formally_divergent ||
         (c.tag == SeriesClass::terminating && c.growth > 0);
}

const Classification& classified(SolutionSeries& s) {
  if (!s.classification) s.classification = classify_series(s);
  return *s.classification;
}

SolutionSeries renamed(const SolutionSeries& s, const std::string& to) {
  SolutionSeries out = s;
  out.coeff = s.coeff.substitute({{s.freeIndices[0], AffineForm::symbol(to)}});
  out.freeIndices = {to};
  return out;
}

// The exponent vector of a single-index candidate.
std::map<std::string, Rational> exponent_vector(const SolutionSeries& s) {
  std::map<std::string, Rational> v;
  for (const auto& [base, E] : s.argument) {
    Rational c = E.coeff(s.freeIndices[0]);
    if (c != 0) v[base] = c;
  }
  return v;
}

std::string vector_key(const std::map<std::string, Rational>& v) {
  std::string out;
  for (const auto& [b, c] : v) out += (out.empty() ? "" : " ") + b + ":" + to_string(c);
  return out.empty() ? "const" : out;
}

}  // namespace

SolutionSeries solve_rule_e1(const BracketSeries& bs) {
  if (bs.indices.size() != 1 || bs.brackets.size() != 1)
    throw Error(ErrorKind::DomainError, "Rule E1 needs one index and one bracket");
  const std::string& n = bs.indices[0];
  Rational alpha = bs.brackets[0].coeff(n);
  if (alpha == 0) throw Error(ErrorKind::ZeroPivot, "bracket does not involve " + n);
  AffineForm nstar = bs.brackets[0].without(n) * (-1 / alpha);
  return finish(bs, {}, {{n, nstar}}, alpha);
}

SolutionSeries solve_rule_e2(const BracketSeries& bs, const std::vector<std::string>& freeIndices) {
  std::vector<std::string> elim;
  for (const auto& i : bs.indices)
    if (std::find(freeIndices.begin(), freeIndices.end(), i) == freeIndices.end()) elim.push_back(i);
  size_t m = bs.brackets.size();
  if (elim.size() != m)
    throw Error(ErrorKind::SingularSystem, "system is not square: " + std::to_string(elim.size()) +
                                               " unknowns, " + std::to_string(m) + " brackets");
  std::vector<std::vector<Rational>> A(m, std::vector<Rational>(m));
  std::vector<AffineForm> rhs(m);
  for (size_t i = 0; i < m; ++i) {
    AffineForm rest = bs.brackets[i];
    for (size_t j = 0; j < m; ++j) {
      A[i][j] = bs.brackets[i].coeff(elim[j]);
      rest = rest.without(elim[j]);
    }
    rhs[i] = -rest;
  }
  Rational det = 1;
  for (size_t col = 0; col < m; ++col) {
    size_t piv = col;
    while (piv < m && A[piv][col] == 0) ++piv;
    if (piv == m) throw Error(ErrorKind::SingularSystem, "singular bracket system");
    if (piv != col) {
      std::swap(A[piv], A[col]);
      std::swap(rhs[piv], rhs[col]);
      det = -det;
    }
    det *= A[col][col];
    for (size_t r = 0; r < m; ++r) {
      if (r == col || A[r][col] == 0) continue;
      Rational f = A[r][col] / A[col][col];
      for (size_t c = col; c < m; ++c) A[r][c] -= f * A[col][c];
      rhs[r] -= rhs[col] * f;
    }
  }
  std::map<std::string, AffineForm> solution;
  for (size_t j = 0; j < m; ++j) solution[elim[j]] = rhs[j] * (1 / A[j][j]);
  return finish(bs, freeIndices, solution, det);
}

std::vector<SolutionSeries> enumerate_free(const BracketSeries& bs, std::vector<Diagnostic>* diagnostics) {
  int k = bs.index();
  if (k < 0) throw Error(ErrorKind::SingularSystem, "more brackets than sums");
  std::vector<SolutionSeries> out;
  size_t n = bs.indices.size();
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + k, true);
  do {
    std::vector<std::string> freeIdx;
    for (size_t i = 0; i < n; ++i)
      if (pick[i]) freeIdx.push_back(bs.indices[i]);
    try {
      SolutionSeries s = solve_rule_e2(bs, freeIdx);
      s.label = "T" + std::to_string(out.size() + 1);
      s.note = "free {" + join(freeIdx) + "}";
      out.push_back(s);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularSystem) throw;
      if (diagnostics) diagnostics->push_back({"free {" + join(freeIdx) + "}", "singular choice skipped"});
    }
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

bool structurally_equal(const SolutionSeries& a, const SolutionSeries& b) {
  if (a.part != b.part || a.freeIndices.size() != b.freeIndices.size()) return false;
  if (a.freeIndices.empty()) return a.coeff == b.coeff;
  if (a.freeIndices.size() > 1) return a.freeIndices == b.freeIndices && a.coeff == b.coeff;
  const std::string n = "n";
  SolutionSeries ra = renamed(a, n), rb = renamed(b, n);
  GammaProduct ca = normalize_series_coeff(ra.coeff, n);
  for (int k = -3; k <= 3; ++k) {
    SolutionSeries sb = k == 0 ? rb : shift_index(rb, k);
    if (normalize_series_coeff(sb.coeff, n) != ca) continue;
    // Terms present in one sum but not the other must vanish.
    const GammaProduct& longer = k > 0 ? rb.coeff : ra.coeff;
    bool vanish = true;
    for (int j = 0; j < std::abs(k); ++j)
      if (pole_order(normalize_series_coeff(longer, n), n, j) >= 0) vanish = false;
    if (vanish) return true;
  }
  return false;
}

std::vector<SolutionSeries> parity_split(const SolutionSeries& s, int d) {
  if (d < 1 || d > 4) throw Error(ErrorKind::UnsupportedModulus, "modulus " + std::to_string(d));
  if (d == 1) return {s};
  if (s.freeIndices.size() != 1) throw Error(ErrorKind::DomainError, "parity split needs one free index");
  const std::string& n = s.freeIndices[0];
  AffineForm m = AffineForm::symbol(n);
  std::vector<SolutionSeries> out;
  for (int r = 0; r < d; ++r) {
    SolutionSeries piece = s;
    // φ_{dm+r} / φ_m = (-1)^{(d-1)m + r} Γ(m+1) / Γ(dm+r+1)
    GammaProduct c = s.coeff.substitute({{n, m * Rational(d) + AffineForm(r)}});
    c.mul_power("-1", m * Rational(d - 1) + AffineForm(r));
    c.mul_gamma(m + AffineForm(1), 1);
    c.mul_gamma(m * Rational(d) + AffineForm(r + 1), -1);
    piece.coeff = normalize_series_coeff(c, n);
    piece.argument = argument_of(piece.coeff, piece.freeIndices);
    piece.label = s.label + "[" + std::to_string(r) + " mod " + std::to_string(d) + "]";
    piece.classification = classify_series(piece);
    out.push_back(piece);
  }
  return out;
}

BracketSeries epsilon_deform(const BracketSeries& bs, size_t bracketIndex, const std::string& eps) {
  if (bracketIndex >= bs.brackets.size())
    throw Error(ErrorKind::DomainError, "no bracket " + std::to_string(bracketIndex + 1));
  BracketSeries out = bs;
  out.brackets[bracketIndex] += AffineForm::symbol(eps);
  return out;
}

std::vector<BracketSeries> parametric_reduction(const BracketSeries& bs,
                                                const std::vector<ScaleParameter>& parameters,
                                                const AffineForm& rho, bool boundaryVanishes) {
  if (!boundaryVanishes)
    throw Error(ErrorKind::BoundaryNotAsserted, "parametric reduction needs boundary_vanishes");
  if (rho.is_zero()) throw Error(ErrorKind::DomainError, "parametric reduction needs ρ ≠ 0");
  GammaProduct inverseRho;
  if (rho.is_constant())
    inverseRho = GammaProduct(1 / rho.constant());
  else
    inverseRho = GammaProduct::gamma(rho) * GammaProduct::gamma(rho + AffineForm(1), -1);

  std::vector<BracketSeries> out;
  for (const auto& p : parameters) {
    auto it = bs.coeff.powers().find(p.marker);
    if (it == bs.coeff.powers().end() || p.k == 0) continue;
    const AffineForm& L = it->second;
    BracketSeries part = bs;
    GammaProduct factor(-p.k);
    if (L.is_constant())
      factor.mul_constant(L.constant());
    else
      factor = factor * GammaProduct::gamma(L + AffineForm(1)) * GammaProduct::gamma(L, -1);
    part.coeff = bs.coeff * factor * inverseRho;
    if (!part.coeff.is_zero()) out.push_back(part);
  }
  return out;
}

std::string argument_key(const SolutionSeries& s) {
  if (s.freeIndices.size() == 1) {
    auto v = exponent_vector(s);
    if (v.empty()) return "const";
    Rational scale = abs(v.begin()->second);
    for (auto& [b, c] : v) c /= scale;
    return vector_key(v);
  }
  std::string out;
  for (const auto& [b, E] : s.argument) out += (out.empty() ? "" : " ") + b + ":" + E.str();
  return out.empty() ? "const" : out;
}

ResolutionResult group_and_select(std::vector<SolutionSeries> candidates) {
  ResolutionResult res;
  for (auto& c : candidates) classified(c);
  res.candidates = candidates;

  // E4: exact duplicates first.
  std::vector<SolutionSeries> kept;
  for (auto& c : candidates) {
    auto dup = std::find_if(kept.begin(), kept.end(),
                            [&](const SolutionSeries& k) { return structurally_equal(k, c); });
    if (dup != kept.end()) {
      res.diagnostics.push_back({c.label, "duplicate of " + dup->label});
      continue;
    }
    kept.push_back(c);
  }

  // Formally divergent candidates are reported apart from the value.
  std::vector<SolutionSeries> pool;
  for (auto& c : kept) {
    if (asymptotic_class(*c.classification)) {
      res.asymptotic.push_back(c);
      res.diagnostics.push_back({c.label, "asymptotic"});
    } else {
      pool.push_back(c);
    }
  }

  bool anyUsable = std::any_of(pool.begin(), pool.end(), [](const SolutionSeries& c) {
    return usable_class(c.classification->tag);
  });

  // Grouping by exponent ray.
  std::map<std::string, std::vector<SolutionSeries>> rays;
  std::vector<std::string> order;
  for (auto& c : pool) {
    std::string key = argument_key(c);
    if (!rays.count(key)) order.push_back(key);
    rays[key].push_back(c);
  }

  for (const auto& key : order) {
    auto& members = rays[key];
    CandidateGroup g;
    g.key = key;
    // Merge rational multiples by splitting onto the common lattice.
    std::vector<Rational> r;
    for (auto& c : members) {
      if (c.freeIndices.size() != 1) {
        r.push_back(1);
        continue;
      }
      auto v = exponent_vector(c);
      r.push_back(v.empty() ? Rational(1) : abs(v.begin()->second));
    }
    mpz_class lcmNum = 1, gcdDen = 0;
    for (const auto& x : r) {
      mpz_lcm(lcmNum.get_mpz_t(), lcmNum.get_mpz_t(), x.get_num_mpz_t());
      mpz_gcd(gcdDen.get_mpz_t(), gcdDen.get_mpz_t(), x.get_den_mpz_t());
    }
    Rational target(lcmNum, gcdDen);
    std::vector<SolutionSeries> pieces;
    for (size_t i = 0; i < members.size(); ++i) {
      Rational d = target / r[i];
      if (d == 1) {
        pieces.push_back(members[i]);
        continue;
      }
      if (!is_integer(d) || d > 4) {
        res.diagnostics.push_back({members[i].label, "needs-human: argument ratio " + to_string(d)});
        g.discarded.push_back(members[i]);
        continue;
      }
      res.diagnostics.push_back({members[i].label, "split mod " + to_string(d) + " into group " + key});
      for (auto& p : parity_split(members[i], static_cast<int>(to_long(d)))) pieces.push_back(p);
    }
    // E4 again among split pieces.
    std::vector<SolutionSeries> unique;
    for (auto& p : pieces) {
      auto dup = std::find_if(unique.begin(), unique.end(),
                              [&](const SolutionSeries& u) { return structurally_equal(u, p); });
      if (dup != unique.end()) {
        res.diagnostics.push_back({p.label, "duplicate of " + dup->label});
        continue;
      }
      unique.push_back(p);
    }
    for (auto& p : unique) {
      SeriesClass t = classified(p).tag;
      if (usable_class(t)) {
        res.diagnostics.push_back({p.label, "added-to-group " + key});
        g.members.push_back(p);
      } else if (t == SeriesClass::partially_divergent) {
        res.diagnostics.push_back({p.label, "divergent-discarded"});
        g.discarded.push_back(p);
      } else if (asymptotic_class(*p.classification)) {
        res.diagnostics.push_back({p.label, "asymptotic"});
        res.asymptotic.push_back(p);
      } else if (anyUsable) {
        bool null = t == SeriesClass::totally_null;
        res.diagnostics.push_back({p.label, null ? "null-discarded" : "divergent-discarded"});
        g.discarded.push_back(p);
      } else {
        // Nothing convergent anywhere: kept for recognition only.
        res.diagnostics.push_back({p.label, "kept (no convergent companion)"});
        g.discarded.push_back(p);
      }
    }
    res.groups.push_back(g);
  }
  std::stable_sort(res.groups.begin(), res.groups.end(), [](const CandidateGroup& a, const CandidateGroup& b) {
    return a.viable() > b.viable();
  });
  if (!res.groups.empty() && res.groups.front().viable()) {
    res.selected = res.groups.front().members;
  } else {
    res.methodFails = true;
    res.failure = "every candidate was discarded";
  }
  return res;
}

}  // namespace brackets
