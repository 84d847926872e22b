#include "brackets/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

#include "brackets/catalog.hpp"
#include "brackets/errors.hpp"
#include "brackets/functions.hpp"

namespace brackets {

namespace {

const char* kEps = "eps";
const char* kRecognitionIndex = "%k";

using NumericPiece = std::function<long double(const RealPoint&)>;

struct MemberValue {
  ClosedForm cf;                     // reduced part
  std::vector<NumericPiece> numeric;  // pieces without a reduced closed form
  std::vector<std::string> text;

  bool closed() const { return numeric.empty(); }
  long double at(const RealPoint& p) const {
    long double v = cf.terms.empty() ? 0.0L : evaluate_closed_form(cf, p);
    for (const auto& f : numeric) v += f(p);
    return v;
  }
  void add(const MemberValue& o) {
    cf.terms.insert(cf.terms.end(), o.cf.terms.begin(), o.cf.terms.end());
    numeric.insert(numeric.end(), o.numeric.begin(), o.numeric.end());
    text.insert(text.end(), o.text.begin(), o.text.end());
  }
};

struct Choice {
  std::string name;
  std::vector<SeriesRep> summands;
};

struct FactorReps {
  int position = 0;  // 1-based in the spec
  std::vector<Choice> reps;
};

struct Setup {
  std::vector<FactorReps> factors;
  AffineForm shift;  // exponent of the x power multiplying the factor series
  std::map<std::string, GammaProduct> markers;
  std::vector<ScaleParameter> scaleParams;
};

std::string marker(int i) { return "@" + std::to_string(i); }
std::string marker(int i, int j) { return "@" + std::to_string(i) + "_" + std::to_string(j); }

Setup build_setup(const IntegrandSpec& spec, const std::map<int, std::string>& forced) {
  Setup s;
  s.shift = spec.mellin - AffineForm(1);
  for (size_t i = 0; i < spec.factors.size(); ++i) {
    const Factor& f = spec.factors[i];
    int pos = static_cast<int>(i) + 1;
    auto choice = forced.find(pos);
    if (f.kind == Factor::Kind::Monomial) {
      if (choice != forced.end())
        throw Error(ErrorKind::UnknownRepresentation, "factor f" + std::to_string(pos) + " is a power of x");
      s.shift += f.power;
      continue;
    }
    FactorReps fr;
    fr.position = pos;
    if (f.kind == Factor::Kind::Function) {
      CatalogEntry entry = catalog_lookup(f.name, f.params);
      s.markers[marker(pos)] = f.scale;
      s.scaleParams.push_back({marker(pos), f.k});
      GammaProduct m = GammaProduct::power(marker(pos), AffineForm(1));
      std::vector<std::vector<std::string>> names;
      if (choice != forced.end())
        names.push_back(split_choice(choice->second));
      else
        names = entry.choices();
      for (const auto& group : names) {
        Choice c;
        for (const auto& n : group) {
          c.name += (c.name.empty() ? "" : "+") + n;
          c.summands.push_back(apply_argument(entry.rep(n), m, f.k));
        }
        fr.reps.push_back(c);
      }
    } else {
      if (choice != forced.end() && choice->second != "multinomial")
        throw Error(ErrorKind::UnknownRepresentation, "factor f" + std::to_string(pos) + " is a multinomial");
      std::vector<std::pair<GammaProduct, AffineForm>> terms;
      for (size_t j = 0; j < f.terms.size(); ++j) {
        std::string m = marker(pos, static_cast<int>(j) + 1);
        s.markers[m] = f.terms[j].first;
        terms.emplace_back(GammaProduct::power(m, AffineForm(1)), AffineForm(f.terms[j].second));
      }
      SeriesRep r = expand_p2(terms, f.power);
      if (r.indices.empty()) {
        // A single term is just a power of x with a constant.
        if (r.xExponent.symbols().size() > 0 && !r.xExponent.is_constant())
          throw Error(ErrorKind::DomainError, "single-term power with a symbolic x exponent");
      }
      fr.reps.push_back(Choice{r.name, {r}});
    }
    s.factors.push_back(fr);
  }
  return s;
}

GammaProduct substitute_markers(GammaProduct g, const Setup& setup) {
  for (const auto& [m, v] : setup.markers)
    if (g.powers().count(m)) g = g.substitute_base(m, v);
  return g;
}

// ---------------------------------------------------------------------------
// Member evaluation

struct Context {
  const IntegrandSpec& spec;
  const Setup& setup;
};

MemberValue closed_member(const ClosedForm& cf) {
  MemberValue v;
  if (cf.reduced()) {
    v.cf = cf;
    v.text.push_back(cf.str());
  } else {
    ClosedForm copy = cf;
    v.numeric.push_back([copy](const RealPoint& p) { return evaluate_closed_form(copy, p); });
    v.text.push_back("numeric " + cf.str());
  }
  return v;
}

long double direct_sum(const GammaProduct& coeff, const std::string& index, const RealPoint& p) {
  long double sum = 0, comp = 0, prevAbs = 0;
  int quiet = 0, growing = 0;
  for (long n = 0; n < 200000; ++n) {
    PointValue t = series_term(coeff, index, n, p);
    if (t.kind == PointValue::Kind::Pole) throw Error(ErrorKind::DomainError, "term has a pole");
    long double v = t.finite() ? t.value : 0.0L;
    long double y = v - comp;
    long double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
    long double a = std::fabs(v);
    if (a <= 1e-19L * std::fabs(sum)) {
      if (++quiet >= 3) return sum;
    } else {
      quiet = 0;
    }
    growing = (n > 50 && a > prevAbs && a > 1e-300L) ? growing + 1 : 0;
    if (growing > 50) throw Error(ErrorKind::MethodFails, "terms grow");
    prevAbs = a;
  }
  throw Error(ErrorKind::NonConverged, "direct summation did not converge");
}

// Σ_{f} Π φ F(Σ f) = Σ_N φ_N k^N F(N) when the coefficient depends on the sum only.
std::optional<SolutionSeries> collapse_symmetric(const SolutionSeries& s) {
  const auto& idx = s.freeIndices;
  std::map<std::string, AffineForm> toFirst;
  AffineForm total;
  for (size_t i = 0; i < idx.size(); ++i) {
    toFirst[idx[i]] = i == 0 ? AffineForm::symbol(idx[0]) : AffineForm(0);
    total += AffineForm::symbol(idx[i]);
  }
  GammaProduct single = s.coeff.substitute(toFirst);
  if (single.substitute({{idx[0], total}}) != s.coeff) return std::nullopt;
  SolutionSeries out = s;
  out.freeIndices = {idx[0]};
  out.coeff = single * GammaProduct::rational_power(Rational(static_cast<long>(idx.size())),
                                                    AffineForm::symbol(idx[0]));
  out.coeff = normalize_series_coeff(out.coeff, idx[0]);
  out.argument = argument_of(out.coeff, out.freeIndices);
  out.classification.reset();
  return out;
}

MemberValue evaluate_member(SolutionSeries s, const Context& ctx, int depth);

MemberValue evaluate_single(SolutionSeries s, const Context& ctx, int depth) {
  const std::string idx = s.freeIndices[0];
  s.coeff = normalize_series_coeff(s.coeff, idx);
  s.argument = argument_of(s.coeff, s.freeIndices);
  s.classification = classify_series(s);
  const Classification& c = *s.classification;
  if (c.tag == SeriesClass::totally_null) return MemberValue{};
  if (c.leadingZeros > 0 && depth < 8) return evaluate_member(shift_index(s, c.leadingZeros), ctx, depth + 1);
  switch (c.tag) {
    case SeriesClass::partially_divergent:
    case SeriesClass::totally_divergent:
      throw Error(ErrorKind::MethodFails, s.label + " is " + series_class_name(c.tag));
    case SeriesClass::formally_divergent:
      throw Error(ErrorKind::MethodFails, s.label + " is formally divergent");
    case SeriesClass::partially_null: {
      if (depth >= 8) throw Error(ErrorKind::MethodFails, s.label + ": split depth exceeded");
      std::string last;
      for (int d = 2; d <= ctx.spec.options.parityModulusMax; ++d) {
        try {
          MemberValue total;
          for (auto& piece : parity_split(s, d)) total.add(evaluate_member(piece, ctx, depth + 1));
          return total;
        } catch (const Error& e) {
          last = e.what();
        }
      }
      throw Error(ErrorKind::MethodFails, s.label + " stays partially null after splitting" +
                                              (last.empty() ? "" : " (" + last + ")"));
    }
    default:
      break;
  }
  try {
    HyperForm h = to_hyper(s);
    return closed_member(closed_form(h));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotHypergeometric) throw;
  }
  MemberValue v;
  GammaProduct coeff = s.coeff;
  v.numeric.push_back([coeff, idx](const RealPoint& p) { return direct_sum(coeff, idx, p); });
  v.text.push_back("numeric Σ " + s.str());
  return v;
}

MemberValue evaluate_member(SolutionSeries s, const Context& ctx, int depth) {
  s.coeff = substitute_markers(s.coeff, ctx.setup);
  if (s.freeIndices.empty()) {
    s.argument.clear();
    s.classification = classify_series(s);
    SeriesClass t = s.classification->tag;
    if (t == SeriesClass::totally_null) return MemberValue{};
    if (t != SeriesClass::convergent && t != SeriesClass::terminating)
      throw Error(ErrorKind::MethodFails, s.label + " is " + series_class_name(t));
    ClosedForm cf;
    ClosedFormTerm term;
    term.coeff = s.coeff;
    cf.terms.push_back(term);
    return closed_member(cf);
  }
  if (s.freeIndices.size() > 1) {
    auto single = collapse_symmetric(s);
    if (!single)
      throw Error(ErrorKind::MethodFails, s.label + ": multi-index series does not collapse to one index");
    return evaluate_single(*single, ctx, depth);
  }
  return evaluate_single(s, ctx, depth);
}

// Matches a divergent or null series against the catalog reps that describe a function
// value, giving K·f(W).
std::optional<ClosedFormTerm> recognize(const SolutionSeries& member, const Setup& setup) {
  if (member.freeIndices.size() != 1) return std::nullopt;
  GammaProduct C = substitute_markers(member.coeff, setup)
                       .substitute({{member.freeIndices[0], AffineForm::symbol(kRecognitionIndex)}});
  C = normalize_series_coeff(C, kRecognitionIndex);
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"K0", "divergent"}, {"K0", "null"}, {"K0", "null_alt"}, {"Ai", "T1"}, {"Ai", "T3"}};
  for (const auto& [fname, repName] : table) {
    CatalogEntry entry = catalog_lookup(fname, {});
    const SeriesRep& rep = entry.rep(repName);
    GammaProduct R = normalize_series_coeff(
        rep.coeff.substitute({{"n", AffineForm::symbol(kRecognitionIndex)}}), kRecognitionIndex);
    GammaProduct ratio = C * R.inverse();
    bool ok = true;
    for (const auto& [arg, e] : ratio.gammas())
      if (arg.depends_on(kRecognitionIndex)) ok = false;
    if (!ok) continue;
    Rational alpha = rep.xExponent.coeff("n");
    AffineForm beta = rep.xExponent.without("n");
    GammaProduct W;
    for (const auto& [base, E] : ratio.powers()) {
      Rational u = E.coeff(kRecognitionIndex);
      if (u == 0) continue;
      if (base == "-1") {
        ok = false;
        break;
      }
      W.mul_power(base, AffineForm(u / alpha));
    }
    if (!ok || W == GammaProduct()) continue;
    ClosedFormTerm t;
    t.kind = ClosedFormTerm::Kind::Function;
    t.function = fname;
    t.z = W;
    t.coeff = ratio.substitute({{kRecognitionIndex, AffineForm(0)}}) * monomial_power(W, -beta);
    return t;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Parts and combinations

struct PartOutcome {
  bool ok = false;
  std::string failure;
  std::string group;
  MemberValue value;
  PartReport report;
};

void trial_note(PartOutcome& out, const std::string& msg) { out.report.diagnostics.push_back({"recognition", msg}); }

RealPoint sample_point(const IntegrandSpec& spec, bool epsilon) {
  RealPoint p = spec.real_point();
  if (epsilon) p[kEps] = 1e-2L;
  return p;
}

PartOutcome evaluate_part(const ResolutionResult& res, const Context& ctx, bool epsilon) {
  PartOutcome out;
  for (const auto& c : res.candidates) out.report.candidates.push_back(c.str());
  out.report.diagnostics = res.diagnostics;
  for (const auto& a : res.asymptotic) out.report.asymptotic.push_back(a.label);
  bool check = ctx.spec.has_all_values();
  RealPoint sample = sample_point(ctx.spec, epsilon);

  std::optional<PartOutcome> numericChoice;
  for (const auto& g : res.groups) {
    if (!g.viable()) continue;
    PartOutcome trial = out;
    try {
      MemberValue total;
      for (const auto& m : g.members) {
        MemberValue v;
        try {
          v = evaluate_member(m, ctx, 0);
          if (check) v.at(sample);
        } catch (const Error& e) {
          // A member that sits on the boundary of its region (z = 1 exactly) diverges there
          // and is dropped; its companions still carry the value.
          if (e.kind() != ErrorKind::OutsideRegion || g.members.size() < 2) throw;
          trial.report.diagnostics.push_back({m.label, std::string("dropped: ") + e.what()});
          continue;
        }
        trial.report.selected.push_back(m.label);
        for (const auto& t : v.text) trial.report.values.push_back(m.label + ": " + t);
        total.add(v);
      }
      if (trial.report.selected.empty()) throw Error(ErrorKind::MethodFails, "every member was dropped");
      if (check) {
        long double probe = total.at(sample);
        if (!std::isfinite(probe)) throw Error(ErrorKind::DomainError, "value is not finite");
      }
      trial.ok = true;
      trial.group = g.key;
      trial.report.group = g.key;
      trial.value = total;
      if (total.closed()) return trial;
      if (!numericChoice) numericChoice = trial;
    } catch (const Error& e) {
      out.report.diagnostics.push_back({"group " + g.key, std::string("rejected: ") + e.what()});
    }
  }
  if (numericChoice) return *numericChoice;

  // Recognition of the kept null/divergent members as catalog function values.
  for (const auto& g : res.groups) {
    std::vector<const SolutionSeries*> kept;
    for (const auto& d : g.discarded) {
      if (!d.classification) continue;
      SeriesClass t = d.classification->tag;
      if (t == SeriesClass::totally_null || t == SeriesClass::totally_divergent) kept.push_back(&d);
    }
    if (kept.empty()) continue;
    // A kept member that is an index shift of an earlier one is the same sum and is dropped.
    std::vector<const SolutionSeries*> distinct;
    std::vector<SolutionSeries> seen;
    for (const auto* m : kept) {
      if (m->freeIndices.size() != 1) {
        distinct.push_back(m);
        continue;
      }
      SolutionSeries r = *m;
      r.coeff = substitute_markers(m->coeff, ctx.setup)
                    .substitute({{m->freeIndices[0], AffineForm::symbol(kRecognitionIndex)}});
      r.freeIndices = {kRecognitionIndex};
      r.coeff = normalize_series_coeff(r.coeff, kRecognitionIndex);
      bool duplicate = false;
      for (const auto& prev : seen)
        for (int k = -3; k <= 3 && !duplicate; ++k)
          if (shift_index(r, k).coeff == prev.coeff) duplicate = true;
      if (duplicate) {
        trial_note(out, m->label + " repeats an earlier series after an index shift; dropped");
        continue;
      }
      seen.push_back(r);
      distinct.push_back(m);
    }
    kept = distinct;
    MemberValue total;
    PartOutcome trial = out;
    bool all = true;
    for (const auto* m : kept) {
      auto term = recognize(*m, ctx.setup);
      if (!term) {
        all = false;
        break;
      }
      ClosedForm cf;
      cf.terms.push_back(*term);
      trial.report.selected.push_back(m->label);
      trial.report.values.push_back(m->label + ": " + cf.str() + " (recognized)");
      total.add(closed_member(cf));
    }
    if (!all) continue;
    try {
      if (check && !std::isfinite(total.at(sample)))
        throw Error(ErrorKind::DomainError, "value is not finite");
    } catch (const Error& e) {
      out.report.diagnostics.push_back({"group " + g.key, std::string("recognition rejected: ") + e.what()});
      continue;
    }
    trial.ok = true;
    trial.group = g.key;
    trial.report.group = g.key + " (recognized)";
    trial.value = total;
    return trial;
  }
  out.failure = res.methodFails ? res.failure : "no group could be evaluated";
  return out;
}

struct Attempt {
  std::vector<size_t> choice;
  std::vector<std::string> names;
  size_t order = 0;
  std::optional<int> epsilon;
  int index = 0;
  size_t discards = 0;
  bool solverFailed = false;
  std::string error;
  std::vector<BracketSeries> parts;
  std::vector<ResolutionResult> results;
};

Attempt resolve(const IntegrandSpec& spec, const Setup& setup, const std::vector<size_t>& choice,
                std::optional<int> epsilon) {
  Attempt a;
  a.choice = choice;
  a.epsilon = epsilon;
  // Summand reps multiply out into several bracket series whose values add.
  std::vector<std::vector<SeriesRep>> products = {{}};
  for (size_t i = 0; i < setup.factors.size(); ++i) {
    const Choice& c = setup.factors[i].reps[choice[i]];
    a.names.push_back("f" + std::to_string(setup.factors[i].position) + "=" + c.name);
    std::vector<std::vector<SeriesRep>> next;
    for (const auto& prefix : products)
      for (const auto& r : c.summands) {
        next.push_back(prefix);
        next.back().push_back(r);
      }
    products = std::move(next);
  }
  try {
    for (const auto& reps : products) {
      BracketSeries bs = compose_product(reps, setup.shift);
      a.index = std::max(a.index, bs.index());
      if (epsilon) bs = epsilon_deform(bs, static_cast<size_t>(*epsilon - 1), kEps);
      if (spec.options.parametricReduction) {
        for (auto& part : parametric_reduction(bs, setup.scaleParams, setup.shift + AffineForm(1),
                                               spec.options.boundaryVanishes))
          a.parts.push_back(part);
      } else {
        a.parts.push_back(bs);
      }
    }
    for (size_t p = 0; p < a.parts.size(); ++p) {
      std::vector<Diagnostic> diags;
      auto cands = enumerate_free(a.parts[p], &diags);
      for (auto& c : cands) {
        c.part = static_cast<int>(p);
        if (a.parts.size() > 1) c.label = "P" + std::to_string(p + 1) + "." + c.label;
      }
      ResolutionResult r = group_and_select(cands);
      r.diagnostics.insert(r.diagnostics.begin(), diags.begin(), diags.end());
      for (const auto& g : r.groups) a.discards += g.discarded.size();
      if (r.methodFails) a.solverFailed = true;
      a.results.push_back(std::move(r));
    }
  } catch (const Error& e) {
    a.solverFailed = true;
    a.error = e.what();
  }
  return a;
}

std::vector<std::vector<size_t>> combinations(const Setup& setup) {
  std::vector<std::vector<size_t>> out;
  std::vector<size_t> cur(setup.factors.size(), 0);
  while (true) {
    out.push_back(cur);
    size_t i = cur.size();
    while (i > 0) {
      --i;
      if (++cur[i] < setup.factors[i].reps.size()) break;
      cur[i] = 0;
      if (i == 0) return out;
    }
    if (cur.empty()) return out;
  }
}

bool has_symbol(const ClosedForm& cf, const std::string& sym) {
  for (const auto& t : cf.terms) {
    if (t.coeff.depends_on(sym) || t.z.depends_on(sym) || t.exponent.depends_on(sym)) return true;
    for (const auto& p : t.functionParams)
      if (p.depends_on(sym)) return true;
  }
  return false;
}

std::string fmt(long double v) {
  std::ostringstream os;
  os << std::setprecision(15) << static_cast<double>(v);
  return os.str();
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

}  // namespace

long double integrand_value(const IntegrandSpec& spec, const RealPoint& point, long double x) {
  long double v = std::pow(x, spec.mellin.eval(point) - 1);
  for (const auto& f : spec.factors) {
    switch (f.kind) {
      case Factor::Kind::Function: {
        std::vector<long double> params;
        for (const auto& p : f.params) params.push_back(p.eval(point));
        PointValue scale = gp_eval(f.scale, point);
        if (!scale.finite()) throw Error(ErrorKind::DomainError, "scale of " + f.text + " is singular");
        v *= eval_function(f.name, params, scale.value * std::pow(x, to_long_double(f.k)));
        break;
      }
      case Factor::Kind::Multinomial: {
        long double sum = 0;
        for (const auto& [c, k] : f.terms) {
          PointValue cv = gp_eval(c, point);
          if (!cv.finite()) throw Error(ErrorKind::DomainError, "coefficient in " + f.text + " is singular");
          sum += cv.value * std::pow(x, to_long_double(k));
        }
        v *= std::pow(sum, f.power.eval(point));
        break;
      }
      case Factor::Kind::Monomial:
        v *= std::pow(x, f.power.eval(point));
        break;
    }
  }
  return v;
}

long double tail_frequency(const IntegrandSpec& spec, const RealPoint& point) {
  static const std::set<std::string> decaying = {"exp", "Ei", "K0", "Knu", "Ai", "TricomiU"};
  static const std::set<std::string> oscillating = {"J0", "Jnu", "cos", "sin"};
  long double freq = 0;
  for (const auto& f : spec.factors) {
    if (f.kind != Factor::Kind::Function) continue;
    if (decaying.count(f.name) && f.k > 0) return 0;
    if (oscillating.count(f.name) && f.k == 1) freq += std::fabs(gp_eval(f.scale, point).value);
  }
  return freq;
}

QuadratureResult integrate_spec(const IntegrandSpec& spec, const RealPoint& point, double tol) {
  QuadOptions opt;
  opt.tol = tol;
  opt.frequency = tail_frequency(spec, point);
  return quad_semiinfinite([&](long double x) { return integrand_value(spec, point, x); }, point, opt);
}

EvalReport run_pipeline(const IntegrandSpec& spec, const EvalOptions& options) {
  EvalReport report;
  report.integrand = spec.source;
  std::map<int, std::string> forced = spec.options.reps;
  for (const auto& [k, v] : options.reps) forced[k] = v;
  Setup setup = build_setup(spec, forced);
  Context ctx{spec, setup};

  auto combos = combinations(setup);
  auto run = [&](std::optional<int> eps, bool onlyStructural) -> bool {
    std::vector<Attempt> attempts;
    for (size_t i = 0; i < combos.size(); ++i) {
      Attempt a = resolve(spec, setup, combos[i], eps);
      a.order = i;
      if (onlyStructural && (a.parts.empty() || a.parts[0].brackets.size() < 2)) continue;
      attempts.push_back(std::move(a));
    }
    // Minimal index first, then the fewest discarded candidates.
    std::stable_sort(attempts.begin(), attempts.end(), [](const Attempt& x, const Attempt& y) {
      return std::make_tuple(!x.error.empty(), x.index, x.discards, x.order) <
             std::make_tuple(!y.error.empty(), y.index, y.discards, y.order);
    });
    for (const auto& a : attempts) {
      std::string label = join(a.names, ", ");
      if (!a.error.empty()) {
        report.rejected.push_back(label + ": " + a.error);
        continue;
      }
      std::vector<PartOutcome> outcomes;
      std::string failure;
      for (const auto& r : a.results) {
        PartOutcome o = evaluate_part(r, ctx, a.epsilon.has_value());
        if (!o.ok) {
          failure = o.failure;
          outcomes.push_back(std::move(o));
          break;
        }
        outcomes.push_back(std::move(o));
      }
      if (!failure.empty() || outcomes.empty()) {
        report.rejected.push_back(label + ": " + (failure.empty() ? "no bracket series" : failure));
        if (report.parts.empty()) {
          for (size_t p = 0; p < outcomes.size(); ++p) {
            outcomes[p].report.bracketSeries = a.parts[p].str();
            report.parts.push_back(outcomes[p].report);
          }
        }
        continue;
      }
      report.parts.clear();
      report.combination = a.names;
      report.index = a.index;
      report.epsilonBracket = a.epsilon;
      MemberValue total;
      for (size_t p = 0; p < outcomes.size(); ++p) {
        outcomes[p].report.bracketSeries = a.parts[p].str();
        report.parts.push_back(outcomes[p].report);
        if (p > 0 && outcomes[p].group != outcomes[0].group)
          report.notes.push_back("part " + std::to_string(p + 1) + " reattached: group " + outcomes[p].group +
                                 " instead of " + outcomes[0].group);
        total.add(outcomes[p].value);
      }
      bool epsilon = a.epsilon.has_value();
      if (total.closed()) {
        report.closedForm = total.cf;
        if (!has_symbol(total.cf, kEps)) epsilon = false;
        if (spec.has_all_values() && !epsilon) {
          try {
            report.exact = exact_closed_form(total.cf, spec.exact_point());
          } catch (const Error&) {
          }
        }
      }
      if (spec.has_all_values()) {
        RealPoint point = spec.real_point();
        try {
          if (epsilon) {
            report.limit = epsilon_limit([&](long double e) {
              RealPoint q = point;
              q[kEps] = e;
              return total.at(q);
            });
            report.value = report.limit->value;
          } else {
            report.value = total.at(point);
          }
        } catch (const Error& e) {
          report.methodFails = true;
          report.failure = std::string("evaluation: ") + e.what();
          return true;
        }
      }
      return true;
    }
    return false;
  };

  bool done = run(spec.options.epsilonBracket, false);
  if (!done && !spec.options.epsilonBracket && options.autoEpsilon) {
    report.notes.push_back("no combination resolved; retrying with the first bracket deformed by eps");
    done = run(1, true);
  }
  if (!done) {
    report.methodFails = true;
    report.failure = "no representation combination produced a value";
    return report;
  }

  if (options.verify && report.value && spec.has_all_values()) {
    RealPoint point = spec.real_point();
    try {
      report.oracle = integrate_spec(spec, point);
      long double tol = options.tol;
      if (tail_frequency(spec, point) > 0) tol = std::max(tol, 1e-6L);
      report.tolerance = tol;
      report.verdict = compare(*report.value, *report.oracle, tol);
    } catch (const Error& e) {
      report.notes.push_back(std::string("oracle: ") + e.what());
    }
  }
  return report;
}

std::string EvalReport::text(bool trace) const {
  std::ostringstream os;
  std::string flat;
  for (char c : integrand) flat += c == '\n' ? std::string("; ") : std::string(1, c);
  while (flat.size() >= 2 && flat.compare(flat.size() - 2, 2, "; ") == 0) flat.resize(flat.size() - 2);
  os << "spec: " << flat << "\n";
  if (!combination.empty()) os << "representations: " << join(combination, ", ") << "\n";
  os << "index: " << index << "\n";
  if (epsilonBracket) os << "epsilon: bracket " << *epsilonBracket << "\n";
  if (trace) {
    for (const auto& r : rejected) os << "rejected combination: " << r << "\n";
    for (size_t p = 0; p < parts.size(); ++p) {
      const PartReport& pr = parts[p];
      os << "part " << p + 1 << ": " << pr.bracketSeries << "\n";
      for (const auto& c : pr.candidates) os << "  candidate " << c << "\n";
      for (const auto& d : pr.diagnostics) os << "  " << d.candidate << ": " << d.reason << "\n";
      for (const auto& a : pr.asymptotic) os << "  asymptotic " << a << "\n";
      if (!pr.group.empty()) os << "  group " << pr.group << "\n";
      for (const auto& v : pr.values) os << "  value " << v << "\n";
    }
  } else {
    for (size_t p = 0; p < parts.size(); ++p)
      os << "selected (part " << p + 1 << "): " << join(parts[p].selected, ", ") << "\n";
  }
  for (const auto& n : notes) os << "note: " << n << "\n";
  if (closedForm) os << "closed form: " << closedForm->str() << "\n";
  if (exact) os << "exact: " << to_string(*exact) << "\n";
  if (limit) os << "epsilon limit residual: " << fmt(limit->residual) << "\n";
  if (value) os << "value: " << fmt(*value) << "\n";
  if (oracle)
    os << "oracle: " << fmt(oracle->value) << " ± " << fmt(oracle->absErrorEstimate) << " ("
       << oracle->evaluations << " evaluations)\n";
  if (verdict)
    os << "verdict: " << (verdict->pass ? "PASS" : "FAIL") << " |diff| = " << fmt(verdict->difference)
       << " allowed " << fmt(verdict->allowed) << "\n";
  if (methodFails) os << "MethodFails: " << failure << "\n";
  return os.str();
}

std::string EvalReport::json() const {
  nlohmann::ordered_json j;
  j["integrand"] = integrand;
  j["representations"] = combination;
  j["index"] = index;
  j["epsilon_bracket"] = epsilonBracket ? nlohmann::ordered_json(*epsilonBracket) : nlohmann::ordered_json();
  j["rejected"] = rejected;
  nlohmann::ordered_json ps = nlohmann::ordered_json::array();
  for (const auto& p : parts) {
    nlohmann::ordered_json pj;
    pj["bracket_series"] = p.bracketSeries;
    pj["candidates"] = p.candidates;
    nlohmann::ordered_json diags = nlohmann::ordered_json::array();
    for (const auto& d : p.diagnostics) diags.push_back({{"candidate", d.candidate}, {"reason", d.reason}});
    pj["diagnostics"] = diags;
    pj["asymptotic"] = p.asymptotic;
    pj["group"] = p.group;
    pj["selected"] = p.selected;
    pj["values"] = p.values;
    ps.push_back(pj);
  }
  j["parts"] = ps;
  j["notes"] = notes;
  j["closed_form"] = closedForm ? nlohmann::ordered_json(closedForm->str()) : nlohmann::ordered_json();
  j["exact"] = exact ? nlohmann::ordered_json(to_string(*exact)) : nlohmann::ordered_json();
  j["value"] = value ? nlohmann::ordered_json(static_cast<double>(*value)) : nlohmann::ordered_json();
  if (limit) j["epsilon_residual"] = static_cast<double>(limit->residual);
  if (oracle) {
    j["oracle"] = {{"value", static_cast<double>(oracle->value)},
                   {"error", static_cast<double>(oracle->absErrorEstimate)},
                   {"evaluations", oracle->evaluations}};
  }
  if (verdict) {
    j["verdict"] = verdict->pass ? "PASS" : "FAIL";
    j["difference"] = static_cast<double>(verdict->difference);
    j["allowed"] = static_cast<double>(verdict->allowed);
  }
  j["method_fails"] = methodFails;
  if (methodFails) j["failure"] = failure;
  return j.dump(2);
}

}  // namespace brackets
