#include <gtest/gtest.h>

#include <cmath>

#include "brackets/catalog.hpp"
#include "brackets/errors.hpp"
#include "brackets/series_eval.hpp"

using namespace brackets;

namespace {

AffineForm sym(const std::string& s) { return AffineForm::symbol(s); }
AffineForm half(long num) { return AffineForm(Rational(num, 2)); }
GammaProduct P(const std::string& base, const AffineForm& e) { return GammaProduct::power(base, e); }
GammaProduct G(const AffineForm& a, int e = 1) { return GammaProduct::gamma(a, e); }

SolutionSeries single(const GammaProduct& coeff, const std::string& index = "n") {
  SolutionSeries s;
  s.label = "T";
  s.freeIndices = {index};
  s.coeff = coeff;
  s.argument = argument_of(coeff, s.freeIndices);
  return s;
}

SeriesClass class_of(const SeriesRep& r) {
  SolutionSeries s = single(r.coeff, r.indices.at(0));
  return classify_series(s).tag;
}

// Direct partial sum from the term evaluator, independent of to_hyper.
long double direct_sum(const GammaProduct& coeff, const RealPoint& p, int terms) {
  long double total = 0;
  for (int k = 0; k < terms; ++k) {
    PointValue t = series_term(coeff, "n", k, p);
    if (t.finite()) total += t.value;
  }
  return total;
}

HyperForm hyper(std::vector<AffineForm> up, std::vector<AffineForm> low, const GammaProduct& z) {
  HyperForm h;
  h.upper = std::move(up);
  h.lower = std::move(low);
  h.argument = z;
  return h;
}

}  // namespace

TEST(Classify, CatalogRepresentations) {
  EXPECT_EQ(class_of(catalog_lookup("exp", {}).rep("series")), SeriesClass::convergent);
  EXPECT_EQ(class_of(catalog_lookup("J0", {}).rep("series")), SeriesClass::convergent);
  EXPECT_EQ(class_of(catalog_lookup("Ei", {}).rep("series")), SeriesClass::partially_divergent);
  EXPECT_EQ(class_of(catalog_lookup("K0", {}).rep("divergent")), SeriesClass::totally_divergent);
  EXPECT_EQ(class_of(catalog_lookup("K0", {}).rep("null")), SeriesClass::totally_null);
  EXPECT_EQ(class_of(catalog_lookup("K0", {}).rep("null_alt")), SeriesClass::totally_null);
  EXPECT_EQ(class_of(catalog_lookup("Ai", {}).rep("T1")), SeriesClass::totally_null);
  EXPECT_EQ(class_of(catalog_lookup("Ai", {}).rep("T2")), SeriesClass::partially_null);
  EXPECT_EQ(class_of(catalog_lookup("Ai", {}).rep("T3")), SeriesClass::totally_null);
  CatalogEntry u = catalog_lookup("TricomiU", {sym("a"), sym("b")});
  EXPECT_EQ(class_of(u.rep("U1")), SeriesClass::convergent);
  EXPECT_EQ(class_of(u.rep("U2")), SeriesClass::convergent);
  EXPECT_EQ(class_of(u.rep("U3")), SeriesClass::formally_divergent);
}

TEST(Classify, PartiallyNullZeroPattern) {
  // 1/Γ(1/3 - 2n/3) vanishes at n = 2, 5, 8, ...
  SolutionSeries s = single(G(AffineForm(Rational(1, 3)) - sym("n") * Rational(2, 3), -1) * P("x", sym("n")));
  Classification c = classify_series(s);
  EXPECT_EQ(c.tag, SeriesClass::partially_null);
  EXPECT_EQ(pole_order(s.coeff, "n", 2), -1);
  EXPECT_EQ(pole_order(s.coeff, "n", 3), 0);
}

TEST(Classify, TerminatingSeries) {
  // (-2)_n vanishes for n >= 3.
  SolutionSeries s = single(G(sym("n") - AffineForm(2)) * G(AffineForm(-2), -1) * P("x", sym("n")));
  EXPECT_NE(classify_series(s).tag, SeriesClass::totally_divergent);
}

TEST(ToHyper, Exponential) {
  HyperForm h = to_hyper(single(P("z", sym("n"))));
  EXPECT_EQ(h.str(), "1 · 0F0(; ; -1 · z^(1))");
  ClosedForm cf = closed_form(h);
  ASSERT_EQ(cf.terms.size(), 1u);
  EXPECT_EQ(cf.terms[0].kind, ClosedFormTerm::Kind::Exp);
  EXPECT_NEAR(static_cast<double>(evaluate_closed_form(cf, {{"z", 0.7L}})), std::exp(-0.7), 1e-15);
}

TEST(ToHyper, BinomialSeries) {
  // Σ φ_n Γ(n + 1/2)/Γ(1/2) a^{-2n-1} = 1/sqrt(a^2 + 1).
  GammaProduct c = G(sym("n") + half(1)) * G(half(1), -1) * P("a", -2 * sym("n") - AffineForm(1));
  HyperForm h = to_hyper(single(c));
  EXPECT_EQ(h.str(), "1 · a^(-1) · 1F0(1/2; ; -1 · a^(-2))");
  ClosedForm cf = closed_form(h);
  EXPECT_EQ(cf.terms[0].kind, ClosedFormTerm::Kind::Pow1m);
  EXPECT_NEAR(static_cast<double>(evaluate_closed_form(cf, {{"a", 2}})), 1 / std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(static_cast<double>(direct_sum(c, {{"a", 2}}, 200)), 1 / std::sqrt(5.0), 1e-14);
}

TEST(ToHyper, TableEntries) {
  struct Case {
    GammaProduct coeff;
    ClosedFormTerm::Kind kind;
  };
  AffineForm n = sym("n");
  std::vector<Case> cases = {
      {G(n + half(1)) * G(n + AffineForm(1)) * G(n + half(3), -1) * P("z", n), ClosedFormTerm::Kind::AtanRatio},
      {G(n + AffineForm(1), 2) * G(n + AffineForm(2), -1) * P("z", n), ClosedFormTerm::Kind::LogRatio},
      {G(n + AffineForm(1), 2) * G(n + half(3), -1) * P("z", n), ClosedFormTerm::Kind::AsinRatio},
  };
  for (const auto& c : cases) {
    ClosedForm cf = closed_form(to_hyper(single(c.coeff)));
    ASSERT_EQ(cf.terms.size(), 1u);
    EXPECT_EQ(cf.terms[0].kind, c.kind) << cf.str();
    for (long double z : {0.1L, 0.45L, 0.8L}) {
      long double want = direct_sum(c.coeff, {{"z", z}}, 400);
      EXPECT_NEAR(static_cast<double>(evaluate_closed_form(cf, {{"z", z}})), static_cast<double>(want), 1e-13)
          << cf.str() << " at " << static_cast<double>(z);
    }
  }
}

TEST(ToHyper, PoleAtStartIsNotHypergeometric) {
  try {
    to_hyper(single(G(sym("n") - AffineForm(2), -1) * P("z", sym("n"))));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHypergeometric);
  }
}

TEST(ClosedForm, GaussAtUnitArgument) {
  HyperForm h = hyper({AffineForm(Rational(3, 10)), AffineForm(Rational(7, 10))}, {AffineForm(Rational(19, 10))},
                      GammaProduct());
  ClosedForm cf = closed_form(h);
  ASSERT_TRUE(cf.is_gamma_product());
  // mpmath: hyp2f1(0.3, 0.7, 1.9, 1).
  EXPECT_NEAR(static_cast<double>(evaluate_closed_form(cf, {})), 1.25277090187471124, 1e-14);
}

TEST(ClosedForm, PfaffReachesTable) {
  // 2F1(1/2, 1/2; 3/2; z) = asin(√z)/√z; for z < 0 that is asinh(√-z)/√-z.
  HyperForm h = hyper({half(1), half(1)}, {half(3)}, P("z", 1));
  ClosedForm cf = closed_form(h);
  ASSERT_EQ(cf.terms.size(), 1u);
  EXPECT_TRUE(cf.terms[0].pfaff);
  long double r = std::sqrt(0.4L);
  EXPECT_NEAR(static_cast<double>(evaluate_closed_form(cf, {{"z", -0.4L}})), static_cast<double>(std::asinh(r) / r),
              1e-15);
}

TEST(ClosedForm, TerminatingPolynomial) {
  // 2F1(-2, b; c; z) = 1 - 2bz/c + b(b+1)z^2/(c(c+1)).
  HyperForm h = hyper({AffineForm(-2), sym("b")}, {sym("c")}, P("z", 1));
  ClosedForm cf = closed_form(h);
  EXPECT_EQ(cf.terms.size(), 3u);
  RealPoint p{{"b", 0.3L}, {"c", 1.7L}, {"z", 0.9L}};
  long double want = 1 - 2 * 0.3L * 0.9L / 1.7L + 0.3L * 1.3L * 0.81L / (1.7L * 2.7L);
  EXPECT_NEAR(static_cast<double>(evaluate_closed_form(cf, p)), static_cast<double>(want), 1e-15);
}

TEST(ClosedForm, UnreducedStaysHypergeometric) {
  ClosedForm cf = closed_form(hyper({sym("a"), sym("b")}, {}, P("z", 1)));
  EXPECT_FALSE(cf.reduced());
}

TEST(NumericSum, KnownValues) {
  EXPECT_NEAR(static_cast<double>(numeric_sum(hyper({AffineForm(1), half(1)}, {half(3)}, GammaProduct(Rational(-1, 4))), {})),
              std::atan(0.5) / 0.5, 1e-16);
  EXPECT_NEAR(static_cast<double>(numeric_sum(hyper({}, {}, GammaProduct(Rational(-1))), {})), std::exp(-1.0), 1e-16);
}

TEST(NumericSum, RegionChecks) {
  EXPECT_THROW(numeric_sum(hyper({half(1)}, {}, GammaProduct(Rational(2))), {}), Error);
  try {
    numeric_sum(hyper({half(1), half(1)}, {}, GammaProduct(Rational(1, 10))), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutsideRegion);
  }
  try {
    numeric_sum(hyper({half(1)}, {AffineForm(-1)}, GammaProduct(Rational(1, 10))), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DomainError);
  }
}

TEST(Asymptotic, TricomiLargeArgument) {
  // U(1, 1, 10) from the formally divergent U3 series; mpmath: hyperu(1, 1, 10).
  CatalogEntry u = catalog_lookup("TricomiU", {AffineForm(1), AffineForm(1)});
  const SeriesRep& u3 = u.rep("U3");
  SolutionSeries s = single(u3.coeff * P("x", u3.xExponent), u3.indices[0]);
  EXPECT_EQ(classify_series(s).tag, SeriesClass::formally_divergent);
  AsymptoticValue v = asymptotic_truncate(to_hyper(s), {{"x", 10}}, 200);
  const long double want = 0.0915633339397880818760698L;
  EXPECT_GT(v.terms, 5);
  EXPECT_LT(v.errorBound, 1e-4L);
  EXPECT_LE(std::fabs(v.value - want), v.errorBound);
}

TEST(Asymptotic, NoDescent) {
  try {
    asymptotic_truncate(hyper({AffineForm(3), AffineForm(3)}, {}, GammaProduct(Rational(-1))), {}, 50);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoDescent);
  }
}

TEST(EpsilonLimit, RemovableSingularity) {
  // Γ(1+ε)Γ(1-ε) = πε/sin(πε) → 1.
  LimitValue v = epsilon_limit([](long double e) { return std::tgamma(1 + e) * std::tgamma(1 - e); });
  EXPECT_NEAR(static_cast<double>(v.value), 1.0, 1e-12);
  EXPECT_EQ(v.samples.size(), 7u);
  EXPECT_LT(v.residual, 1e-10L);
}

TEST(EpsilonLimit, K0SquaredFamily) {
  // Shaped like the deformed K0^2 value: π^2/4 · Γ(1 + ε/2)^2 / Γ(1 + ε).
  const long double target = M_PI * M_PI / 4;
  LimitValue v = epsilon_limit([&](long double e) {
    return target * std::tgamma(1 + e / 2) * std::tgamma(1 + e / 2) / std::tgamma(1 + e);
  });
  EXPECT_NEAR(static_cast<double>(v.value), static_cast<double>(target), 1e-12);
}

TEST(EpsilonLimit, GrowthIsReported) {
  try {
    epsilon_limit([](long double e) { return 1 / e; });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GrowthDetected);
  }
}

TEST(ShiftIndex, RoundTrip) {
  SolutionSeries s = single(G(sym("n") + half(1)) * P("z", sym("n")));
  SolutionSeries t = shift_index(shift_index(s, 2), -2);
  EXPECT_EQ(t.coeff, s.coeff);
  // Term n of s equals term n - 2 of the shifted series.
  SolutionSeries u = shift_index(s, 2);
  RealPoint p{{"z", 0.3L}};
  for (int n = 2; n < 6; ++n) {
    PointValue a = series_term(s.coeff, "n", n, p);
    PointValue b = series_term(u.coeff, u.freeIndices[0], n - 2, p);
    ASSERT_TRUE(a.finite() && b.finite());
    EXPECT_NEAR(static_cast<double>(a.value), static_cast<double>(b.value), 1e-15);
  }
}

TEST(ClosedForm, SubstituteAndExact) {
  ClosedForm cf = closed_form(hyper({sym("a")}, {}, GammaProduct(Rational(1, 2))));
  ASSERT_TRUE(cf.is_gamma_product());
  // (1 - 1/2)^{-a} = 2^a.
  auto exact = exact_closed_form(cf, {{"a", 3}});
  ASSERT_TRUE(exact);
  EXPECT_EQ(*exact, Rational(8));
  ClosedForm sub = substitute(cf, {{"a", AffineForm(2)}});
  EXPECT_NEAR(static_cast<double>(evaluate_closed_form(sub, {})), 4.0, 1e-15);
}
