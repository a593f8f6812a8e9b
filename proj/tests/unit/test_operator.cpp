#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "gen.hpp"
#include "ncspectral/error.hpp"
#include "ncspectral/linalg.hpp"
#include "ncspectral/operator.hpp"

using namespace ncspectral;
using namespace ncspectral::ops;

namespace {

SpectralTriple triple2() { return SpectralTriple(DeformationMatrix::golden(2)); }
SpectralTriple triple4() { return SpectralTriple(DeformationMatrix::golden(4)); }

}  // namespace

TEST(Dirac, ZeroModeAndColumn) {
  const auto st = triple2();
  const auto d = dirac(st);
  EXPECT_TRUE(d.apply({0, 0}, 0).empty());
  EXPECT_TRUE(d.apply({0, 0}, 1).empty());
  for (int i = 0; i < 2; ++i) {
    const auto out = d.apply({1, 0}, i);
    for (const auto& o : out) {
      EXPECT_EQ(o.k, (Point{1, 0}));
      EXPECT_LT(std::abs(o.amp - st.gammas.gammas[0](o.spin, i)), 1e-15);
    }
  }
}

TEST(Dirac, WindowSpectrumIsPlusMinusNorm) {
  const auto st = triple2();
  const auto w = ModeWindow::box(2, 3);
  const auto sp = spectrum(dirac(st), w);
  std::vector<double> expected;
  for (const auto& k : w.points()) {
    const double r = std::sqrt(static_cast<double>(k.norm2()));
    expected.push_back(r);
    expected.push_back(-r);
  }
  std::sort(expected.begin(), expected.end());
  ASSERT_EQ(sp.values.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(sp.values[i], expected[i], 1e-13);
  EXPECT_EQ(sp.dropped, 0u);
}

TEST(Dirac, SmallWindowAndEmpty) {
  const auto st = triple2();
  const auto sp = spectrum(dirac(st), ModeWindow::box(2, 1));
  ASSERT_EQ(sp.values.size(), 18u);
  EXPECT_NEAR(sp.values[0], -std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(sp.values[4], -1.0, 1e-14);
  EXPECT_EQ(std::count_if(sp.values.begin(), sp.values.end(),
                          [](double v) { return std::abs(v) < 1e-14; }),
            2);
  EXPECT_TRUE(spectrum(dirac(st), ModeWindow::empty(2)).values.empty());
}

TEST(Dirac, MemoryGuard) {
  const auto st = triple2();
  EXPECT_THROW(assemble_dense(dirac(st), ModeWindow::box(2, 10), 100), Error);
  EXPECT_THROW(spectrum(dirac(st), ModeWindow::box(2, 10), 100), Error);
}

TEST(Representations, LeftRightBasics) {
  const auto st = triple2();
  const auto probe = default_probe(2);
  EXPECT_EQ(max_deviation(left_rep(weyl::FourierElement::unit(2), st),
                          ModeMap::identity(2, 2), probe),
            0.0);
  const Point q{1, 2}, k{-3, 1};
  const auto out = right_rep(weyl::FourierElement::weyl(q), st).apply(k, 1);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].k, k + q);
  EXPECT_LT(std::abs(out[0].amp - std::polar(1.0, -0.5 * st.theta.bilinear(k, q))), 1e-15);
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = gen::element(rng, 2, 3, 2), b = gen::element(rng, 2, 3, 2);
    const auto L = left_rep(a, st), R = right_rep(b, st);
    EXPECT_LT(max_deviation(L * R, R * L, probe), 1e-13);
  }
}

TEST(CovariantDirac, MatchesExplicitFormAndZeroForm) {
  for (const auto& st : {triple2(), triple4()}) {
    const int n = st.n();
    const auto probe = default_probe(n);
    EXPECT_EQ(max_deviation(covariant_dirac(weyl::OneForm::zero(n), st), dirac(st), probe), 0.0);
    std::mt19937_64 rng(22 + n);
    for (int trial = 0; trial < 5; ++trial) {
      const auto A = gen::one_form(rng, n, 3, 2);
      EXPECT_LT(max_deviation(covariant_dirac(A, st), covariant_dirac_explicit(A, st), probe),
                1e-14);
    }
  }
}

TEST(CovariantDirac, HermitianOnWindow) {
  const auto st = triple2();
  std::mt19937_64 rng(23);
  const auto A = gen::one_form(rng, 2, 4, 2);
  const auto dense = assemble_dense(covariant_dirac(A, st), ModeWindow::box(2, 6));
  EXPECT_LT(linalg::hermiticity_defect(dense.matrix), 1e-13);
  EXPECT_THROW(covariant_dirac(weyl::OneForm::zero(3), st), Error);
}

TEST(CovariantDirac, ChiralSymmetricSpectrum) {
  const auto st = triple2();
  std::mt19937_64 rng(24);
  const auto A = gen::one_form(rng, 2, 3, 1);
  const auto sp = spectrum(covariant_dirac(A, st), ModeWindow::ball(2, 6.5));
  const auto& v = sp.values;
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(v[i], -v[v.size() - 1 - i], 1e-12);
}

TEST(PureGauge, IdentityForSmallModes) {
  const auto st = triple2();
  const auto probe = default_probe(2);
  EXPECT_EQ(pure_gauge_check({0, 0}, st, probe), 0.0);
  EXPECT_LT(pure_gauge_check({1, 0}, st, probe), 1e-14);
  for (const auto& k : box_points(2, 5)) EXPECT_LT(pure_gauge_vanishing(k, st, probe), 1e-14);
  const auto st4 = triple4();
  EXPECT_LT(pure_gauge_check({1, -2, 0, 3}, st4, default_probe(4)), 1e-14);
}

TEST(GaugeTransform, BasicCases) {
  const auto th = DeformationMatrix::golden(2);
  std::mt19937_64 rng(25);
  const auto A = gen::one_form(rng, 2, 3, 2);
  const auto same = gauge_transform(weyl::FourierElement::unit(2), A, th);
  for (int a = 0; a < 2; ++a) EXPECT_LT(same.components[a].max_abs_diff(A.components[a]), 1e-15);
  const Point k{2, -1};
  const auto pg = gauge_transform(weyl::FourierElement::weyl(k), weyl::OneForm::zero(2), th);
  for (int a = 0; a < 2; ++a) {
    ASSERT_EQ(pg.components[a].size(), 1u);
    EXPECT_LT(std::abs(pg.components[a].coeff({0, 0}) - Complex(0, -double(k[a]))), 1e-15);
  }
  weyl::FourierElement notu = weyl::FourierElement::unit(2) + weyl::FourierElement::weyl({1, 0});
  EXPECT_THROW(gauge_transform(notu, A, th), Error);
}

TEST(GaugeTransform, Composition) {
  const auto th = DeformationMatrix::golden(2);
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 10; ++trial) {
    const auto A = gen::one_form(rng, 2, 3, 2);
    const auto u = weyl::FourierElement::weyl(gen::point(rng, 2, 3), std::polar(1.0, 0.3 * trial));
    const auto v = weyl::FourierElement::weyl(gen::point(rng, 2, 3), std::polar(1.0, -0.7 * trial));
    const auto lhs = gauge_transform(u, gauge_transform(v, A, th), th);
    const auto rhs = gauge_transform(weyl::multiply(u, v, th), A, th);
    for (int a = 0; a < 2; ++a) EXPECT_LT(lhs.components[a].max_abs_diff(rhs.components[a]), 1e-13);
  }
}

TEST(Covariance, ConjugationByVu) {
  const auto st = triple2();
  const auto probe = default_probe(2);
  const auto uk = weyl::FourierElement::weyl({1, 3});
  EXPECT_LT(max_deviation(conjugate_by_Vu(dirac(st), uk, st), dirac(st), probe), 1e-13);
  EXPECT_LT(max_deviation(conjugate_by_Vu(ModeMap::identity(2, 2), uk, st), ModeMap::identity(2, 2),
                          probe),
            1e-15);
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 5; ++trial) {
    const auto A = gen::one_form(rng, 2, 3, 2);
    const auto u = weyl::FourierElement::weyl({1, 1}, std::polar(1.0, 0.4));
    const auto lhs = conjugate_by_Vu(covariant_dirac(A, st), u, st);
    const auto rhs = covariant_dirac(gauge_transform(u, A, st.theta), st);
    EXPECT_LT(max_deviation(lhs, rhs, probe), 1e-13);
  }
}

TEST(SquareExpansion, FreeAndSingleMode) {
  const auto st2 = triple2();
  const auto d = dirac(st2);
  const auto out = (d * d).apply({2, -3}, 0);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_NEAR(out[0].amp.real(), 13.0, 1e-13);
  for (const auto& st : {triple2(), triple4()}) {
    const int n = st.n();
    weyl::OneForm A = weyl::OneForm::zero(n);
    Point k(n);
    k[1] = 1;
    A = weyl::OneForm::from_modes(n, {{0, k, Complex(0.3, 0.2)}});
    EXPECT_LT(square_expansion_check(A, st, default_probe(n)), 1e-13);
    std::mt19937_64 rng(28 + n);
    const auto B = gen::one_form(rng, n, 3, 1);
    EXPECT_LT(square_expansion_check(B, st, default_probe(n)), 1e-13);
  }
}

TEST(Kernel, DiracKernelDimension) {
  const auto st2 = triple2();
  auto kr = kernel_projector(dirac(st2), ModeWindow::box(2, 2));
  EXPECT_EQ(kr.dimension, 2u);
  EXPECT_FALSE(kr.flagged);
  const auto st4 = triple4();
  kr = kernel_projector(dirac(st4), ModeWindow::box(4, 1));
  EXPECT_EQ(kr.dimension, 4u);
  EXPECT_THROW(kernel_projector(dirac(st2), ModeWindow::empty(2)), Error);
}

TEST(Kernel, ZeroModesUnderPerturbation) {
  const auto st = triple2();
  const auto A = weyl::OneForm::from_modes(2, {{0, {1, 1}, Complex(0.2, 0.1)}});
  // D + A alone moves U_0 (x) e_i, while the symmetrized D_A keeps it.
  const auto dpa = dirac(st) + one_form_operator(A, st);
  const auto da = covariant_dirac(A, st);
  for (int s = 0; s < 2; ++s) {
    EXPECT_FALSE(dpa.apply({0, 0}, s).empty());
    EXPECT_TRUE(da.apply({0, 0}, s).empty());
  }
  const auto kr = kernel_projector(da, ModeWindow::box(2, 4));
  EXPECT_GE(kr.dimension, 2u);
  const auto p = kernel_projector_map(kr, ModeWindow::box(2, 4), 2);
  const auto out = p.apply({0, 0}, 0);
  double w = 0.0;
  for (const auto& o : out)
    if (o.k == Point{0, 0} && o.spin == 0) w = o.amp.real();
  EXPECT_NEAR(w, 1.0, 1e-10);
}

TEST(Export, SpectrumCsv) {
  const auto csv = spectrum_csv({-1.0, 0.5});
  EXPECT_EQ(csv, "eigenvalue\n-1\n0.5\n");
  EXPECT_EQ(spectrum_json({1.0})["count"], 1);
}
