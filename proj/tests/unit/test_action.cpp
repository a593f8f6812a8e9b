#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gen.hpp"
#include "ncspectral/action.hpp"
#include "ncspectral/diophantine.hpp"
#include "ncspectral/error.hpp"
#include "ncspectral/zeta.hpp"

using namespace ncspectral;
using namespace ncspectral::action;

namespace {

const double kSqrtPi = std::sqrt(kPi);

ops::SpectralTriple triple(int n) { return ops::SpectralTriple(DeformationMatrix::golden(n)); }

// Brute-force sum of 2^m phi(|k| / Lambda) over the box |k|_inf <= K.
double brute_action(const CutoffProfile& phi, double lambda, int n, int K) {
  double s = 0.0;
  if (n == 2) {
    for (int a = -K; a <= K; ++a) {
      for (int b = -K; b <= K; ++b) s += phi.of_square((double(a) * a + double(b) * b) / (lambda * lambda));
    }
    return 2.0 * s;
  }
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b)
      for (int c = -K; c <= K; ++c)
        for (int d = -K; d <= K; ++d)
          s += phi.of_square((double(a) * a + double(b) * b + double(c) * c + double(d) * d) / (lambda * lambda));
  return 4.0 * s;
}

}  // namespace

TEST(Cutoff, MomentsMatchClosedForms) {
  const auto g = CutoffProfile::gaussian();
  EXPECT_NEAR(moment(g, 1), kSqrtPi / 2, 1e-13);
  EXPECT_NEAR(moment(g, 2), 0.5, 1e-13);
  EXPECT_NEAR(moment(g, 4), 0.5, 1e-13);
  const auto sg = CutoffProfile::super_gaussian();
  EXPECT_NEAR(moment(sg, 2), kSqrtPi / 4, 1e-13);
  EXPECT_NEAR(moment(sg, 4), 0.25, 1e-13);
  const auto r = CutoffProfile::rational(3);
  EXPECT_NEAR(moment(r, 2), 0.25, 1e-12);
  EXPECT_NEAR(moment(r, 4), 0.25, 1e-12);
  for (int k = 1; k <= 5; ++k) {
    EXPECT_NEAR(moment(g, k), moment_closed_form(g, k), 1e-12 * moment_closed_form(g, k));
    EXPECT_NEAR(moment(r, k), moment_closed_form(r, k), 1e-11 * moment_closed_form(r, k));
  }
}

TEST(Cutoff, DivergentMomentAndParsing) {
  EXPECT_THROW(moment(CutoffProfile::rational(1), 2), Error);
  EXPECT_THROW(moment(CutoffProfile::gaussian(), 0), Error);
  EXPECT_EQ(CutoffProfile::parse("gaussian").kind(), CutoffProfile::Kind::Gaussian);
  EXPECT_EQ(CutoffProfile::parse("super-gaussian").kind(), CutoffProfile::Kind::SuperGaussian);
  const auto r = CutoffProfile::parse("rational:2.5");
  EXPECT_EQ(r.exponent(), 2.5);
  EXPECT_EQ(CutoffProfile::parse(r.name()).exponent(), 2.5);
  try {
    CutoffProfile::parse("boxcar");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }
  EXPECT_THROW(CutoffProfile::parse("rational:x"), Error);
}

TEST(Cutoff, RadiusBoundsProfile) {
  for (const auto& phi : {CutoffProfile::gaussian(), CutoffProfile::super_gaussian(), CutoffProfile::rational(3)}) {
    const double x = phi.cutoff_radius(1e-17);
    EXPECT_NEAR(phi(x), 1e-17, 1e-25);
  }
}

TEST(HeatTrace, FreeMatchesPoissonLeadingTerm) {
  const auto h = heat_trace_free(2, 0.01);
  EXPECT_NEAR(h.value.real(), 2 * kPi / 0.01, 1e-12 * 2 * kPi / 0.01);
  EXPECT_EQ(h.method, "exact-formula");
  const auto h4 = heat_trace_free(4, 0.05);
  EXPECT_NEAR(h4.value.real(), 4 * std::pow(kPi / 0.05, 2), 1e-12 * h4.value.real());
  EXPECT_NEAR(heat_trace_free(2, 50).value.real(), 2.0, 1e-15);
}

TEST(HeatTrace, FreeMatchesDirectSum) {
  for (double t : {0.3, 0.9, 1.7}) {
    double s = 0.0;
    for (int a = -40; a <= 40; ++a)
      for (int b = -40; b <= 40; ++b) s += std::exp(-t * (a * a + b * b));
    EXPECT_NEAR(heat_trace_free(2, t).value.real(), 2 * s, 1e-13 * 2 * s);
  }
}

TEST(HeatTrace, DenseWindowAgreesAtZeroPotential) {
  const auto st = triple(2);
  const auto h = heat_trace(OneForm::zero(2), st, 0.02, HeatMethod::DenseWindow);
  EXPECT_EQ(h.method, "dense-window");
  EXPECT_GT(h.basis, 0u);
  const double exact = heat_trace_free(2, 0.02).value.real();
  EXPECT_NEAR(h.value.real(), exact, 1e-12 * exact);
}

TEST(HeatTrace, Preconditions) {
  const auto st = triple(2);
  std::mt19937_64 rng(4);
  const auto A = gen::chain_one_form(rng, 2, 1);
  EXPECT_THROW(heat_trace(A, st, 0.1, HeatMethod::ExactFormula), Error);
  EXPECT_THROW(heat_trace_free(2, 0.0), Error);
  EXPECT_THROW(heat_trace(OneForm::zero(4), st, 0.1, HeatMethod::DenseWindow), Error);
}

TEST(HeatTrace, WindowGuard) {
  const auto st = triple(4);
  std::mt19937_64 rng(5);
  const auto A = gen::chain_one_form(rng, 4, 1);
  try {
    heat_trace(A, st, 1e-4, HeatMethod::DenseWindow);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Guard);
  }
}

TEST(SpectralAction, GaussianUsesHeatTracePath) {
  for (int n : {2, 4}) {
    for (double L : {6.0, 10.0, 24.0}) {
      EXPECT_EQ(spectral_action_free(CutoffProfile::gaussian(), L, n).value,
                heat_trace_free(n, 1.0 / (L * L)).value.real());
    }
  }
}

TEST(SpectralAction, LatticeCountsMatchBruteForce) {
  const auto sg = CutoffProfile::super_gaussian();
  const double s2 = spectral_action_free(sg, 7.0, 2).value;
  EXPECT_NEAR(s2, brute_action(sg, 7.0, 2, 30), 1e-12 * s2);
  const double s4 = spectral_action_free(sg, 3.0, 4).value;
  EXPECT_NEAR(s4, brute_action(sg, 3.0, 4, 12), 1e-12 * s4);
  const auto g = CutoffProfile::gaussian();
  EXPECT_NEAR(spectral_action_free(g, 2.0, 4).value, brute_action(g, 2.0, 4, 14), 1e-12 * brute_action(g, 2.0, 4, 14));
}

TEST(SpectralAction, RationalTailIncluded) {
  const auto r = CutoffProfile::rational(3);
  const double L = 4.0;
  // The box sum misses less than 2 * 2 pi L^6 / (4 K^4) beyond |k|_inf = K.
  const int K = 1500;
  const double box = brute_action(r, L, 2, K);
  const auto s = spectral_action_free(r, L, 2);
  EXPECT_NEAR(s.value, box, 1e-10 * s.value);
  EXPECT_THROW(spectral_action_free(CutoffProfile::rational(1), L, 2), Error);
  EXPECT_NO_THROW(spectral_action_free(CutoffProfile::rational(1.1), L, 2));
}

TEST(SpectralAction, GaugeInvarianceOnChains) {
  const auto st = triple(2);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    const auto A = gen::chain_one_form(rng, 2, 2);
    const auto u = gen::weyl_unitary(rng, 2, 3);
    const auto B = ops::gauge_transform(u, A, st.theta);
    for (const auto& phi : {CutoffProfile::gaussian(), CutoffProfile::super_gaussian()}) {
      const double a = spectral_action(phi, 10.0, A, st).value;
      const double b = spectral_action(phi, 10.0, B, st).value;
      EXPECT_NEAR(a, b, 1e-10 * a);
    }
  }
}

TEST(SpectralAction, SmallPotentialApproachesFree) {
  const auto st = triple(2);
  auto A = OneForm::from_modes(2, {{0, Point{0, 1}, Complex(1e-7, 0)}});
  const double a = spectral_action(CutoffProfile::gaussian(), 8.0, A, st).value;
  const double f = spectral_action_free(CutoffProfile::gaussian(), 8.0, 2).value;
  EXPECT_NEAR(a, f, 1e-9 * f);
}

TEST(Fit, RecoversSyntheticPolynomial) {
  const auto phi = CutoffProfile::gaussian();
  const auto grid = default_lambda_grid();
  std::vector<double> v;
  for (double L : grid) v.push_back(3 * L * L - 0.5 * L + 2 + 0.25 / L);
  const auto f = fit_values(phi, 2, grid, v);
  ASSERT_EQ(f.powers, (std::vector<int>{2, 1, 0, -1}));
  EXPECT_NEAR(f.raw[0], 3, 1e-10);
  EXPECT_NEAR(f.raw[1], -0.5, 1e-9);
  EXPECT_NEAR(f.raw[2], 2, 1e-8);
  EXPECT_NEAR(f.raw[3], 0.25, 1e-7);
  EXPECT_NEAR(f.coefficient(2), 6, 1e-10);
  EXPECT_NEAR(f.coefficient(1), -0.5 / (kSqrtPi / 2), 1e-9);
  EXPECT_NEAR(f.coefficient(0), 2, 1e-8);
  EXPECT_LT(f.residual_rms, 1e-9);
}

TEST(Fit, GridPreconditions) {
  const auto phi = CutoffProfile::gaussian();
  const auto st = triple(2);
  EXPECT_THROW(fit_expansion(phi, log_grid(6, 24, 4), OneForm::zero(2), st), Error);
  EXPECT_THROW(fit_expansion(phi, log_grid(6, 12, 8), OneForm::zero(2), st), Error);
  EXPECT_THROW(fit_values(phi, 2, {1, 2, 3}, {1, 2}), Error);
}

TEST(Fit, LeadingCoefficientsFreeTorus) {
  for (const auto& phi : {CutoffProfile::gaussian(), CutoffProfile::super_gaussian(), CutoffProfile::rational(3)}) {
    const auto f = fit_expansion(phi, default_lambda_grid(), OneForm::zero(2), triple(2));
    EXPECT_NEAR(f.coefficient(2), 4 * kPi, 1e-8 * 4 * kPi) << phi.name();
    EXPECT_LT(std::fabs(f.coefficient(1)), 1e-6) << phi.name();
    EXPECT_LT(std::fabs(f.coefficient(0)), 1e-6) << phi.name();
  }
  for (const auto& phi : {CutoffProfile::gaussian(), CutoffProfile::super_gaussian()}) {
    const auto f = fit_expansion(phi, default_lambda_grid(), OneForm::zero(4), triple(4));
    EXPECT_NEAR(f.coefficient(4), 8 * kPi * kPi, 1e-8 * 8 * kPi * kPi) << phi.name();
  }
}

TEST(Fit, MomentConsistencyGaussian) {
  const auto f2 = fit_expansion(CutoffProfile::gaussian(), log_grid(8, 32, 8), OneForm::zero(2), triple(2));
  EXPECT_NEAR(f2.raw[0], 2 * kPi, 1e-6 * 2 * kPi);
  const auto f4 = fit_expansion(CutoffProfile::gaussian(), log_grid(8, 32, 8), OneForm::zero(4), triple(4));
  EXPECT_NEAR(f4.raw[0], 4 * kPi * kPi, 1e-6 * 4 * kPi * kPi);
}

TEST(Fit, CosmologicalTermCovariant) {
  const auto st = triple(2);
  const auto A = OneForm::from_modes(2, {{0, Point{0, 1}, Complex(0.2, 0.1)}});
  const auto c = cosmological_term(A, st, log_grid(4, 16, 8));
  EXPECT_NEAR(c.target, 4 * kPi, 1e-12);
  EXPECT_NEAR(c.value, c.target, 2 * c.uncertainty);
  EXPECT_LT(c.uncertainty, 1e-4 * c.target);
  EXPECT_GT(c.fit.c_systematic[0], 0.0);
  const auto c0 = cosmological_term(OneForm::zero(2), st);
  EXPECT_NEAR(c0.value, 4 * kPi, 1e-8 * 4 * kPi);
}

TEST(TwistedTrace, UnitProbeIsFreeTrace) {
  const auto th = DeformationMatrix::golden(2);
  const auto u = FourierElement::unit(2);
  const auto tw = twisted_heat_trace(u, u, th, 0.03);
  EXPECT_EQ(tw.correction, Complex{});
  EXPECT_NEAR(tw.value.real(), heat_trace_free(2, 0.03).value.real(), 1e-12 * tw.value.real());
}

TEST(TwistedTrace, MatchesWeylProductOracle) {
  std::mt19937_64 rng(21);
  for (const auto& th : {DeformationMatrix::golden(2), DeformationMatrix::rational_planar(2, 7)}) {
    const auto a = gen::element(rng, 2, 4, 2);
    FourierElement b(2);
    for (const auto& [q, z] : a.terms()) b.add_term(-q, gen::complex(rng));
    b.add_term(Point{2, 2}, 1.0);
    const double t = 0.4;
    Complex oracle{};
    for (int i = -12; i <= 12; ++i) {
      for (int j = -12; j <= 12; ++j) {
        const Point k{i, j};
        const auto prod = weyl::multiply(weyl::multiply(a, FourierElement::weyl(k), th), b, th);
        oracle += 2.0 * prod.coeff(k) * std::exp(-t * (i * i + j * j));
      }
    }
    const auto tw = twisted_heat_trace(a, b, th, t);
    EXPECT_LT(std::abs(tw.value - oracle), 1e-12 * std::abs(oracle));
    EXPECT_LE(std::abs(tw.q0_term + tw.correction - tw.value), 1e-12 * std::abs(oracle));
    EXPECT_GT(std::abs(oracle), 1.0);
  }
}

TEST(TwistedTrace, SmallTDualForm) {
  // Resonant twist: theta = 2 pi / 3 and q = 3 e_2 give S_q = S_0.
  const auto th = DeformationMatrix::rational_planar(1, 3);
  const auto a = FourierElement::weyl(Point{0, 3});
  const auto b = FourierElement::weyl(Point{0, -3});
  const auto tw = twisted_heat_trace(a, b, th, 1e-3);
  EXPECT_NEAR(tw.value.real(), heat_trace_free(2, 1e-3).value.real(), 1e-12 * tw.value.real());
}

TEST(CorrectionScaling, OrderingAcrossFamilies) {
  const auto jc = dio::jarnik_construct(dio::Profile::parse("power:4"), 6);
  std::vector<ScalingEntry> fam{{"rational", DeformationMatrix::rational_planar(1, 3)},
                                {"golden", DeformationMatrix::golden(2)},
                                {"jarnik", DeformationMatrix::planar(2 * kPi * jc.cf.to_double())}};
  const auto rows = correction_scaling(fam, log_grid(1e-4, 1e-1, 10));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_FALSE(rows[0].exponentially_small);
  EXPECT_NEAR(rows[0].slope, -1.0, 0.1);
  EXPECT_TRUE(rows[1].exponentially_small);
  EXPECT_TRUE(std::isnan(rows[1].slope));
  EXPECT_FALSE(rows[2].exponentially_small);
  EXPECT_GT(rows[2].slope, rows[0].slope);
  EXPECT_LT(rows[2].slope, 0.0);
}

TEST(CorrectionScaling, GridChecks) {
  std::vector<ScalingEntry> fam{{"golden", DeformationMatrix::golden(2)}};
  EXPECT_THROW(correction_scaling(fam, log_grid(1e-4, 1e-1, 5)), Error);
  EXPECT_THROW(correction_scaling(fam, {1e-4, 2e-4, 3e-4, 4e-4, 5e-4, 6e-4}), Error);
  const auto [a, b] = correction_probe(2, 5);
  EXPECT_EQ(a.size(), 6u);
  EXPECT_EQ(b.coeff(Point{0, -5}), Complex(0.2));
}
