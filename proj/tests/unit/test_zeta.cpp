#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <boost/math/special_functions/zeta.hpp>

#include "ncspectral/error.hpp"
#include "ncspectral/lattice.hpp"
#include "ncspectral/zeta.hpp"

using namespace ncspectral;
using namespace ncspectral::zeta;

namespace {

constexpr double kCatalan = 0.91596559417721901505;

Polynomial poly(const std::string& s, int n) { return Polynomial::parse(s, n); }

// Alternating series sum_{k>=0} (-1)^k c_k by the Cohen-Rodriguez Villegas-Zagier scheme.
template <typename F>
double alternating(F c, int terms = 40) {
  const double d0 = std::pow(3.0 + std::sqrt(8.0), terms);
  const double d = (d0 + 1.0 / d0) / 2.0;
  double b = -1.0, cc = -d, s = 0.0;
  for (int k = 0; k < terms; ++k) {
    cc = b - cc;
    s += cc * c(k);
    b = (k + terms) * (k - terms) * b / ((k + 0.5) * (k + 1.0));
  }
  return s / d;
}

double dirichlet_beta(double s) {
  return alternating([s](int k) { return std::pow(2.0 * k + 1.0, -s); });
}

double eta(double s) {
  return alternating([s](int k) { return std::pow(k + 1.0, -s); });
}

// Direct lattice sum over |k|_inf <= R for large Re(s).
Complex direct(const TwistedSeries& f, Complex s, int R) {
  Complex sum{};
  for (const auto& k : box_points(f.n, R)) {
    if (k.is_zero()) continue;
    std::vector<double> kv;
    double ka = 0.0;
    for (int j = 0; j < f.n; ++j) {
      kv.push_back(double(k[j]));
      ka += double(k[j]) * f.a[j];
    }
    sum += f.P.evaluate(kv) * std::exp(Complex(0, 2 * kPi * ka)) *
           std::pow(double(k.norm2()), -0.5 * s);
  }
  return sum;
}

Complex direct_theta(const TwistedSeries& f, double t, int R) {
  Complex sum{};
  for (const auto& k : box_points(f.n, R)) {
    if (k.is_zero()) continue;
    std::vector<double> kv;
    double ka = 0.0;
    for (int j = 0; j < f.n; ++j) {
      kv.push_back(double(k[j]));
      ka += double(k[j]) * f.a[j];
    }
    sum += f.P.evaluate(kv) * std::exp(Complex(-t * double(k.norm2()), 2 * kPi * ka));
  }
  return sum;
}

}  // namespace

TEST(ThetaSum, DirectOracles) {
  const TwistedSeries f(1, poly("1", 1));
  const double want = 2 * (std::exp(-kPi) + std::exp(-4 * kPi) + std::exp(-9 * kPi) + std::exp(-16 * kPi));
  EXPECT_NEAR(theta_sum(f, kPi).real(), want, 1e-16);
  EXPECT_LT(std::abs(theta_sum(f, 60.0)), 1e-25);
  const TwistedSeries h(2, poly("k1^2", 2), {0.5, 0.0});
  EXPECT_LT(std::abs(theta_sum(h, 0.3) - direct_theta(h, 0.3, 30)), 1e-13);
  EXPECT_THROW(theta_sum(f, 0.0), Error);
}

TEST(PoissonDual, JacobiAndParity) {
  const TwistedSeries f(1, poly("1", 1));
  for (double t : {0.01, 0.5, 3.0}) {
    double dual = 0.0;
    for (int m = -50; m <= 50; ++m) dual += std::exp(-kPi * kPi * m * m / t);
    EXPECT_NEAR(poisson_dual(f, t).real(), -1.0 + std::sqrt(kPi / t) * dual, 1e-12);
  }
  const TwistedSeries odd(2, poly("k1", 2));
  EXPECT_LT(std::abs(poisson_dual(odd, 0.2)), 1e-14);
  EXPECT_LT(std::abs(theta_sum(odd, 0.2)), 1e-14);
}

TEST(PoissonDual, TwoSidedIdentity) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const TwistedSeries f(2, poly("k1*k2", 2), {u(rng), u(rng)});
    for (double t : {1e-3, 0.05, 1.0, 10.0}) {
      const double scale = theta_mass(f, t);
      EXPECT_LT(std::abs(theta_sum(f, t) - poisson_dual(f, t)), 1e-12 * scale) << t;
    }
  }
}

TEST(Evaluate, OneDimensionalZeta) {
  const auto f = TwistedSeries::epstein(1);
  EXPECT_NEAR(evaluate(f, 2.0).value.real(), kPi * kPi / 3, 1e-13);
  EXPECT_NEAR(evaluate(f, -1.0).value.real(), -1.0 / 6.0, 1e-13);
  EXPECT_NEAR(evaluate(f, 0.5).value.real(), 2 * boost::math::zeta(0.5), 1e-12);
  EXPECT_NEAR(evaluate(f, 0.0).value.real(), -1.0, 1e-15);
  EXPECT_NEAR(std::abs(evaluate(f, -2.0).value), 0.0, 1e-15);
  const TwistedSeries half(1, poly("1", 1), {0.5});
  for (double s : {0.3, 1.0, 2.7, -1.5})
    EXPECT_NEAR(evaluate(half, s).value.real(), -2 * eta(s), 1e-12) << s;
}

TEST(Evaluate, TwoAndFourDimensionalClosedForms) {
  const auto z2 = TwistedSeries::epstein(2);
  EXPECT_NEAR(evaluate(z2, 4.0).value.real(), 4 * (kPi * kPi / 6) * kCatalan, 1e-12);
  for (double s : {0.7, 3.0, 5.5, -1.3}) {
    const double want = 4 * boost::math::zeta(s / 2) * dirichlet_beta(s / 2);
    EXPECT_NEAR(evaluate(z2, s).value.real(), want, 1e-11 * std::max(1.0, std::abs(want))) << s;
  }
  EXPECT_NEAR(evaluate(z2, 0.0).value.real(), -1.0, 1e-14);
  const auto z4 = TwistedSeries::epstein(4);
  for (double s : {1.0, 3.0, 4.5, 7.0, -0.5}) {
    const double w = s / 2;
    const double want = 8 * (1 - std::pow(4.0, 1 - w)) * boost::math::zeta(w) * boost::math::zeta(w - 1);
    EXPECT_NEAR(evaluate(z4, s).value.real(), want, 1e-11 * std::max(1.0, std::abs(want))) << s;
  }
}

TEST(Evaluate, LargeRealPartMatchesDirectSum) {
  const std::vector<TwistedSeries> fs{
      TwistedSeries(2, poly("k1^2", 2), {0.2, 0.7}),
      TwistedSeries(2, poly("k1*k2 + k2^2", 2), {0.0, 0.0}),
      TwistedSeries(3, poly("k1*k3", 3), {0.1, 0.35, 0.9}),
      TwistedSeries(4, poly("1", 4), {0.0, 0.5, 0.25, 0.0}),
  };
  for (const auto& f : fs) {
    const double base = f.n + f.degree();
    for (const Complex s : {Complex(base + 16, 0.0), Complex(base + 18, 3.0)}) {
      const auto r = evaluate(f, s);
      const Complex d = direct(f, s, f.n <= 2 ? 40 : 12);
      EXPECT_LT(std::abs(r.value - d), 1e-10 * std::max(1.0, std::abs(d))) << s;
      EXPECT_TRUE(std::isfinite(r.est_error));
    }
  }
}

TEST(Evaluate, PolesAndHolomorphicTwists) {
  const auto z2 = TwistedSeries::epstein(2);
  EXPECT_THROW(evaluate(z2, 2.0), Error);
  const TwistedSeries tw(2, poly("1", 2), {0.3, 0.0});
  const auto lo = evaluate(tw, 2.0 - 1e-6).value, mid = evaluate(tw, 2.0).value,
             hi = evaluate(tw, 2.0 + 1e-6).value;
  EXPECT_TRUE(std::isfinite(mid.real()));
  EXPECT_LT(std::abs(lo - mid), 1e-4);
  EXPECT_LT(std::abs(hi - mid), 1e-4);
  // Odd numerator with integer twist has no pole.
  EXPECT_NO_THROW(evaluate(TwistedSeries(2, poly("k1", 2)), 3.0));
  EXPECT_THROW(TwistedSeries(2, poly("k1^7", 2)), Error);
}

TEST(Evaluate, TwistPeriodicityAndParity) {
  const TwistedSeries f(2, poly("k1^2", 2), {0.3, -0.2});
  const TwistedSeries g(2, poly("k1^2", 2), {2.3, 0.8});
  for (const Complex s : {Complex(1.0, 0.5), Complex(-0.5, 0.0), Complex(6.0, 1.0)})
    EXPECT_LT(std::abs(evaluate(f, s).value - evaluate(g, s).value), 1e-12);
  for (const auto& a : std::vector<std::vector<double>>{{0.0, 0.0}, {0.5, 0.0}, {0.5, 0.5}}) {
    const TwistedSeries odd(2, poly("k1^2*k2", 2), a);
    EXPECT_LT(std::abs(evaluate(odd, Complex(1.5, 0.3)).value), 1e-12);
  }
}

TEST(Residue, SphereVolumesAndExamples) {
  EXPECT_NEAR(residue(TwistedSeries::epstein(2), 2.0).real(), 2 * kPi, 1e-13);
  EXPECT_NEAR(residue(TwistedSeries::epstein(4), 4.0).real(), 2 * kPi * kPi, 1e-12);
  EXPECT_NEAR(residue(TwistedSeries(2, poly("k1^2", 2)), 4.0).real(), kPi, 1e-13);
  EXPECT_NEAR(std::abs(residue(TwistedSeries(2, poly("k1*k2", 2)), 4.0)), 0.0, 1e-15);
  EXPECT_THROW(residue(TwistedSeries::epstein(2), 3.0), Error);
  EXPECT_EQ(residue(TwistedSeries(2, poly("1", 2), {0.3, 0.0}), 2.0), Complex{});
  const auto r = residue_shifted(4, poly("k1^2*k2^2", 4), 8.0);
  EXPECT_TRUE(r.pole);
  EXPECT_NEAR(r.value.real(), kPi * kPi / 12, 1e-13);
  EXPECT_NEAR(residue_shifted(4, poly("k1^4", 4), 8.0).value.real(), kPi * kPi / 4, 1e-13);
  EXPECT_FALSE(residue_shifted(4, poly("k1^4", 4), 6.0).pole);
}

TEST(Residue, MatchesSphereIntegralForAllLowMonomials) {
  for (int n : {2, 3, 4}) {
    for (int p = 0; p <= 4; ++p) {
      // Every monomial of degree p.
      std::vector<int> e(static_cast<std::size_t>(n), 0);
      std::function<void(int, int)> rec = [&](int j, int left) {
        if (j == n - 1) {
          e[j] = left;
          const auto P = Polynomial::monomial(e);
          EXPECT_LT(std::abs(residue(TwistedSeries(n, P), double(n + p)) - sphere_integral(P)), 1e-12);
          return;
        }
        for (int x = 0; x <= left; ++x) {
          e[j] = x;
          rec(j + 1, left - x);
        }
      };
      rec(0, p);
    }
  }
}

TEST(SphereIntegral, Moments) {
  EXPECT_NEAR(sphere_integral(poly("1", 2)).real(), 2 * kPi, 1e-14);
  EXPECT_EQ(sphere_integral(poly("k1*k2", 3)), Complex{});
  EXPECT_NEAR(sphere_integral(poly("k1^2*k2^2", 4)).real(), 2 * kPi * kPi / 24, 1e-14);
}

TEST(ZetaD, VanishesAtZeroAndResidue) {
  EXPECT_LT(std::abs(zeta_D(0.0, 2).value), 1e-12);
  EXPECT_LT(std::abs(zeta_D(0.0, 4).value), 1e-12);
  EXPECT_NEAR(zeta_D_residue(2), 4 * kPi, 1e-13);
  EXPECT_NEAR(zeta_D_residue(4), 8 * kPi * kPi, 1e-12);
  EXPECT_THROW(zeta_D(2.0, 2), Error);
}

TEST(TwistedFamily, Linearity) {
  const auto P = poly("1", 2);
  EXPECT_NEAR(twisted_family_residue({{1.0, {0.0, 0.0}}}, P).value.real(), 2 * kPi, 1e-14);
  const double g = (std::sqrt(5.0) - 1) / 2;
  EXPECT_EQ(twisted_family_residue({{1.0, {g, 0.0}}}, P).value, Complex{});
  const auto r = twisted_family_residue({{2.5, {0.0, 1.0}}, {7.0, {g, 2 * g}}}, P, false);
  EXPECT_NEAR(r.value.real(), 2.5 * 2 * kPi, 1e-13);
  EXPECT_EQ(r.resonant_terms, 1u);
  EXPECT_TRUE(r.uncertified);
}
