#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/special_functions/expint.hpp>

#include "ncspectral/error.hpp"
#include "ncspectral/polynomial.hpp"
#include "ncspectral/special.hpp"

using namespace ncspectral;
using namespace ncspectral::special;

namespace {

struct TailCase {
  Complex b;
  double x;
  Complex value;
};

// x^-b Gamma(b, x) at 30 digits (mpmath gammainc).
const TailCase kTailCases[] = {
    {{0.5, 0}, 0.05, {5.9594938235261038802, 0.0}},
    {{0.5, 0}, 0.4, {1.0399875383191152917, 0.0}},
    {{0.5, 0}, 1.0, {0.2788055852806619765, 0.0}},
    {{0.5, 0}, 3.0, {0.014639587483610874403, 0.0}},
    {{0.5, 0}, 12.0, {4.9291447811595742123e-7, 0.0}},
    {{0.5, 0}, 40.0, {1.0492816475897854267e-19, 0.0}},
    {{2, 0}, 0.05, {399.51635829029983941, 0.0}},
    {{2, 0}, 0.4, {5.8653004028118431931, 0.0}},
    {{2, 0}, 1.0, {0.73575888234288464319, 0.0}},
    {{2, 0}, 3.0, {0.022127585941272863546, 0.0}},
    {{2, 0}, 12.0, {5.5468583745324115877e-7, 0.0}},
    {{2, 0}, 40.0, {1.0886407779184696801e-19, 0.0}},
    {{-0.7, 0}, 0.05, {1.0693814117583023726, 0.0}},
    {{-0.7, 0}, 0.4, {0.45438632542860343591, 0.0}},
    {{-0.7, 0}, 1.0, {0.16516123160250590156, 0.0}},
    {{-0.7, 0}, 3.0, {0.011275576506901018791, 0.0}},
    {{-0.7, 0}, 12.0, {4.5212944806586439233e-7, 0.0}},
    {{-0.7, 0}, 40.0, {1.019743892932125328e-19, 0.0}},
    {{1.3, 2}, 0.05, {8.9574824097651764333, 2.3276921251452284573}},
    {{1.3, 2}, 0.4, {-0.58154587996482539558, 0.72804132508944646764}},
    {{1.3, 2}, 1.0, {0.10153312075553873944, 0.28324049389960195737}},
    {{1.3, 2}, 3.0, {0.014003565974121680317, 0.0083242192129456672585}},
    {{1.3, 2}, 12.0, {5.1217881490339999248e-7, 8.1067531471678823565e-8}},
    {{1.3, 2}, 40.0, {1.0674006908586227946e-19, 5.2469947992134909483e-21}},
    {{-2.5, -1}, 0.05, {0.32228897835114232369, -0.12357421022246786343}},
    {{-2.5, -1}, 0.4, {0.2003772741508101447, -0.061966370870128346416}},
    {{-2.5, -1}, 1.0, {0.091533115690813694895, -0.022303592782747479576}},
    {{-2.5, -1}, 3.0, {0.0080774674199974520933, -0.0012363820237840141439}},
    {{-2.5, -1}, 12.0, {4.0024698717458144902e-7, -2.4929206609932555659e-8}},
    {{-2.5, -1}, 40.0, {9.7788267475845814177e-20, -2.2060355797928729948e-21}},
    {{4, 0.5}, 0.05, {-489696.17148762805046, 786683.10431253132307}},
    {{4, 0.5}, 0.4, {104.87874107127981062, 200.38296796405290136}},
    {{4, 0.5}, 1.0, {4.5690956254779672703, 3.4271778644976888339}},
    {{4, 0.5}, 3.0, {0.046092115768884750654, 0.01099089519185230745}},
    {{4, 0.5}, 12.0, {6.6173728577057050262e-7, 3.1865176615420143571e-8}},
    {{4, 0.5}, 40.0, {1.1456356658658666932e-19, 1.5025717396258836419e-21}},
    {{0, 3}, 0.05, {-0.0026978777422944906868, 0.32923115630122597251}},
    {{0, 3}, 0.4, {0.021333862542156983319, 0.24040330715408537425}},
    {{0, 3}, 1.0, {0.05654849001627443386, 0.11885722146509182838}},
    {{0, 3}, 3.0, {0.009083186241808523042, 0.0065070336575316587821}},
    {{0, 3}, 12.0, {4.5470990541752902882e-7, 9.9224200237073592132e-8}},
    {{0, 3}, 40.0, {1.0316060805884886849e-19, 7.3821070291194251591e-21}},
};

}  // namespace

TEST(Gamma, RealAgreesWithStd) {
  for (double x : {0.1, 0.5, 1.0, 2.5, 7.3, 20.0, -0.5, -1.5, -3.7}) {
    EXPECT_NEAR(special::gamma(Complex(x)).real() / std::tgamma(x), 1.0, 2e-14) << x;
    EXPECT_NEAR(special::rgamma(Complex(x)).real() * std::tgamma(x), 1.0, 2e-14) << x;
  }
}

TEST(Gamma, ComplexIdentities) {
  for (double y : {0.3, 1.0, 4.0}) {
    const Complex z(0.5, y);
    EXPECT_NEAR(std::norm(gamma(z)) / (kPi / std::cosh(kPi * y)), 1.0, 1e-13);
    const Complex w(-1.3, y);
    EXPECT_LT(std::abs(gamma(w + 1.0) / (w * gamma(w)) - 1.0), 1e-13);
  }
}

TEST(Gamma, PolesAndReciprocal) {
  EXPECT_THROW(special::gamma(Complex(0.0)), Error);
  EXPECT_THROW(special::gamma(Complex(-3.0)), Error);
  EXPECT_EQ(rgamma(0.0), Complex{});
  EXPECT_EQ(rgamma(-4.0), Complex{});
  EXPECT_NEAR(digamma_int(1), -0.57721566490153286, 1e-16);
  EXPECT_NEAR(digamma_int(4), -0.57721566490153286 + 1.0 + 0.5 + 1.0 / 3.0, 1e-15);
}

TEST(UpperGammaTail, AgainstReferenceValues) {
  for (const auto& c : kTailCases) {
    const Complex got = upper_gamma_tail(c.b, c.x);
    EXPECT_LT(std::abs(got - c.value), 1e-14 * std::max(1e-3, std::abs(c.value)))
        << "b=" << c.b << " x=" << c.x;
  }
}

TEST(UpperGammaTail, IntegerOrdersMatchExpint) {
  for (int j = 0; j <= 4; ++j) {
    for (double x : {0.01, 0.3, 0.9, 2.0, 9.0}) {
      const double want = boost::math::expint(j + 1, x);
      EXPECT_NEAR(upper_gamma_tail(-double(j), x).real() / want, 1.0, 1e-13) << j << " " << x;
    }
  }
  EXPECT_THROW(upper_gamma_tail(1.0, 0.0), Error);
}

TEST(Hermite, TableMatchesRecurrence) {
  const auto& h = hermite_table(8);
  for (int r = 0; r <= 8; ++r) {
    for (double z : {-1.3, 0.0, 0.4, 2.2}) {
      double v = 0.0;
      for (std::size_t j = 0; j < h[r].size(); ++j) v += h[r][j] * std::pow(z, double(j));
      EXPECT_NEAR(v, hermite(r, z), 1e-10 * std::max(1.0, std::abs(v)));
    }
  }
  EXPECT_EQ(h[2][0], -2.0);
  EXPECT_EQ(h[3][3], 8.0);
}

TEST(Polynomial, ParseAndEvaluate) {
  const auto p = Polynomial::parse("k1^2*k2^2", 4);
  EXPECT_EQ(p.homogeneous_degree(), 4);
  EXPECT_EQ(p.evaluate({2, 3, 5, 7}), Complex(36.0));
  const auto q = Polynomial::parse(" 3*k1*k2 - k3^2 + 0.5*k2*k1", 3);
  EXPECT_EQ(q.terms().size(), 2u);
  EXPECT_EQ(q.evaluate({1, 2, 3}), Complex(3.5 * 2 - 9));
  EXPECT_EQ(Polynomial::parse("1", 2).constant_term(), Complex(1.0));
  EXPECT_FALSE(Polynomial::parse("k1 + k2^2", 2).is_homogeneous());
  EXPECT_THROW(Polynomial::parse("k1 + k2^2", 2).homogeneous_degree(), Error);
  EXPECT_THROW(Polynomial::parse("", 2), Error);
  EXPECT_THROW(Polynomial::parse("k3", 2), Error);
  EXPECT_THROW(Polynomial::parse("k1^", 2), Error);
  EXPECT_THROW(Polynomial::parse("k1 k2", 2), Error);
}

TEST(Polynomial, Arithmetic) {
  const auto a = Polynomial::variable(2, 0), b = Polynomial::variable(2, 1);
  const auto sq = (a + b) * (a + b);
  EXPECT_EQ(sq.evaluate({2, 3}), Complex(25.0));
  EXPECT_TRUE((sq - sq).is_zero());
  EXPECT_EQ(Polynomial::parse(sq.to_string(), 2).evaluate({2, 3}), Complex(25.0));
}
