#include "ncspectral/special.hpp"

#include <array>
#include <cmath>
#include <string>

#include "ncspectral/error.hpp"

namespace ncspectral::special {

namespace {

constexpr double kG = 7.0;
constexpr std::array<double, 9> kLanczos{
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

constexpr double kEulerGamma = 0.57721566490153286061;

bool nonpositive_integer(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

Complex gamma_right(Complex z) {
  z -= 1.0;
  Complex x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const Complex t = z + kG + 0.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

// E_{n}(x) = int_1^inf e^{-xu} u^{-n} du for integer n >= 1, x <= some moderate bound.
double expint_n_series(int n, double x) {
  double sum = 0.0;
  double fact = 1.0;  // k!
  double power = 1.0; // (-x)^k
  for (int k = 0; k < 400; ++k) {
    if (k > 0) {
      fact *= k;
      power *= -x;
    }
    if (k == n - 1) continue;
    const double term = power / ((k - n + 1) * fact);
    sum -= term;
    if (k > n + 2 && std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  double lead = 1.0;
  for (int k = 1; k <= n - 1; ++k) lead *= -x / k;
  return sum + lead * (-std::log(x) + digamma_int(n));
}

// Legendre continued fraction for x^-b Gamma(b, x) * e^x, modified Lentz.
Complex continued_fraction(Complex b, double x) {
  const double tiny = 1e-300;
  Complex bb = x + 1.0 - b;
  Complex c = 1.0 / tiny;
  Complex d = 1.0 / bb;
  Complex h = d;
  for (int i = 1; i < 100000; ++i) {
    const Complex an = -static_cast<double>(i) * (static_cast<double>(i) - b);
    bb += 2.0;
    d = an * d + bb;
    if (std::abs(d) < tiny) d = tiny;
    c = bb + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const Complex delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) return h;
  }
  throw Error(ErrorKind::PrecisionExhausted, "incomplete gamma continued fraction did not converge");
}

// sum_k x^k / (b)_{k+1}.
Complex lower_series(Complex b, double x) {
  Complex term = 1.0 / b;
  Complex sum = term;
  for (int k = 1; k < 100000; ++k) {
    term *= x / (b + static_cast<double>(k));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) return sum;
  }
  throw Error(ErrorKind::PrecisionExhausted, "incomplete gamma series did not converge");
}

}  // namespace

Complex gamma(Complex z) {
  if (nonpositive_integer(z)) throw Error(ErrorKind::Pole, "Gamma has a pole at a non-positive integer");
  if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * gamma_right(1.0 - z));
  return gamma_right(z);
}

Complex rgamma(Complex z) {
  if (nonpositive_integer(z)) return 0.0;
  if (z.real() < 0.5) return std::sin(kPi * z) * gamma_right(1.0 - z) / kPi;
  return 1.0 / gamma_right(z);
}

double digamma_int(int n) {
  if (n < 1) throw Error(ErrorKind::Pole, "digamma_int needs n >= 1");
  double s = -kEulerGamma;
  for (int k = 1; k < n; ++k) s += 1.0 / k;
  return s;
}

Complex upper_gamma_tail(Complex b, double x) {
  if (!(x > 0.0)) throw Error(ErrorKind::Precondition, "incomplete gamma needs x > 0");
  if (x >= std::max(1.0, b.real() + 1.0)) return std::exp(-x) * continued_fraction(b, x);
  const double nearest = std::round(b.real());
  if (nearest <= 0.0 && std::abs(b - Complex(nearest, 0.0)) < 1e-8) {
    return expint_n_series(static_cast<int>(1.0 - nearest), x);
  }
  return std::pow(Complex(x, 0.0), -b) * gamma(b) - std::exp(-x) * lower_series(b, x);
}

const std::vector<std::vector<double>>& hermite_table(int max_degree) {
  constexpr int kMaxHermite = 48;
  static const std::vector<std::vector<double>> table = [] {
    std::vector<std::vector<double>> t{{1.0}, {0.0, 2.0}};
    for (int r = 1; r < kMaxHermite; ++r) {
      std::vector<double> next(static_cast<std::size_t>(r + 2), 0.0);
      for (std::size_t j = 0; j < t[r].size(); ++j) next[j + 1] += 2.0 * t[r][j];
      for (std::size_t j = 0; j < t[r - 1].size(); ++j) next[j] -= 2.0 * r * t[r - 1][j];
      t.push_back(std::move(next));
    }
    return t;
  }();
  if (max_degree > kMaxHermite) {
    throw Error(ErrorKind::Unsupported, "Hermite table holds degrees up to 48");
  }
  return table;
}

double hermite(int r, double z) {
  if (r < 0) throw Error(ErrorKind::OutOfRange, "negative Hermite degree");
  double h0 = 1.0, h1 = 2.0 * z;
  if (r == 0) return h0;
  for (int k = 1; k < r; ++k) {
    const double h2 = 2.0 * z * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

}  // namespace ncspectral::special
