#include "ncspectral/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "ncspectral/error.hpp"
#include "ncspectral/lattice.hpp"
#include "ncspectral/special.hpp"

namespace ncspectral::zeta {

namespace {

// exp(-41) is about 1.6e-18.
constexpr double kTailLog = 41.0;

int total(const Polynomial::Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

Complex unit_phase(double frac_turns) { return std::polar(1.0, 2.0 * kPi * frac_turns); }

// k.a reduced modulo 1 before it becomes an angle.
double turns(const Point& k, const std::vector<double>& a) {
  double s = 0.0;
  for (int j = 0; j < k.dim(); ++j) {
    const double x = static_cast<double>(k[j]) * a[static_cast<std::size_t>(j)];
    s += x - std::floor(x);
  }
  return s - std::floor(s);
}

double pow_int(double x, int r) {
  double p = 1.0;
  for (int i = 0; i < r; ++i) p *= x;
  return p;
}

Complex pow_int(Complex x, int r) {
  Complex p = 1.0;
  for (int i = 0; i < r; ++i) p *= x;
  return p;
}

using Real = long double;
using ComplexL = std::complex<Real>;

// Direct 1D sums T_r(a, t) = sum_k k^r exp(2 pi i k a - t k^2) and their
// absolute-value counterparts, in extended precision so that products of
// factors close to 1 keep their small deviation.
struct Direct1D {
  ComplexL value;
  Real mass;
};

Direct1D direct_1d(int r, double a, double t) {
  std::int64_t K = 2;
  while (t * (static_cast<double>(K * K) - 1.0) - r * std::log(static_cast<double>(K)) < kTailLog) ++K;
  CompensatedSum<ComplexL> s;
  CompensatedSum<Real> m;
  const Real two_pi = 2.0L * std::acos(-1.0L);
  for (std::int64_t k = K; k >= 1; --k) {
    const Real kk = static_cast<Real>(k);
    const Real g = std::exp(-static_cast<Real>(t) * kk * kk);
    Real kr = 1.0L;
    for (int i = 0; i < r; ++i) kr *= kk;
    const Real x = kk * static_cast<Real>(a);
    const Real ang = two_pi * (x - std::floor(x));
    const ComplexL ph(std::cos(ang), std::sin(ang));
    const Real sign = (r % 2 == 0) ? 1.0L : -1.0L;
    s.add(kr * g * (ph + sign * std::conj(ph)));
    m.add(2.0L * kr * g);
  }
  if (r == 0) {
    s.add(1.0L);
    m.add(1.0L);
  }
  return {s.value(), m.value()};
}

Real hermite_l(int r, Real z) {
  Real h0 = 1.0L, h1 = 2.0L * z;
  if (r == 0) return h0;
  for (int k = 1; k < r; ++k) {
    const Real h2 = 2.0L * z * h1 - 2.0L * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

// sqrt(pi/t) (-i / (2 sqrt t))^r sum_m H_r(pi (m - a)/sqrt t) exp(-pi^2 (m - a)^2 / t).
ComplexL dual_1d(int r, double a, double t) {
  const Real pi = std::acos(-1.0L);
  const Real st = std::sqrt(static_cast<Real>(t));
  const double reach = std::sqrt(t * (kTailLog + 4.0 + r * std::log(2.0 + r + 1.0 / std::sqrt(t)))) / kPi;
  const auto M = static_cast<std::int64_t>(std::ceil(reach)) + r + 2;
  const auto centre = static_cast<std::int64_t>(std::floor(a));
  std::vector<Real> ys;
  for (std::int64_t m = centre - M; m <= centre + M + 1; ++m) {
    ys.push_back(static_cast<Real>(m) - static_cast<Real>(a));
  }
  // Largest |y| first so the smallest terms are added before the dominant ones.
  std::sort(ys.begin(), ys.end(), [](Real x, Real y) { return std::abs(x) > std::abs(y); });
  CompensatedSum<Real> s;
  for (Real y : ys) {
    const Real z = pi * y / st;
    s.add(hermite_l(r, z) * std::exp(-z * z));
  }
  ComplexL pre = std::sqrt(pi / static_cast<Real>(t));
  for (int i = 0; i < r; ++i) pre *= ComplexL(0.0L, -0.5L / st);
  return pre * s.value();
}

void require_positive_t(double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::Precondition, "theta sums need t > 0");
}

bool near_integer(double x, double tol) { return std::abs(x - std::round(x)) <= tol; }

}  // namespace

TwistedSeries::TwistedSeries(int n_, Polynomial P_, std::vector<double> a_)
    : n(n_), P(std::move(P_)), a(std::move(a_)) {
  if (P.dim() != n) throw Error(ErrorKind::DimensionMismatch, "polynomial dimension differs from n");
  if (a.empty()) a.assign(static_cast<std::size_t>(n), 0.0);
  if (static_cast<int>(a.size()) != n) throw Error(ErrorKind::DimensionMismatch, "twist length");
  const int p = P.homogeneous_degree();
  if (p > kMaxDegree) {
    throw Error(ErrorKind::Unsupported, "polynomial degree " + std::to_string(p) + " exceeds 6");
  }
}

TwistedSeries TwistedSeries::epstein(int n) { return TwistedSeries(n, Polynomial::constant(n, 1.0)); }

std::vector<double> TwistedSeries::reduced_twist() const {
  std::vector<double> r(a);
  for (double& x : r) {
    x -= std::floor(x);
    if (x >= 1.0) x = 0.0;
  }
  return r;
}

bool TwistedSeries::integer_twist() const {
  return std::all_of(a.begin(), a.end(), [](double x) { return x == std::round(x); });
}

Complex theta_sum(const TwistedSeries& f, double t) {
  require_positive_t(t);
  const auto a = f.reduced_twist();
  std::map<std::pair<int, int>, ComplexL> cache;
  CompensatedSum<ComplexL> s;
  for (const auto& [e, c] : f.P.terms()) {
    ComplexL prod(c.real(), c.imag());
    for (int j = 0; j < f.n; ++j) {
      const auto key = std::make_pair(j, e[j]);
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, direct_1d(e[j], a[j], t).value).first;
      prod *= it->second;
    }
    s.add(prod);
  }
  const Complex p0 = f.P.constant_term();
  s.add(-ComplexL(p0.real(), p0.imag()));
  const ComplexL v = s.value();
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

double theta_mass(const TwistedSeries& f, double t) {
  require_positive_t(t);
  Real s = 0.0L;
  for (const auto& [e, c] : f.P.terms()) {
    Real prod = std::abs(c);
    for (int j = 0; j < f.n; ++j) prod *= direct_1d(e[j], 0.0, t).mass;
    s += prod;
  }
  return static_cast<double>(s - std::abs(f.P.constant_term()));
}

Complex poisson_dual(const TwistedSeries& f, double t) {
  require_positive_t(t);
  const auto a = f.reduced_twist();
  std::map<std::pair<int, int>, ComplexL> cache;
  CompensatedSum<ComplexL> s;
  for (const auto& [e, c] : f.P.terms()) {
    ComplexL prod(c.real(), c.imag());
    for (int j = 0; j < f.n; ++j) {
      const auto key = std::make_pair(j, e[j]);
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, dual_1d(e[j], a[j], t)).first;
      prod *= it->second;
    }
    s.add(prod);
  }
  const Complex p0 = f.P.constant_term();
  s.add(-ComplexL(p0.real(), p0.imag()));
  const ComplexL v = s.value();
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

namespace {

// C with pole term 2C / (s - n - p) for an integer twist.
Complex pole_coefficient(const TwistedSeries& f) {
  const int p = f.degree();
  Complex c{};
  for (const auto& [e, coeff] : f.P.terms()) {
    double h = 1.0;
    for (int x : e) h *= special::hermite(x, 0.0);
    c += coeff * h;
  }
  return std::pow(kPi, 0.5 * f.n) * pow_int(Complex(0.0, -0.5), p) * c;
}

// Smallest x with x - beta * ln x >= kTailLog + slack.
double gaussian_reach(double beta, double slack) {
  double x = 1.0;
  while (x - std::max(beta, 0.0) * std::log(x) < kTailLog + slack) x += 0.5;
  return x;
}

struct Accum {
  Complex value;
  double mass = 0.0;
};

Accum upper_sum(const TwistedSeries& f, const std::vector<double>& a, Complex s) {
  const int p = f.degree();
  const Complex b = 0.5 * s;
  const double x_max = gaussian_reach(b.real() - 1.0 + 0.5 * (p + f.n), 2.0);
  const auto points = ball_points(f.n, std::sqrt(x_max));
  std::map<std::int64_t, std::vector<const Point*>> shells;
  for (const auto& k : points) {
    if (!k.is_zero()) shells[k.norm2()].push_back(&k);
  }
  std::vector<std::pair<std::int64_t, std::vector<const Point*>>> list(shells.begin(), shells.end());
  std::vector<Complex> vals(list.size());
  std::vector<double> mass(list.size());
  parallel_for(list.size(), [&](std::size_t i) {
    CompensatedSum<Complex> shell;
    double m = 0.0;
    for (const Point* k : list[i].second) {
      std::vector<double> kv(static_cast<std::size_t>(f.n));
      for (int j = 0; j < f.n; ++j) kv[static_cast<std::size_t>(j)] = static_cast<double>((*k)[j]);
      const Complex pk = f.P.evaluate(kv);
      shell.add(pk * unit_phase(turns(*k, a)));
      m += std::abs(pk);
    }
    const Complex e = special::upper_gamma_tail(b, static_cast<double>(list[i].first));
    vals[i] = shell.value() * e;
    mass[i] = m * std::abs(e);
  });
  Accum acc;
  CompensatedSum<Complex> total_sum;
  for (std::size_t i = list.size(); i-- > 0;) {
    total_sum.add(vals[i]);
    acc.mass += mass[i];
  }
  acc.value = total_sum.value();
  return acc;
}

Accum dual_sum(const TwistedSeries& f, const std::vector<double>& a, Complex s) {
  const int p = f.degree();
  const auto& h = special::hermite_table(p);
  const double y2_max = gaussian_reach(0.5 * (f.n + 2 * p - s.real()), 4.0) / (kPi * kPi);
  const double y_max = std::sqrt(y2_max);
  const auto reach = static_cast<std::int64_t>(std::ceil(y_max)) + 1;
  const auto box = box_points(f.n, reach);
  const Complex prefactor = std::pow(kPi, 0.5 * f.n) * pow_int(Complex(0.0, -0.5), p);

  std::vector<std::vector<double>> ys;
  for (const auto& m : box) {
    std::vector<double> y(static_cast<std::size_t>(f.n));
    double y2 = 0.0;
    for (int j = 0; j < f.n; ++j) {
      y[static_cast<std::size_t>(j)] = static_cast<double>(m[j]) - a[static_cast<std::size_t>(j)];
      y2 += y[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(j)];
    }
    if (y2 == 0.0 || y2 > y2_max) continue;
    ys.push_back(std::move(y));
  }
  std::vector<Complex> vals(ys.size());
  std::vector<double> mass(ys.size());
  parallel_for(ys.size(), [&](std::size_t i) {
    const auto& y = ys[i];
    double y2 = 0.0;
    for (double v : y) y2 += v * v;
    // q[R] = sum_alpha c_alpha sum_{|r| = R} prod_j h[alpha_j][r_j] (pi y_j)^r_j
    std::vector<Complex> q(static_cast<std::size_t>(p + 1), 0.0);
    for (const auto& [e, c] : f.P.terms()) {
      std::vector<double> poly{1.0};
      for (int j = 0; j < f.n; ++j) {
        const int aj = e[static_cast<std::size_t>(j)];
        std::vector<double> next(poly.size() + static_cast<std::size_t>(aj), 0.0);
        const double py = kPi * y[static_cast<std::size_t>(j)];
        for (int r = 0; r <= aj; ++r) {
          const double w = h[aj][r] * pow_int(py, r);
          if (w == 0.0) continue;
          for (std::size_t u = 0; u < poly.size(); ++u) next[u + r] += poly[u] * w;
        }
        poly = std::move(next);
      }
      for (std::size_t r = 0; r < poly.size(); ++r) q[r] += c * poly[r];
    }
    CompensatedSum<Complex> acc;
    double m = 0.0;
    for (int R = 0; R <= p; ++R) {
      if (q[R] == Complex{}) continue;
      const Complex b = 0.5 * (Complex(f.n + p + R, 0.0) - s);
      const Complex e = special::upper_gamma_tail(b, kPi * kPi * y2);
      acc.add(q[R] * e);
      m += std::abs(q[R] * e);
    }
    vals[i] = prefactor * acc.value();
    mass[i] = std::abs(prefactor) * m;
  });
  std::vector<std::size_t> order(ys.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return mass[x] < mass[y]; });
  Accum out;
  CompensatedSum<Complex> total_sum;
  for (std::size_t i : order) {
    total_sum.add(vals[i]);
    out.mass += mass[i];
  }
  out.value = total_sum.value();
  return out;
}

}  // namespace

ContinuationResult evaluate(const TwistedSeries& f, Complex s) {
  const int p = f.degree();
  const auto a = f.reduced_twist();
  const bool integral = std::all_of(a.begin(), a.end(), [](double x) { return x == 0.0; });
  const double pole_at = f.n + p;
  ContinuationResult r;
  r.s = s;
  r.method = "mellin-split";

  Complex pole{};
  if (integral) {
    const Complex c = pole_coefficient(f);
    if (c != Complex{}) {
      if (std::abs(s - pole_at) < 1e-8) {
        throw Error(ErrorKind::Pole, "s = " + std::to_string(pole_at) +
                                         " is a pole of the series; use residue()");
      }
      pole = 2.0 * c / (s - pole_at);
    }
  }
  const Complex rg = special::rgamma(0.5 * s);
  const Complex p0 = f.P.constant_term();
  const Complex tail = p0 * special::rgamma(0.5 * s + 1.0);
  if (rg == Complex{}) {
    r.value = -tail;
    r.est_error = 1e-16 * std::abs(tail);
    r.method += "+gamma-zero";
    return r;
  }
  const Accum up = upper_sum(f, a, s);
  const Accum dual = dual_sum(f, a, s);
  r.value = rg * (up.value + dual.value + pole) - tail;
  r.est_error = 4e-16 * (std::abs(rg) * (up.mass + dual.mass + std::abs(pole)) + std::abs(tail));
  return r;
}

Complex residue(const TwistedSeries& f, Complex s0) {
  const int p = f.degree();
  if (std::abs(s0 - Complex(f.n + p, 0.0)) > 1e-12) {
    throw Error(ErrorKind::Precondition, "the only candidate pole is s = n + p = " +
                                             std::to_string(f.n + p));
  }
  const auto a = f.reduced_twist();
  if (!std::all_of(a.begin(), a.end(), [](double x) { return x == 0.0; })) return 0.0;
  return 2.0 * pole_coefficient(f) * special::rgamma(0.5 * (f.n + p));
}

ShiftedResidue residue_shifted(int n, const Polynomial& P, double c) {
  TwistedSeries f(n, P);
  if (std::abs(c - (n + f.degree())) > 1e-12) return {0.0, false};
  return {residue(f, static_cast<double>(n + f.degree())), true};
}

Complex sphere_integral(const Polynomial& P) {
  Complex s{};
  const int n = P.dim();
  for (const auto& [e, c] : P.terms()) {
    if (std::any_of(e.begin(), e.end(), [](int x) { return x % 2 != 0; })) continue;
    double lg = std::log(2.0) - std::lgamma(0.5 * (total(e) + n));
    for (int x : e) lg += std::lgamma(0.5 * (x + 1));
    s += c * std::exp(lg);
  }
  return s;
}

ContinuationResult zeta_D(Complex s, int n) {
  const double dim_spin = std::ldexp(1.0, n / 2);
  auto r = evaluate(TwistedSeries::epstein(n), s);
  r.value = dim_spin * r.value + dim_spin;
  r.est_error *= dim_spin;
  return r;
}

double zeta_D_residue(int n) {
  return std::ldexp(1.0, n / 2) * sphere_integral(Polynomial::constant(n, 1.0)).real();
}

FamilyResidue twisted_family_residue(const std::vector<FamilyTerm>& terms, const Polynomial& P,
                                     bool diophantine_certified, double tol) {
  FamilyResidue out;
  out.uncertified = !diophantine_certified;
  Complex c{};
  for (const auto& t : terms) {
    if (static_cast<int>(t.twist.size()) != P.dim()) {
      throw Error(ErrorKind::DimensionMismatch, "twist length differs from polynomial dimension");
    }
    if (std::all_of(t.twist.begin(), t.twist.end(), [tol](double x) { return near_integer(x, tol); })) {
      c += t.coeff;
      ++out.resonant_terms;
    }
  }
  out.value = c * sphere_integral(P);
  return out;
}

}  // namespace ncspectral::zeta
