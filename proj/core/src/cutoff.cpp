#include "ncspectral/cutoff.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "ncspectral/error.hpp"

namespace ncspectral::action {

CutoffProfile CutoffProfile::rational(double r) {
  if (!(r > 0) || !std::isfinite(r)) throw Error(ErrorKind::Precondition, "rational profile needs r > 0");
  return CutoffProfile(Kind::Rational, r);
}

CutoffProfile CutoffProfile::parse(const std::string& s) {
  if (s == "gaussian") return gaussian();
  if (s == "super-gaussian") return super_gaussian();
  if (s.rfind("rational:", 0) == 0) {
    try {
      std::size_t pos = 0;
      const double r = std::stod(s.substr(9), &pos);
      if (pos == s.size() - 9) return rational(r);
    } catch (const std::invalid_argument&) {
    } catch (const std::out_of_range&) {
    }
  }
  throw Error(ErrorKind::Config, "unknown profile '" + s + "' (gaussian, super-gaussian, rational:<r>)");
}

std::string CutoffProfile::name() const {
  switch (kind_) {
    case Kind::Gaussian:
      return "gaussian";
    case Kind::SuperGaussian:
      return "super-gaussian";
    case Kind::Rational: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "rational:%.17g", r_);
      return buf;
    }
  }
  return "?";
}

double CutoffProfile::of_square(double x2) const {
  switch (kind_) {
    case Kind::Gaussian:
      return std::exp(-x2);
    case Kind::SuperGaussian:
      return std::exp(-x2 * x2);
    case Kind::Rational:
      return std::pow(1.0 + x2, -r_);
  }
  return 0.0;
}

double CutoffProfile::operator()(double x) const { return of_square(x * x); }

double CutoffProfile::cutoff_radius(double eps) const {
  const double L = -std::log(eps);
  switch (kind_) {
    case Kind::Gaussian:
      return std::sqrt(L);
    case Kind::SuperGaussian:
      return std::pow(L, 0.25);
    case Kind::Rational:
      return std::sqrt(std::expm1(L / r_));
  }
  return 0.0;
}

double moment_closed_form(const CutoffProfile& phi, int k) {
  if (k < 1) throw Error(ErrorKind::Precondition, "moments need k >= 1");
  const double h = 0.5 * k;
  switch (phi.kind()) {
    case CutoffProfile::Kind::Gaussian:
      return 0.5 * std::tgamma(h);
    case CutoffProfile::Kind::SuperGaussian:
      return 0.25 * std::tgamma(0.25 * k);
    case CutoffProfile::Kind::Rational: {
      const double r = phi.exponent();
      if (r <= h) return std::numeric_limits<double>::infinity();
      return 0.5 * std::exp(std::lgamma(h) + std::lgamma(r - h) - std::lgamma(r));
    }
  }
  return 0.0;
}

double moment(const CutoffProfile& phi, int k) {
  if (k < 1) throw Error(ErrorKind::Precondition, "moments need k >= 1");
  if (phi.kind() == CutoffProfile::Kind::Rational && phi.exponent() <= 0.5 * k) {
    throw Error(ErrorKind::Precondition, "moment " + std::to_string(k) + " of " + phi.name() +
                                             " diverges (needs r > k/2)");
  }
  boost::math::quadrature::exp_sinh<double> integrator;
  double err = 0.0, l1 = 0.0;
  const double v = integrator.integrate(
      [&](double u) {
        const double f = phi(u);
        return f == 0.0 ? 0.0 : f * std::pow(u, k - 1);
      }, 0.0, std::numeric_limits<double>::infinity(),
      1e-13, &err, &l1);
  if (!std::isfinite(v) || err > 1e-12 * std::fabs(v)) {
    throw Error(ErrorKind::Precondition, "moment " + std::to_string(k) + " of " + phi.name() +
                                             " did not converge (error estimate " + std::to_string(err) + ")");
  }
  return v;
}

}  // namespace ncspectral::action
