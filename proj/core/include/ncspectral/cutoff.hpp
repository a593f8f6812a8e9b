#pragma once

// Even positive cutoff profiles Phi and their moments.

#include <string>

namespace ncspectral::action {

class CutoffProfile {
 public:
  enum class Kind { Gaussian, SuperGaussian, Rational };

  static CutoffProfile gaussian() { return CutoffProfile(Kind::Gaussian, 0.0); }
  static CutoffProfile super_gaussian() { return CutoffProfile(Kind::SuperGaussian, 0.0); }
  /// (1 + x^2)^-r, r > 0.
  static CutoffProfile rational(double r);
  /// "gaussian", "super-gaussian" or "rational:<r>".
  static CutoffProfile parse(const std::string& s);

  Kind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return r_; }
  std::string name() const;

  double operator()(double x) const;
  /// Phi as a function of x^2; the lattice sums only need this.
  double of_square(double x2) const;
  /// Smallest x with Phi(y) <= eps for all y >= x.
  double cutoff_radius(double eps) const;

 private:
  CutoffProfile(Kind k, double r) : kind_(k), r_(r) {}
  Kind kind_;
  double r_;
};

/// Phi_k = int_0^inf Phi(u) u^(k-1) du by exp-sinh quadrature to 1e-12 relative.
/// Throws Error{Precondition} for k < 1 or a divergent moment.
double moment(const CutoffProfile& phi, int k);

/// Closed form of the same moment, used as an oracle.
double moment_closed_form(const CutoffProfile& phi, int k);

}  // namespace ncspectral::action
