#pragma once

// Twisted Epstein series f_a(s) = sum_{k != 0} P(k) |k|^-s exp(2 pi i k.a) with
// homogeneous polynomial P, continued meromorphically through a Mellin split
// at t = 1 and a Poisson-dual representation of the small-t theta sum.

#include <string>
#include <vector>

#include "ncspectral/numeric.hpp"
#include "ncspectral/polynomial.hpp"

namespace ncspectral::zeta {

inline constexpr int kMaxDegree = 6;

struct TwistedSeries {
  int n;
  Polynomial P;
  std::vector<double> a;  // empty means a = 0

  /// Throws Error{Precondition} if P is not homogeneous, Error{Unsupported}
  /// if its degree exceeds kMaxDegree, Error{DimensionMismatch} on sizes.
  TwistedSeries(int n, Polynomial P, std::vector<double> a = {});
  /// Z_n(s) = sum_{k != 0} |k|^-s.
  static TwistedSeries epstein(int n);

  int degree() const { return P.homogeneous_degree(); }
  /// a reduced into [0, 1)^n.
  std::vector<double> reduced_twist() const;
  bool integer_twist() const;
};

struct ContinuationResult {
  Complex s;
  Complex value;
  double est_error = 0.0;
  std::string method;
};

/// sum_{k != 0} P(k) exp(2 pi i k.a - t |k|^2), summed directly.
Complex theta_sum(const TwistedSeries& f, double t);
/// The same quantity from the Hermite-weighted dual sum over m in Z^n.
Complex poisson_dual(const TwistedSeries& f, double t);
/// sum_{k != 0} |P|(k) exp(-t |k|^2) with |P| the coefficientwise modulus:
/// the scale against which the two representations are compared.
double theta_mass(const TwistedSeries& f, double t);

ContinuationResult evaluate(const TwistedSeries& f, Complex s);

/// Residue at s0 = n + p; 0 for a non-integer twist. Throws Error{Precondition}
/// for any other s0.
Complex residue(const TwistedSeries& f, Complex s0);

struct ShiftedResidue {
  Complex value;
  bool pole = false;
};

/// Res_{s=0} sum_{k != 0} P(k) |k|^-(s + c); a pole only when c = n + p.
ShiftedResidue residue_shifted(int n, const Polynomial& P, double c);

/// int_{S^(n-1)} P(u) dS(u) by the monomial moment formula.
Complex sphere_integral(const Polynomial& P);

/// zeta_D(s) = 2^m Z_n(s) + 2^m.
ContinuationResult zeta_D(Complex s, int n);
/// Res_{s=n} zeta_D = 2^m vol(S^(n-1)).
double zeta_D_residue(int n);

struct FamilyTerm {
  Complex coeff;
  std::vector<double> twist;
};

struct FamilyResidue {
  Complex value;
  std::size_t resonant_terms = 0;
  /// Set when the caller could not certify the Diophantine hypothesis.
  bool uncertified = false;
};

/// (sum of coefficients whose twist lies in Z^n) * sphere_integral(P).
FamilyResidue twisted_family_residue(const std::vector<FamilyTerm>& terms, const Polynomial& P,
                                     bool diophantine_certified = true, double tol = 1e-9);

}  // namespace ncspectral::zeta
