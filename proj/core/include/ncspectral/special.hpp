#pragma once

#include <vector>

#include "ncspectral/numeric.hpp"

namespace ncspectral::special {

/// Gamma function for complex argument (Lanczos, g = 7, with reflection).
Complex gamma(Complex z);
/// 1 / Gamma(z); exactly zero at the non-positive integers.
Complex rgamma(Complex z);

/// psi(n) for integer n >= 1.
double digamma_int(int n);

/// E(b, x) = int_1^inf u^(b-1) e^(-x u) du = x^-b Gamma(b, x), for x > 0.
Complex upper_gamma_tail(Complex b, double x);

/// Coefficients h[r][j] of the physicists' Hermite polynomial H_r(z) = sum_j h[r][j] z^j.
const std::vector<std::vector<double>>& hermite_table(int max_degree);
double hermite(int r, double z);

}  // namespace ncspectral::special
