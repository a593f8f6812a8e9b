#pragma once

// Spectral-action numerics on the noncommutative torus: heat traces, the
// action Tr Phi(D_A / Lambda), power-law fits, twisted traces and the
// constant term through noncommutative integrals.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ncspectral/cutoff.hpp"
#include "ncspectral/mode_map.hpp"
#include "ncspectral/operator.hpp"
#include "ncspectral/symbol.hpp"

namespace ncspectral::action {

using ops::SpectralTriple;
using weyl::DeformationMatrix;
using weyl::FourierElement;
using weyl::OneForm;

enum class HeatMethod { ExactFormula, DenseWindow };

struct WindowOptions {
  /// Profile values below this are dropped when sizing the window.
  double tail_eps = 1e-17;
  std::size_t basis_limit = ops::kDefaultBasisLimit;
  std::size_t block_limit = ops::kDenseBlockLimit;
  /// Stochastic fallback for blocks above block_limit.
  int probes = 64;
  int lanczos_steps = 80;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct HeatSample {
  double t = 0.0;
  Complex value;
  double cutoff_radius = 0.0;
  double tail_bound = 0.0;
  double std_error = 0.0;  // nonzero only for stochastic estimates
  std::string method;
  std::size_t basis = 0;
};

/// Radius 1D sums and windows are cut at for a profile evaluated at D/Lambda.
double lattice_cutoff_radius(const CutoffProfile& phi, double lambda, double eps);

/// Tr e^{-t D^2} = 2^m (sum_j e^{-t j^2})^n for A = 0.
HeatSample heat_trace_free(int n, double t);
/// Tr e^{-t D_A^2}. ExactFormula requires A = 0.
HeatSample heat_trace(const OneForm& A, const SpectralTriple& st, double t, HeatMethod method,
                      const WindowOptions& opt = {});

struct ActionSample {
  double lambda = 0.0;
  double value = 0.0;
  double std_error = 0.0;
  double tail_bound = 0.0;
  std::string method;
};

/// Tr Phi(D / Lambda) from the exact lattice formula.
ActionSample spectral_action_free(const CutoffProfile& phi, double lambda, int n);
/// Tr Phi(D_A / Lambda); A = 0 takes the exact path, otherwise a dense window.
ActionSample spectral_action(const CutoffProfile& phi, double lambda, const OneForm& A,
                             const SpectralTriple& st, const WindowOptions& opt = {});
/// One window (sized for the largest Lambda) serves the whole grid.
std::vector<ActionSample> spectral_action_grid(const CutoffProfile& phi, const std::vector<double>& lambdas,
                                               const OneForm& A, const SpectralTriple& st,
                                               const WindowOptions& opt = {});

struct ExpansionFit {
  std::vector<double> lambdas;
  std::vector<double> values;
  std::vector<int> powers;               // n, n-1, ..., 0, -1
  std::vector<double> raw;               // coefficient of Lambda^power
  std::vector<double> raw_uncertainty;
  /// c_k = raw_k / Phi_k (k >= 1), raw_0 / Phi(0); indexed like powers without the guard term.
  std::vector<double> c;
  /// Statistical and systematic parts combined in quadrature.
  std::vector<double> c_uncertainty;
  /// Shift of c when a Lambda^-2 guard is added (0 without spare points).
  std::vector<double> c_systematic;
  double residual_rms = 0.0;
  double condition_number = 0.0;
  std::string profile;

  double coefficient(int k) const;
  double uncertainty(int k) const;
  nlohmann::json to_json() const;
};

/// Default grid: 8 log-spaced Lambda in [6, 24].
std::vector<double> default_lambda_grid();
std::vector<double> log_grid(double lo, double hi, int count);

/// Least-squares fit of S(Lambda) on Lambda^n..Lambda^0, Lambda^-1.
/// Throws Error{Precondition} for fewer than n+3 points, a spread below 4 or
/// a condition number above 1e10.
ExpansionFit fit_expansion(const CutoffProfile& phi, const std::vector<double>& lambdas, const OneForm& A,
                           const SpectralTriple& st, const WindowOptions& opt = {});
ExpansionFit fit_values(const CutoffProfile& phi, int n, const std::vector<double>& lambdas,
                        const std::vector<double>& values);

struct TwistedTrace {
  double t = 0.0;
  Complex value;       // Tr L(a) R(b) e^{-t D^2}
  Complex q0_term;     // a_0 b_0 Tr e^{-t D^2}
  Complex correction;  // value - q0_term
};

/// 2^m sum_q a_q b_{-q} S_q(t), S_q(t) = sum_k exp(-i q.Theta k - t |k|^2),
/// each S_q a product of 1D sums taken in direct or Poisson-dual form.
TwistedTrace twisted_heat_trace(const FourierElement& a, const FourierElement& b, const DeformationMatrix& theta,
                                double t);

struct ScalingEntry {
  std::string label;
  DeformationMatrix theta;
};

struct ScalingRow {
  std::string label;
  std::vector<double> t;
  std::vector<double> delta;  // |correction|
  std::vector<double> base;   // |q0 term|
  double slope = 0.0;         // d log|Delta| / d log t, NaN when exponentially small
  double intercept = 0.0;
  double r2 = 0.0;
  bool exponentially_small = false;
};

struct ScalingOptions {
  int qmax = 21;
  /// |Delta(t_min)| / |S_0(t_min)| below this flags the exponentially small regime.
  double noise_floor = 1e-12;
};

/// The probe pair a = U_0 + sum_{Q<=qmax} Q^-1 U_{Q e_n}, b = U_0 + sum Q^-1 U_{-Q e_n}.
std::pair<FourierElement, FourierElement> correction_probe(int n, int qmax);

/// Throws Error{Precondition} unless t_grid is log-spaced with >= 6 points.
std::vector<ScalingRow> correction_scaling(const std::vector<ScalingEntry>& family, const std::vector<double>& t_grid,
                                           const ScalingOptions& opt = {});

struct ConstantTerm {
  Complex value;
  std::vector<NcIntegral> terms;  // q = 1..n
  double truncation_error = 0.0;
  bool uncertified = false;
  Complex tau_ff;                 // sum over ordered (mu, nu) of tau(F_mu_nu F_mu_nu)
  /// -(4 pi^2 / 3) tau(FF) for n = 4, 0 for n = 2, empty otherwise.
  std::optional<Complex> target;

  nlohmann::json to_json() const;
};

/// zeta_{D_A}(0) - zeta_D(0) = sum_q ((-1)^q / q) nc_integral_power(A, q).
ConstantTerm constant_term(const OneForm& A, const SpectralTriple& st, const SymbolOptions& opt = {});

struct CosmologicalTerm {
  double value = 0.0;        // c_n from a gaussian fit
  double uncertainty = 0.0;
  double target = 0.0;       // 2^m vol(S^{n-1})
  ExpansionFit fit;
};

CosmologicalTerm cosmological_term(const OneForm& A, const SpectralTriple& st,
                                   const std::vector<double>& lambdas = default_lambda_grid(),
                                   const WindowOptions& opt = {});

}  // namespace ncspectral::action
