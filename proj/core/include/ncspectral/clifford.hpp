#pragma once

#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace ncspectral::clifford {

using Matrix = Eigen::MatrixXcd;

inline constexpr int kMinDim = 1;
inline constexpr int kMaxDim = 6;

/// Hermitian gamma matrices for dimension n together with chirality and the
/// charge-conjugation data.
///
/// c0 is the matrix part of the antilinear charge conjugation, so the relation
/// that holds is c0 * conj(gamma^a) * c0^-1 = -epsilon * gamma^a, and the
/// square of the antilinear map is c0 * conj(c0) = c0_square * Identity.
/// Computed values for the built-in representation:
///
///   n        1    2    3    4    5    6
///   eps     -1   +1   +1   +1   -1   +1
///   C0^2    +1   -1   -1   -1   -1   +1
struct GammaSet {
  int n = 0;
  int m = 0;
  std::vector<Matrix> gammas;
  Matrix chirality;  // empty for odd n
  Matrix c0;
  int epsilon = 1;
  int c0_square = 1;

  int spinor_dim() const noexcept { return 1 << m; }
  nlohmann::json to_json() const;
};

/// Recursive construction n -> n+2 from gamma^a (x) s1, 1 (x) s2, 1 (x) s3,
/// seeded by [1] for n = 1 and (s1, s2) for n = 2. Axes are 0-based.
GammaSet build_gamma(int n);

/// (gamma^a1 gamma^a2 - gamma^a2 gamma^a1) / 2.
Matrix gamma_pair_symbol(int a1, int a2, const GammaSet& gs);

struct ChargeConjugation {
  Matrix c0;
  int epsilon;
};

ChargeConjugation charge_conjugation(int n);

/// max over a of |c0 conj(gamma^a) c0^-1 + epsilon gamma^a|.
double charge_conjugation_defect(const GammaSet& gs);

/// sum_mu k_mu gamma^mu for real k.
Matrix slash(const GammaSet& gs, const std::vector<double>& k);

}  // namespace ncspectral::clifford
