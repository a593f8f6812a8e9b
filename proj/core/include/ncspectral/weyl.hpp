#pragma once

// Arithmetic in the smooth noncommutative torus with finitely supported
// Fourier coefficients. An element is a = sum_k a_k U_k with the product
// rule U_k U_q = exp(-i/2 k.Theta q) U_{k+q}.

#include <map>
#include <vector>

#include <nlohmann/json.hpp>

#include "ncspectral/lattice.hpp"
#include "ncspectral/numeric.hpp"

namespace ncspectral::weyl {

/// Skew-symmetric real n x n deformation matrix Theta.
class DeformationMatrix {
 public:
  /// Throws Error{Precondition} unless theta^T == -theta entrywise (exact).
  DeformationMatrix(int n, std::vector<double> row_major);

  static DeformationMatrix zero(int n);
  /// theta * [[0, 1], [-1, 0]].
  static DeformationMatrix planar(double theta);
  /// n = 2: planar(2 pi g) with g = (sqrt5 - 1)/2. n >= 3: upper entries
  /// 2 pi frac(g sqrt(d)) for squarefree d coprime to 5 (1, 2, 3, 6, 7, ...),
  /// which keeps {1, Theta_ij / 2pi} linearly independent over Q.
  static DeformationMatrix golden(int n);
  /// planar(2 pi p / q).
  static DeformationMatrix rational_planar(std::int64_t p, std::int64_t q);

  int dim() const noexcept { return n_; }
  double operator()(int i, int j) const { return m_[static_cast<std::size_t>(i * n_ + j)]; }
  const std::vector<double>& row_major() const noexcept { return m_; }
  bool is_zero() const noexcept;

  /// k . Theta q, accumulated from the exact integer minors k_i q_j - k_j q_i.
  double bilinear(const Point& k, const Point& q) const;
  /// Theta^T u as reals.
  std::vector<double> transpose_apply(const Point& u) const;

  nlohmann::json to_json() const;
  static DeformationMatrix from_json(const nlohmann::json& j);

 private:
  int n_;
  std::vector<double> m_;
};

/// Phase exponent with U_k U_q = exp(i * phase) U_{k+q}: returns -1/2 k.Theta q.
double weyl_phase(const Point& k, const Point& q, const DeformationMatrix& theta);

class FourierElement {
 public:
  using Terms = std::map<Point, Complex>;

  explicit FourierElement(int dim);
  /// c U_k
  static FourierElement weyl(const Point& k, Complex c = 1.0);
  /// U_0
  static FourierElement unit(int dim);

  int dim() const noexcept { return dim_; }
  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  Complex coeff(const Point& k) const;
  /// Accumulates c into the coefficient of U_k; exact zeros are erased.
  void add_term(const Point& k, Complex c);
  /// Largest |k|_inf over the support (0 for the empty element).
  std::int64_t spread() const noexcept;

  FourierElement operator-() const;
  FourierElement& operator+=(const FourierElement& other);
  FourierElement& operator-=(const FourierElement& other);
  FourierElement& operator*=(Complex s);
  friend FourierElement operator+(FourierElement a, const FourierElement& b) { return a += b; }
  friend FourierElement operator-(FourierElement a, const FourierElement& b) { return a -= b; }
  friend FourierElement operator*(Complex s, FourierElement a) { return a *= s; }

  /// max_k |a_k - b_k| over the union of supports.
  double max_abs_diff(const FourierElement& other) const;
  /// Drops coefficients with modulus below threshold (0 keeps everything).
  FourierElement pruned(double threshold) const;

  /// {"dim": n, "terms": [{"k": [...], "re": x, "im": y}, ...]} sorted by k.
  nlohmann::json to_json() const;
  static FourierElement from_json(const nlohmann::json& j);

 private:
  int dim_;
  Terms terms_;
};

FourierElement multiply(const FourierElement& a, const FourierElement& b,
                        const DeformationMatrix& theta, double prune_threshold = 0.0);
FourierElement adjoint(const FourierElement& a);
Complex trace(const FourierElement& a);
/// delta_mu(a) with (delta_mu a)_k = i k_mu a_k; mu is 0-based.
FourierElement derivation(const FourierElement& a, int mu);
FourierElement commutator(const FourierElement& a, const FourierElement& b,
                          const DeformationMatrix& theta);

/// One (axis, k, z) entry of a one-form specification; expands to
/// z U_k - conj(z) U_{-k} on component `axis` so the result is anti-selfadjoint.
struct OneFormMode {
  int axis = 0;
  Point k;
  Complex coeff;
};

/// Gauge potential components A_alpha, alpha = 0..n-1, each meant to be
/// anti-selfadjoint (A_alpha^* = -A_alpha).
struct OneForm {
  std::vector<FourierElement> components;

  static OneForm zero(int n);
  static OneForm from_modes(int n, const std::vector<OneFormMode>& modes);

  int dim() const noexcept { return static_cast<int>(components.size()); }
  std::int64_t spread() const noexcept;
  bool is_zero() const noexcept;
  /// max over alpha of |A_alpha^* + A_alpha|.
  double anti_selfadjoint_defect() const;
};

using FieldStrength = std::vector<std::vector<FourierElement>>;

/// F_ab = delta_a(A_b) - delta_b(A_a) + [A_a, A_b].
FieldStrength field_strength(const OneForm& A, const DeformationMatrix& theta);

/// sum over all ordered (mu, nu) of tau(F_mu_nu F_mu_nu).
Complex trace_field_square(const FieldStrength& F, const DeformationMatrix& theta);

}  // namespace ncspectral::weyl
