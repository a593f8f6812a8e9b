#pragma once

// Dirac operator, representations of the algebra and gauge structure on
// H = l2(Z^n) (x) C^(2^m), all as exact ModeMaps.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ncspectral/clifford.hpp"
#include "ncspectral/mode_map.hpp"
#include "ncspectral/weyl.hpp"

namespace ncspectral::ops {

using weyl::DeformationMatrix;
using weyl::FourierElement;
using weyl::OneForm;

/// Torus data shared by every operator: Theta and the gamma matrices.
struct SpectralTriple {
  DeformationMatrix theta;
  clifford::GammaSet gammas;

  explicit SpectralTriple(DeformationMatrix th);
  int n() const noexcept { return theta.dim(); }
  int spinor_dim() const noexcept { return gammas.spinor_dim(); }
};

/// D(U_k (x) e_i) = k_mu U_k (x) gamma^mu e_i.
ModeMap dirac(const SpectralTriple& st);

/// L(a) (x) M and R(a) (x) M; M defaults to the identity.
ModeMap left_rep(const FourierElement& a, const SpectralTriple& st);
ModeMap right_rep(const FourierElement& a, const SpectralTriple& st);
ModeMap left_tensor(const FourierElement& a, const DeformationMatrix& theta,
                    const clifford::Matrix& m);
ModeMap right_tensor(const FourierElement& a, const DeformationMatrix& theta,
                     const clifford::Matrix& m);
/// delta_mu (x) M.
ModeMap derivation_tensor(int dim, int mu, const clifford::Matrix& m);

/// sum_alpha L(c_alpha) (x) gamma^alpha.
ModeMap clifford_left(const std::vector<FourierElement>& c, const SpectralTriple& st);
/// eps J (sum_alpha L(c_alpha) (x) gamma^alpha) J^-1 = -sum_alpha R(c_alpha^*) (x) gamma^alpha.
ModeMap j_conjugate(const std::vector<FourierElement>& c, const SpectralTriple& st);

/// A = L(-i A_alpha) (x) gamma^alpha.
ModeMap one_form_operator(const OneForm& A, const SpectralTriple& st);
/// D + A + eps J A J^-1.
ModeMap covariant_dirac(const OneForm& A, const SpectralTriple& st);
/// -i (delta_alpha + L(A_alpha) - R(A_alpha)) (x) gamma^alpha, assembled directly.
ModeMap covariant_dirac_explicit(const OneForm& A, const SpectralTriple& st);

/// Default probe set: all k with |k|_inf <= 2.
std::vector<Point> default_probe(int dim);

/// Deviation of L(U_k)[D, L(U_k^*)] from 1 (x) (-k_mu gamma^mu).
double pure_gauge_check(const Point& k, const SpectralTriple& st,
                        const std::vector<Point>& probe);
/// Size of U_k[D, U_k^*] + eps J U_k[D, U_k^*] J^-1 on the probe.
double pure_gauge_vanishing(const Point& k, const SpectralTriple& st,
                            const std::vector<Point>& probe);

/// max(|u u^* - 1|, |u^* u - 1|).
double unitarity_defect(const FourierElement& u, const DeformationMatrix& theta);
/// Throws Error{NotUnitary} if the defect exceeds tol.
void require_unitary(const FourierElement& u, const DeformationMatrix& theta, double tol = 1e-12);

/// gamma_u(A)_alpha = u delta_alpha(u^*) + u A_alpha u^*.
OneForm gauge_transform(const FourierElement& u, const OneForm& A,
                        const DeformationMatrix& theta);

/// V_u = L(u) R(u^*) (x) 1.
ModeMap gauge_unitary(const FourierElement& u, const SpectralTriple& st);
/// V_u T V_u^*.
ModeMap conjugate_by_Vu(const ModeMap& t, const FourierElement& u, const SpectralTriple& st);

/// Right side of the square identity:
/// -sum_a (delta_a + A~_a)^2 (x) 1 - 1/2 sum_ab (L(F_ab) - R(F_ab)) (x) gamma^ab.
ModeMap square_expansion_rhs(const OneForm& A, const SpectralTriple& st);
double square_expansion_check(const OneForm& A, const SpectralTriple& st,
                              const std::vector<Point>& probe);

struct KernelResult {
  std::size_t dimension = 0;
  /// Orthonormal kernel basis in window coordinates (point-major, spin-minor).
  Eigen::MatrixXcd vectors;
  /// True when the window is narrower than the operator's spread.
  bool flagged = false;
  double threshold = 0.0;
};

/// Eigenvectors with |lambda| < tol * max|lambda| on the window.
KernelResult kernel_projector(const ModeMap& t, const ModeWindow& w, double tol = 1e-10);
/// Projector onto the kernel as a ModeMap supported on the window.
ModeMap kernel_projector_map(const KernelResult& kr, const ModeWindow& w, int spinor_dim);

std::string spectrum_csv(const std::vector<double>& values);
nlohmann::json spectrum_json(const std::vector<double>& values);

}  // namespace ncspectral::ops
