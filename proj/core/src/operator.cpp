#include "ncspectral/operator.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "ncspectral/error.hpp"
#include "ncspectral/linalg.hpp"

namespace ncspectral::ops {

namespace {

clifford::Matrix identity_spin(int sd) { return clifford::Matrix::Identity(sd, sd); }

void require_components(const OneForm& A, int n) {
  if (A.dim() != n) {
    throw Error(ErrorKind::DimensionMismatch, "one-form has " + std::to_string(A.dim()) +
                                                  " components, expected " + std::to_string(n));
  }
}

}  // namespace

SpectralTriple::SpectralTriple(DeformationMatrix th)
    : theta(std::move(th)), gammas(clifford::build_gamma(theta.dim())) {}

ModeMap dirac(const SpectralTriple& st) {
  const int n = st.n();
  ModeMap d = ModeMap::zero(n, st.spinor_dim());
  for (int mu = 0; mu < n; ++mu) {
    d = d + Complex(0, -1) * derivation_tensor(n, mu, st.gammas.gammas[mu]);
  }
  return d;
}

ModeMap left_tensor(const FourierElement& a, const DeformationMatrix& theta,
                    const clifford::Matrix& m) {
  if (a.dim() != theta.dim()) throw Error(ErrorKind::DimensionMismatch, "left_rep dimension");
  return ModeMap::algebra_tensor(
      a.dim(), m, a.spread(), [a, theta](const Point& k, Complex s, AlgebraTerms& out) {
        for (const auto& [q, c] : a.terms()) {
          out.emplace_back(q + k, s * c * std::polar(1.0, weyl::weyl_phase(q, k, theta)));
        }
      });
}

ModeMap right_tensor(const FourierElement& a, const DeformationMatrix& theta,
                     const clifford::Matrix& m) {
  if (a.dim() != theta.dim()) throw Error(ErrorKind::DimensionMismatch, "right_rep dimension");
  return ModeMap::algebra_tensor(
      a.dim(), m, a.spread(), [a, theta](const Point& k, Complex s, AlgebraTerms& out) {
        for (const auto& [q, c] : a.terms()) {
          out.emplace_back(k + q, s * c * std::polar(1.0, weyl::weyl_phase(k, q, theta)));
        }
      });
}

ModeMap left_rep(const FourierElement& a, const SpectralTriple& st) {
  return left_tensor(a, st.theta, identity_spin(st.spinor_dim()));
}

ModeMap right_rep(const FourierElement& a, const SpectralTriple& st) {
  return right_tensor(a, st.theta, identity_spin(st.spinor_dim()));
}

ModeMap derivation_tensor(int dim, int mu, const clifford::Matrix& m) {
  if (mu < 0 || mu >= dim) throw Error(ErrorKind::OutOfRange, "derivation axis");
  return ModeMap::algebra_tensor(dim, m, 0, [mu](const Point& k, Complex s, AlgebraTerms& out) {
    if (k[mu] != 0) out.emplace_back(k, s * Complex(0.0, static_cast<double>(k[mu])));
  });
}

ModeMap clifford_left(const std::vector<FourierElement>& c, const SpectralTriple& st) {
  ModeMap r = ModeMap::zero(st.n(), st.spinor_dim());
  for (std::size_t a = 0; a < c.size(); ++a) {
    if (!c[a].empty()) r = r + left_tensor(c[a], st.theta, st.gammas.gammas[a]);
  }
  return r;
}

ModeMap j_conjugate(const std::vector<FourierElement>& c, const SpectralTriple& st) {
  ModeMap r = ModeMap::zero(st.n(), st.spinor_dim());
  for (std::size_t a = 0; a < c.size(); ++a) {
    if (c[a].empty()) continue;
    r = r - right_tensor(weyl::adjoint(c[a]), st.theta, st.gammas.gammas[a]);
  }
  return r;
}

namespace {
std::vector<FourierElement> minus_i_times(const OneForm& A) {
  std::vector<FourierElement> c;
  for (const auto& x : A.components) c.push_back(Complex(0, -1) * x);
  return c;
}
}  // namespace

ModeMap one_form_operator(const OneForm& A, const SpectralTriple& st) {
  require_components(A, st.n());
  return clifford_left(minus_i_times(A), st);
}

ModeMap covariant_dirac(const OneForm& A, const SpectralTriple& st) {
  require_components(A, st.n());
  const auto c = minus_i_times(A);
  return dirac(st) + clifford_left(c, st) + j_conjugate(c, st);
}

ModeMap covariant_dirac_explicit(const OneForm& A, const SpectralTriple& st) {
  require_components(A, st.n());
  ModeMap r = ModeMap::zero(st.n(), st.spinor_dim());
  for (int a = 0; a < st.n(); ++a) {
    const auto& g = st.gammas.gammas[a];
    const auto& Aa = A.components[static_cast<std::size_t>(a)];
    ModeMap x = derivation_tensor(st.n(), a, g);
    if (!Aa.empty()) x = x + left_tensor(Aa, st.theta, g) - right_tensor(Aa, st.theta, g);
    r = r + Complex(0, -1) * x;
  }
  return r;
}

std::vector<Point> default_probe(int dim) { return box_points(dim, 2); }

double pure_gauge_check(const Point& k, const SpectralTriple& st,
                        const std::vector<Point>& probe) {
  const auto uk = FourierElement::weyl(k);
  const ModeMap lhs =
      left_rep(uk, st) * commutator(dirac(st), left_rep(weyl::adjoint(uk), st));
  const auto kint = k.to_vector();
  const std::vector<double> kv(kint.begin(), kint.end());
  const clifford::Matrix rhs_spin = -clifford::slash(st.gammas, kv);
  const ModeMap rhs = left_tensor(FourierElement::unit(st.n()), st.theta, rhs_spin);
  return max_deviation(lhs, rhs, probe);
}

double pure_gauge_vanishing(const Point& k, const SpectralTriple& st,
                            const std::vector<Point>& probe) {
  // u[D, u^*] = L(-i B_alpha) (x) gamma^alpha with B_alpha = u delta_alpha(u^*).
  const auto uk = FourierElement::weyl(k);
  OneForm B = gauge_transform(uk, OneForm::zero(st.n()), st.theta);
  const auto c = minus_i_times(B);
  const ModeMap sum = clifford_left(c, st) + j_conjugate(c, st);
  return max_deviation(sum, ModeMap::zero(st.n(), st.spinor_dim()), probe);
}

double unitarity_defect(const FourierElement& u, const DeformationMatrix& theta) {
  const auto one = FourierElement::unit(u.dim());
  const auto us = weyl::adjoint(u);
  return std::max(weyl::multiply(u, us, theta).max_abs_diff(one),
                  weyl::multiply(us, u, theta).max_abs_diff(one));
}

void require_unitary(const FourierElement& u, const DeformationMatrix& theta, double tol) {
  const double d = unitarity_defect(u, theta);
  if (!(d <= tol)) {
    throw Error(ErrorKind::NotUnitary, "element is not unitary (defect " + std::to_string(d) + ")");
  }
}

OneForm gauge_transform(const FourierElement& u, const OneForm& A,
                        const DeformationMatrix& theta) {
  require_components(A, theta.dim());
  require_unitary(u, theta);
  const auto us = weyl::adjoint(u);
  OneForm r;
  for (int a = 0; a < theta.dim(); ++a) {
    auto x = weyl::multiply(u, weyl::derivation(us, a), theta);
    x += weyl::multiply(weyl::multiply(u, A.components[static_cast<std::size_t>(a)], theta), us,
                        theta);
    r.components.push_back(std::move(x));
  }
  return r;
}

ModeMap gauge_unitary(const FourierElement& u, const SpectralTriple& st) {
  return left_rep(u, st) * right_rep(weyl::adjoint(u), st);
}

ModeMap conjugate_by_Vu(const ModeMap& t, const FourierElement& u, const SpectralTriple& st) {
  require_unitary(u, st.theta);
  const auto us = weyl::adjoint(u);
  const ModeMap v = gauge_unitary(u, st);
  const ModeMap vs = left_rep(us, st) * right_rep(u, st);
  return v * t * vs;
}

ModeMap square_expansion_rhs(const OneForm& A, const SpectralTriple& st) {
  require_components(A, st.n());
  const int n = st.n();
  const int sd = st.spinor_dim();
  const auto one = identity_spin(sd);
  std::vector<ModeMap> x;
  for (int a = 0; a < n; ++a) {
    const auto& Aa = A.components[static_cast<std::size_t>(a)];
    ModeMap xa = derivation_tensor(n, a, one);
    if (!Aa.empty()) xa = xa + left_tensor(Aa, st.theta, one) - right_tensor(Aa, st.theta, one);
    x.push_back(xa);
  }
  ModeMap r = ModeMap::zero(n, sd);
  for (int a = 0; a < n; ++a) r = r - x[a] * x[a];
  const auto F = weyl::field_strength(A, st.theta);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b || F[a][b].empty()) continue;
      const auto g = clifford::gamma_pair_symbol(a, b, st.gammas);
      r = r - Complex(0.5) * (left_tensor(F[a][b], st.theta, g) -
                              right_tensor(F[a][b], st.theta, g));
    }
  }
  return r;
}

double square_expansion_check(const OneForm& A, const SpectralTriple& st,
                              const std::vector<Point>& probe) {
  const ModeMap da = covariant_dirac(A, st);
  return max_deviation(da * da, square_expansion_rhs(A, st), probe);
}

KernelResult kernel_projector(const ModeMap& t, const ModeWindow& w, double tol) {
  if (w.size() == 0) {
    throw Error(ErrorKind::Precondition, "kernel search needs a non-empty window");
  }
  KernelResult kr;
  kr.flagged = w.radius() < static_cast<double>(t.spread());
  const auto dense = assemble_dense(t, w);
  const auto es = linalg::hermitian_eigensystem(dense.matrix);
  const double scale = es.values.cwiseAbs().maxCoeff();
  kr.threshold = tol * (scale > 0 ? scale : 1.0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    if (std::abs(es.values(i)) < kr.threshold) keep.push_back(i);
  }
  kr.dimension = keep.size();
  kr.vectors.resize(es.vectors.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    kr.vectors.col(static_cast<Eigen::Index>(j)) = es.vectors.col(keep[j]);
  }
  return kr;
}

ModeMap kernel_projector_map(const KernelResult& kr, const ModeWindow& w, int spinor_dim) {
  const Eigen::MatrixXcd p = kr.vectors * kr.vectors.adjoint();
  const auto radius = static_cast<std::int64_t>(std::ceil(2 * w.radius()));
  return ModeMap(w.dim(), spinor_dim, radius,
                 [p, w, spinor_dim](const Point& k, int spin, Complex s, std::vector<ModeAmp>& out) {
                   const auto idx = w.index_of(k);
                   if (!idx) return;
                   const auto col = static_cast<Eigen::Index>(*idx) * spinor_dim + spin;
                   for (Eigen::Index r = 0; r < p.rows(); ++r) {
                     if (p(r, col) == Complex{}) continue;
                     out.push_back({w.points()[static_cast<std::size_t>(r / spinor_dim)],
                                    static_cast<int>(r % spinor_dim), s * p(r, col)});
                   }
                 });
}

std::string spectrum_csv(const std::vector<double>& values) {
  std::string s = "eigenvalue\n";
  char buf[40];
  for (double v : values) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    s += buf;
  }
  return s;
}

nlohmann::json spectrum_json(const std::vector<double>& values) {
  return {{"count", values.size()}, {"eigenvalues", values}};
}

}  // namespace ncspectral::ops
