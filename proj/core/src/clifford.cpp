#include "ncspectral/clifford.hpp"

#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "ncspectral/error.hpp"
#include "ncspectral/numeric.hpp"

namespace ncspectral::clifford {

namespace {

Matrix pauli(int which) {
  Matrix s(2, 2);
  switch (which) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, Complex(0, -1), Complex(0, 1), 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

std::vector<Matrix> gammas_for(int n) {
  if (n == 1) return {Matrix::Identity(1, 1)};
  if (n == 2) return {pauli(1), pauli(2)};
  const auto lower = gammas_for(n - 2);
  const auto d = lower.front().rows();
  std::vector<Matrix> out;
  for (const auto& g : lower) out.push_back(Eigen::kroneckerProduct(g, pauli(1)).eval());
  out.push_back(Eigen::kroneckerProduct(Matrix::Identity(d, d), pauli(2)).eval());
  out.push_back(Eigen::kroneckerProduct(Matrix::Identity(d, d), pauli(3)).eval());
  return out;
}

void require_supported(int n) {
  if (n < kMinDim || n > kMaxDim) {
    throw Error(ErrorKind::Unsupported,
                "gamma matrices are built for 1 <= n <= 6, got n = " + std::to_string(n));
  }
}

// Product of gammas selected by `pick`, in increasing axis order.
Matrix product(const std::vector<Matrix>& g, const std::vector<bool>& pick) {
  Matrix p = Matrix::Identity(g.front().rows(), g.front().cols());
  for (std::size_t a = 0; a < g.size(); ++a) {
    if (pick[a]) p = p * g[a];
  }
  return p;
}

int sign_of(double x) { return x < 0 ? -1 : 1; }

}  // namespace

ChargeConjugation charge_conjugation(int n) {
  require_supported(n);
  const auto g = gammas_for(n);
  std::vector<bool> imaginary(g.size()), real(g.size());
  int n_imag = 0;
  for (std::size_t a = 0; a < g.size(); ++a) {
    imaginary[a] = g[a].real().isZero(0.0) && !g[a].imag().isZero(0.0);
    real[a] = !imaginary[a];
    n_imag += imaginary[a] ? 1 : 0;
  }
  const int n_real = n - n_imag;
  // Imaginary product gives -eps = (-1)^n_imag, real product -eps = (-1)^(n_real-1).
  const int eps_imag = (n_imag % 2 == 0) ? -1 : 1;
  const int eps_real = ((n_real - 1) % 2 == 0) ? -1 : 1;
  if (n % 2 == 0 && eps_imag != 1) return {product(g, real), eps_real};
  return {product(g, imaginary), eps_imag};
}

GammaSet build_gamma(int n) {
  require_supported(n);
  GammaSet gs;
  gs.n = n;
  gs.m = n / 2;
  gs.gammas = gammas_for(n);
  if (n % 2 == 0) {
    Matrix p = Matrix::Identity(gs.spinor_dim(), gs.spinor_dim());
    for (const auto& g : gs.gammas) p = p * g;
    Complex phase = 1.0;
    for (int i = 0; i < gs.m; ++i) phase *= Complex(0, -1);
    gs.chirality = phase * p;
  }
  auto cc = charge_conjugation(n);
  gs.c0 = std::move(cc.c0);
  gs.epsilon = cc.epsilon;
  const Matrix sq = gs.c0 * gs.c0.conjugate();
  gs.c0_square = sign_of(sq(0, 0).real());
  return gs;
}

Matrix gamma_pair_symbol(int a1, int a2, const GammaSet& gs) {
  if (a1 < 0 || a2 < 0 || a1 >= gs.n || a2 >= gs.n) {
    throw Error(ErrorKind::OutOfRange, "gamma index out of range");
  }
  const auto& x = gs.gammas[static_cast<std::size_t>(a1)];
  const auto& y = gs.gammas[static_cast<std::size_t>(a2)];
  return 0.5 * (x * y - y * x);
}

double charge_conjugation_defect(const GammaSet& gs) {
  const Matrix inv = gs.c0.inverse();
  double m = 0.0;
  for (const auto& g : gs.gammas) {
    const Matrix r = gs.c0 * g.conjugate() * inv + static_cast<double>(gs.epsilon) * g;
    m = std::max(m, r.cwiseAbs().maxCoeff());
  }
  return m;
}

Matrix slash(const GammaSet& gs, const std::vector<double>& k) {
  if (static_cast<int>(k.size()) != gs.n) {
    throw Error(ErrorKind::DimensionMismatch, "slash: vector length differs from n");
  }
  Matrix s = Matrix::Zero(gs.spinor_dim(), gs.spinor_dim());
  for (int mu = 0; mu < gs.n; ++mu) s += k[static_cast<std::size_t>(mu)] * gs.gammas[mu];
  return s;
}

namespace {
nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}
}  // namespace

nlohmann::json GammaSet::to_json() const {
  nlohmann::json g = nlohmann::json::array();
  for (const auto& x : gammas) g.push_back(matrix_json(x));
  nlohmann::json j{{"n", n}, {"m", m}, {"gammas", g}, {"c0", matrix_json(c0)},
                   {"epsilon", epsilon}, {"c0_square", c0_square}};
  if (chirality.size() > 0) j["chirality"] = matrix_json(chirality);
  return j;
}

}  // namespace ncspectral::clifford
