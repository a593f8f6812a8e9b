#include "ncspectral/weyl.hpp"

#include <algorithm>
#include <cmath>

#include "ncspectral/error.hpp"

namespace ncspectral::weyl {

namespace {

void require_dim(int expected, int got, const char* what) {
  if (expected != got) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": expected dimension " +
                                                  std::to_string(expected) + ", got " +
                                                  std::to_string(got));
  }
}

bool squarefree(int d) {
  for (int p = 2; p * p <= d; ++p) {
    if (d % (p * p) == 0) return false;
  }
  return true;
}

}  // namespace

DeformationMatrix::DeformationMatrix(int n, std::vector<double> row_major)
    : n_(n), m_(std::move(row_major)) {
  if (n < 1 || n > kMaxDim) {
    throw Error(ErrorKind::OutOfRange, "deformation matrix dimension out of range");
  }
  if (m_.size() != static_cast<std::size_t>(n * n)) {
    throw Error(ErrorKind::DimensionMismatch, "deformation matrix needs n*n entries");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if ((*this)(i, j) != -(*this)(j, i)) {
        throw Error(ErrorKind::Precondition, "deformation matrix is not skew-symmetric");
      }
    }
  }
}

DeformationMatrix DeformationMatrix::zero(int n) {
  return DeformationMatrix(n, std::vector<double>(static_cast<std::size_t>(n * n), 0.0));
}

DeformationMatrix DeformationMatrix::planar(double theta) {
  return DeformationMatrix(2, {0.0, theta, -theta, 0.0});
}

DeformationMatrix DeformationMatrix::golden(int n) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  if (n == 2) return planar(2.0 * kPi * g);
  std::vector<double> m(static_cast<std::size_t>(n * n), 0.0);
  int d = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      do {
        ++d;
      } while (d % 5 == 0 || !squarefree(d));
      const double x = g * std::sqrt(static_cast<double>(d));
      const double v = 2.0 * kPi * (x - std::floor(x));
      m[static_cast<std::size_t>(i * n + j)] = v;
      m[static_cast<std::size_t>(j * n + i)] = -v;
    }
  }
  return DeformationMatrix(n, std::move(m));
}

DeformationMatrix DeformationMatrix::rational_planar(std::int64_t p, std::int64_t q) {
  if (q == 0) throw Error(ErrorKind::Precondition, "rational preset needs q != 0");
  return planar(2.0 * kPi * static_cast<double>(p) / static_cast<double>(q));
}

bool DeformationMatrix::is_zero() const noexcept {
  return std::all_of(m_.begin(), m_.end(), [](double v) { return v == 0.0; });
}

double DeformationMatrix::bilinear(const Point& k, const Point& q) const {
  require_dim(n_, k.dim(), "bilinear form");
  require_dim(n_, q.dim(), "bilinear form");
  double s = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      const std::int64_t minor = k[i] * q[j] - k[j] * q[i];
      if (minor != 0) s += (*this)(i, j) * static_cast<double>(minor);
    }
  }
  return s;
}

std::vector<double> DeformationMatrix::transpose_apply(const Point& u) const {
  require_dim(n_, u.dim(), "transpose_apply");
  std::vector<double> out(static_cast<std::size_t>(n_), 0.0);
  for (int j = 0; j < n_; ++j) {
    for (int i = 0; i < n_; ++i) out[j] += (*this)(i, j) * static_cast<double>(u[i]);
  }
  return out;
}

nlohmann::json DeformationMatrix::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < n_; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < n_; ++j) row.push_back((*this)(i, j));
    rows.push_back(row);
  }
  return rows;
}

DeformationMatrix DeformationMatrix::from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorKind::Config, "theta matrix must be a non-empty array of rows");
  }
  const int n = static_cast<int>(j.size());
  std::vector<double> m;
  for (const auto& row : j) {
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw Error(ErrorKind::Config, "theta matrix must be square");
    }
    for (const auto& v : row) m.push_back(v.get<double>());
  }
  return DeformationMatrix(n, std::move(m));
}

double weyl_phase(const Point& k, const Point& q, const DeformationMatrix& theta) {
  return -0.5 * theta.bilinear(k, q);
}

// ---------------------------------------------------------------------------

FourierElement::FourierElement(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw Error(ErrorKind::OutOfRange, "Fourier element dimension out of range");
  }
}

FourierElement FourierElement::weyl(const Point& k, Complex c) {
  FourierElement a(k.dim());
  a.add_term(k, c);
  return a;
}

FourierElement FourierElement::unit(int dim) { return weyl(Point::zero(dim), 1.0); }

Complex FourierElement::coeff(const Point& k) const {
  const auto it = terms_.find(k);
  return it == terms_.end() ? Complex{} : it->second;
}

void FourierElement::add_term(const Point& k, Complex c) {
  require_dim(dim_, k.dim(), "add_term");
  if (c == Complex{}) return;
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex{}) terms_.erase(it);
  }
}

std::int64_t FourierElement::spread() const noexcept {
  std::int64_t s = 0;
  for (const auto& [k, c] : terms_) s = std::max(s, k.max_norm());
  return s;
}

FourierElement FourierElement::operator-() const {
  FourierElement r(dim_);
  for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
  return r;
}

FourierElement& FourierElement::operator+=(const FourierElement& other) {
  require_dim(dim_, other.dim_, "addition");
  for (const auto& [k, c] : other.terms_) add_term(k, c);
  return *this;
}

FourierElement& FourierElement::operator-=(const FourierElement& other) {
  require_dim(dim_, other.dim_, "subtraction");
  for (const auto& [k, c] : other.terms_) add_term(k, -c);
  return *this;
}

FourierElement& FourierElement::operator*=(Complex s) {
  if (s == Complex{}) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, c] : terms_) c *= s;
  return *this;
}

double FourierElement::max_abs_diff(const FourierElement& other) const {
  require_dim(dim_, other.dim_, "comparison");
  double m = 0.0;
  for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c - other.coeff(k)));
  for (const auto& [k, c] : other.terms_) m = std::max(m, std::abs(c - coeff(k)));
  return m;
}

FourierElement FourierElement::pruned(double threshold) const {
  if (threshold <= 0.0) return *this;
  FourierElement r(dim_);
  for (const auto& [k, c] : terms_) {
    if (std::abs(c) >= threshold) r.terms_.emplace(k, c);
  }
  return r;
}

nlohmann::json FourierElement::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [k, c] : terms_) {
    terms.push_back({{"k", k.to_vector()}, {"re", c.real()}, {"im", c.imag()}});
  }
  return {{"dim", dim_}, {"terms", terms}};
}

FourierElement FourierElement::from_json(const nlohmann::json& j) {
  if (!j.contains("dim") || !j.contains("terms")) {
    throw Error(ErrorKind::Config, "Fourier element JSON needs 'dim' and 'terms'");
  }
  FourierElement a(j.at("dim").get<int>());
  for (const auto& t : j.at("terms")) {
    const auto coords = t.at("k").get<std::vector<std::int64_t>>();
    a.add_term(Point(std::span<const std::int64_t>(coords)),
               Complex(t.value("re", 0.0), t.value("im", 0.0)));
  }
  return a;
}

// ---------------------------------------------------------------------------

FourierElement multiply(const FourierElement& a, const FourierElement& b,
                        const DeformationMatrix& theta, double prune_threshold) {
  require_dim(a.dim(), b.dim(), "multiply");
  require_dim(theta.dim(), a.dim(), "multiply");
  FourierElement r(a.dim());
  for (const auto& [k, ak] : a.terms()) {
    for (const auto& [q, bq] : b.terms()) {
      const double phase = weyl_phase(k, q, theta);
      r.add_term(k + q, ak * bq * std::polar(1.0, phase));
    }
  }
  return r.pruned(prune_threshold);
}

FourierElement adjoint(const FourierElement& a) {
  FourierElement r(a.dim());
  for (const auto& [k, c] : a.terms()) r.add_term(-k, std::conj(c));
  return r;
}

Complex trace(const FourierElement& a) { return a.coeff(Point::zero(a.dim())); }

FourierElement derivation(const FourierElement& a, int mu) {
  if (mu < 0 || mu >= a.dim()) {
    throw Error(ErrorKind::OutOfRange, "derivation axis " + std::to_string(mu) +
                                           " outside [0, " + std::to_string(a.dim()) + ")");
  }
  FourierElement r(a.dim());
  for (const auto& [k, c] : a.terms()) {
    r.add_term(k, Complex(0.0, static_cast<double>(k[mu])) * c);
  }
  return r;
}

FourierElement commutator(const FourierElement& a, const FourierElement& b,
                          const DeformationMatrix& theta) {
  return multiply(a, b, theta) - multiply(b, a, theta);
}

// ---------------------------------------------------------------------------

OneForm OneForm::zero(int n) {
  OneForm A;
  A.components.assign(static_cast<std::size_t>(n), FourierElement(n));
  return A;
}

OneForm OneForm::from_modes(int n, const std::vector<OneFormMode>& modes) {
  OneForm A = zero(n);
  for (const auto& m : modes) {
    if (m.axis < 0 || m.axis >= n) {
      throw Error(ErrorKind::OutOfRange, "one-form axis out of range");
    }
    auto& comp = A.components[static_cast<std::size_t>(m.axis)];
    comp.add_term(m.k, m.coeff);
    comp.add_term(-m.k, -std::conj(m.coeff));
  }
  return A;
}

std::int64_t OneForm::spread() const noexcept {
  std::int64_t s = 0;
  for (const auto& c : components) s = std::max(s, c.spread());
  return s;
}

bool OneForm::is_zero() const noexcept {
  return std::all_of(components.begin(), components.end(),
                     [](const FourierElement& c) { return c.empty(); });
}

double OneForm::anti_selfadjoint_defect() const {
  double m = 0.0;
  for (const auto& c : components) {
    m = std::max(m, (adjoint(c) + c).max_abs_diff(FourierElement(c.dim())));
  }
  return m;
}

FieldStrength field_strength(const OneForm& A, const DeformationMatrix& theta) {
  const int n = theta.dim();
  if (A.dim() != n) {
    throw Error(ErrorKind::DimensionMismatch,
                "one-form has " + std::to_string(A.dim()) + " components, torus dimension is " +
                    std::to_string(n));
  }
  FieldStrength F(static_cast<std::size_t>(n),
                  std::vector<FourierElement>(static_cast<std::size_t>(n), FourierElement(n)));
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const auto& Aa = A.components[static_cast<std::size_t>(a)];
      const auto& Ab = A.components[static_cast<std::size_t>(b)];
      FourierElement f = derivation(Ab, a) - derivation(Aa, b) + commutator(Aa, Ab, theta);
      F[a][b] = f;
      F[b][a] = -f;
    }
  }
  return F;
}

Complex trace_field_square(const FieldStrength& F, const DeformationMatrix& theta) {
  Complex s{};
  for (const auto& row : F) {
    for (const auto& f : row) s += trace(multiply(f, f, theta));
  }
  return s;
}

}  // namespace ncspectral::weyl
