#pragma once

// Exact linear operators on the basis {U_k (x) e_i}. A ModeMap stores a rule
// that sends one basis vector to a finite list of weighted basis vectors;
// truncation to a finite window happens only when a matrix is assembled.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "ncspectral/lattice.hpp"
#include "ncspectral/numeric.hpp"

namespace ncspectral::ops {

struct ModeAmp {
  Point k;
  int spin = 0;
  Complex amp;
};

/// Output sink for algebra-only rules: (k', amplitude) pairs.
using AlgebraTerms = std::vector<std::pair<Point, Complex>>;
using AlgebraRule = std::function<void(const Point& k, Complex scale, AlgebraTerms& out)>;

class ModeMap {
 public:
  using Rule =
      std::function<void(const Point& k, int spin, Complex scale, std::vector<ModeAmp>& out)>;

  ModeMap(int dim, int spinor_dim, std::int64_t spread, Rule rule);

  static ModeMap zero(int dim, int spinor_dim);
  static ModeMap identity(int dim, int spinor_dim);
  /// T (x) M where T acts on the algebra factor and M on spinors.
  static ModeMap algebra_tensor(int dim, const Eigen::MatrixXcd& spin_matrix,
                                std::int64_t spread, AlgebraRule rule);

  int dim() const noexcept { return dim_; }
  int spinor_dim() const noexcept { return spinor_dim_; }
  /// Bound on |k' - k|_inf over all outputs.
  std::int64_t spread() const noexcept { return spread_; }

  /// Appends scale * T(U_k (x) e_spin) to out without merging.
  void emit(const Point& k, int spin, Complex scale, std::vector<ModeAmp>& out) const;
  /// T(U_k (x) e_spin) with duplicate outputs merged, sorted by (k, spin).
  std::vector<ModeAmp> apply(const Point& k, int spin) const;

  friend ModeMap operator+(const ModeMap& a, const ModeMap& b);
  friend ModeMap operator-(const ModeMap& a, const ModeMap& b);
  friend ModeMap operator*(Complex s, const ModeMap& a);
  /// Composition: (a * b)(x) = a(b(x)).
  friend ModeMap operator*(const ModeMap& a, const ModeMap& b);

 private:
  int dim_;
  int spinor_dim_;
  std::int64_t spread_;
  std::shared_ptr<const Rule> rule_;
};

ModeMap commutator(const ModeMap& a, const ModeMap& b);

/// Sorts by (k, spin), sums duplicates and drops exact zeros.
void merge_outputs(std::vector<ModeAmp>& v);

enum class WindowShape { Box, Ball };

/// Finite set of lattice points used for truncation and probing.
class ModeWindow {
 public:
  ModeWindow(int dim, double radius, WindowShape shape);
  static ModeWindow box(int dim, std::int64_t K) {
    return ModeWindow(dim, static_cast<double>(K), WindowShape::Box);
  }
  static ModeWindow ball(int dim, double R) { return ModeWindow(dim, R, WindowShape::Ball); }
  static ModeWindow empty(int dim);

  int dim() const noexcept { return dim_; }
  double radius() const noexcept { return radius_; }
  WindowShape shape() const noexcept { return shape_; }
  const std::vector<Point>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  std::optional<std::size_t> index_of(const Point& k) const;
  /// Smallest distance from a point of the window to the outside, measured in
  /// the window's own norm; points with margin >= spread have no dropped outputs.
  double margin(const Point& k) const;

 private:
  int dim_;
  double radius_;
  WindowShape shape_;
  std::vector<Point> points_;
  std::unordered_map<Point, std::size_t, PointHash> index_;
};

inline constexpr std::size_t kDefaultBasisLimit = 200000;
inline constexpr std::size_t kDenseBlockLimit = 20000;

struct DenseMatrix {
  Eigen::MatrixXcd matrix;
  /// Number of nonzero outputs that left the window.
  std::size_t dropped = 0;
};

struct SparseMatrix {
  Eigen::SparseMatrix<Complex, Eigen::ColMajor, std::int64_t> matrix;
  std::size_t dropped = 0;
};

/// Basis order: point index major, spin minor.
DenseMatrix assemble_dense(const ModeMap& t, const ModeWindow& w,
                           std::size_t basis_limit = kDenseBlockLimit);
SparseMatrix assemble_sparse(const ModeMap& t, const ModeWindow& w,
                             std::size_t basis_limit = kDefaultBasisLimit);

/// Connected components of the coupling graph of a sparse matrix; each block
/// lists basis indices in increasing order.
std::vector<std::vector<std::int64_t>> coupling_blocks(const SparseMatrix& m);

struct Spectrum {
  std::vector<double> values;  // ascending
  std::size_t blocks = 0;
  std::size_t largest_block = 0;
  std::size_t dropped = 0;
};

/// Eigenvalues of the window truncation, diagonalized block by block.
/// Throws Error{Guard} if the window or any block is over its limit.
Spectrum spectrum(const ModeMap& t, const ModeWindow& w,
                  std::size_t basis_limit = kDefaultBasisLimit,
                  std::size_t block_limit = kDenseBlockLimit);

/// max |A(x) - B(x)| over all basis vectors x with k in probe, exact.
double max_deviation(const ModeMap& a, const ModeMap& b, const std::vector<Point>& probe);

struct StochasticTrace {
  double value = 0.0;
  double std_error = 0.0;
  int probes = 0;
};

/// Hutchinson estimate of tr f(H) for hermitian sparse H with Lanczos
/// quadrature per probe. Probe j draws Rademacher entries from seed + j.
StochasticTrace stochastic_trace(const SparseMatrix& h, const std::function<double(double)>& f,
                                 int probes, int lanczos_steps, std::uint64_t seed);

}  // namespace ncspectral::ops
