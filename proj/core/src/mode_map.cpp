#include "ncspectral/mode_map.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "ncspectral/error.hpp"
#include "ncspectral/linalg.hpp"

namespace ncspectral::ops {

namespace {

bool mode_less(const ModeAmp& a, const ModeAmp& b) {
  if (a.k != b.k) return a.k < b.k;
  return a.spin < b.spin;
}

void require_compatible(const ModeMap& a, const ModeMap& b) {
  if (a.dim() != b.dim() || a.spinor_dim() != b.spinor_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "mode maps act on different spaces");
  }
}

}  // namespace

void merge_outputs(std::vector<ModeAmp>& v) {
  std::sort(v.begin(), v.end(), mode_less);
  std::size_t w = 0;
  for (std::size_t r = 0; r < v.size();) {
    ModeAmp acc = v[r];
    std::size_t s = r + 1;
    while (s < v.size() && v[s].k == acc.k && v[s].spin == acc.spin) acc.amp += v[s++].amp;
    if (acc.amp != Complex{}) v[w++] = acc;
    r = s;
  }
  v.resize(w);
}

ModeMap::ModeMap(int dim, int spinor_dim, std::int64_t spread, Rule rule)
    : dim_(dim), spinor_dim_(spinor_dim), spread_(spread),
      rule_(std::make_shared<const Rule>(std::move(rule))) {}

ModeMap ModeMap::zero(int dim, int spinor_dim) {
  return ModeMap(dim, spinor_dim, 0, [](const Point&, int, Complex, std::vector<ModeAmp>&) {});
}

ModeMap ModeMap::identity(int dim, int spinor_dim) {
  return ModeMap(dim, spinor_dim, 0,
                 [](const Point& k, int spin, Complex scale, std::vector<ModeAmp>& out) {
                   out.push_back({k, spin, scale});
                 });
}

ModeMap ModeMap::algebra_tensor(int dim, const Eigen::MatrixXcd& spin_matrix,
                                std::int64_t spread, AlgebraRule rule) {
  const int sd = static_cast<int>(spin_matrix.rows());
  return ModeMap(dim, sd, spread,
                 [m = spin_matrix, rule = std::move(rule), sd](
                     const Point& k, int spin, Complex scale, std::vector<ModeAmp>& out) {
                   AlgebraTerms terms;
                   rule(k, scale, terms);
                   for (const auto& [kk, c] : terms) {
                     for (int j = 0; j < sd; ++j) {
                       const Complex v = m(j, spin);
                       if (v != Complex{}) out.push_back({kk, j, c * v});
                     }
                   }
                 });
}

void ModeMap::emit(const Point& k, int spin, Complex scale, std::vector<ModeAmp>& out) const {
  (*rule_)(k, spin, scale, out);
}

std::vector<ModeAmp> ModeMap::apply(const Point& k, int spin) const {
  if (k.dim() != dim_) throw Error(ErrorKind::DimensionMismatch, "mode dimension mismatch");
  if (spin < 0 || spin >= spinor_dim_) throw Error(ErrorKind::OutOfRange, "spin index");
  std::vector<ModeAmp> out;
  emit(k, spin, 1.0, out);
  merge_outputs(out);
  return out;
}

ModeMap operator+(const ModeMap& a, const ModeMap& b) {
  require_compatible(a, b);
  return ModeMap(a.dim(), a.spinor_dim(), std::max(a.spread(), b.spread()),
                 [a, b](const Point& k, int spin, Complex s, std::vector<ModeAmp>& out) {
                   a.emit(k, spin, s, out);
                   b.emit(k, spin, s, out);
                 });
}

ModeMap operator-(const ModeMap& a, const ModeMap& b) { return a + Complex(-1.0) * b; }

ModeMap operator*(Complex c, const ModeMap& a) {
  return ModeMap(a.dim(), a.spinor_dim(), a.spread(),
                 [a, c](const Point& k, int spin, Complex s, std::vector<ModeAmp>& out) {
                   a.emit(k, spin, c * s, out);
                 });
}

ModeMap operator*(const ModeMap& a, const ModeMap& b) {
  require_compatible(a, b);
  return ModeMap(a.dim(), a.spinor_dim(), a.spread() + b.spread(),
                 [a, b](const Point& k, int spin, Complex s, std::vector<ModeAmp>& out) {
                   std::vector<ModeAmp> mid;
                   b.emit(k, spin, s, mid);
                   merge_outputs(mid);
                   for (const auto& x : mid) a.emit(x.k, x.spin, x.amp, out);
                 });
}

ModeMap commutator(const ModeMap& a, const ModeMap& b) { return a * b - b * a; }

// ---------------------------------------------------------------------------

ModeWindow::ModeWindow(int dim, double radius, WindowShape shape)
    : dim_(dim), radius_(radius), shape_(shape) {
  if (radius >= 0.0) {
    points_ = shape == WindowShape::Box
                  ? box_points(dim, static_cast<std::int64_t>(std::floor(radius)))
                  : ball_points(dim, radius);
  }
  index_.reserve(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) index_.emplace(points_[i], i);
}

ModeWindow ModeWindow::empty(int dim) { return ModeWindow(dim, -1.0, WindowShape::Box); }

std::optional<std::size_t> ModeWindow::index_of(const Point& k) const {
  const auto it = index_.find(k);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double ModeWindow::margin(const Point& k) const {
  if (shape_ == WindowShape::Box) return radius_ - static_cast<double>(k.max_norm());
  return radius_ - std::sqrt(static_cast<double>(k.norm2()));
}

// ---------------------------------------------------------------------------

namespace {

void guard(std::size_t basis, std::size_t limit, const char* what) {
  if (basis > limit) {
    throw Error(ErrorKind::Guard, std::string(what) + ": basis size " + std::to_string(basis) +
                                      " exceeds limit " + std::to_string(limit));
  }
}

struct Triplet {
  std::int64_t row;
  std::int64_t col;
  Complex value;
};

// Column-wise assembly into triplets; returns the dropped-output count.
std::size_t collect(const ModeMap& t, const ModeWindow& w, std::vector<Triplet>& trips) {
  const int sd = t.spinor_dim();
  const std::size_t np = w.size();
  std::vector<std::vector<Triplet>> per_point(np);
  std::vector<std::size_t> dropped(np, 0);
  parallel_for(np, [&](std::size_t p) {
    std::vector<ModeAmp> out;
    for (int s = 0; s < sd; ++s) {
      out.clear();
      t.emit(w.points()[p], s, 1.0, out);
      merge_outputs(out);
      const auto col = static_cast<std::int64_t>(p) * sd + s;
      for (const auto& o : out) {
        const auto idx = w.index_of(o.k);
        if (!idx) {
          ++dropped[p];
          continue;
        }
        per_point[p].push_back({static_cast<std::int64_t>(*idx) * sd + o.spin, col, o.amp});
      }
    }
  });
  std::size_t total = 0;
  for (std::size_t p = 0; p < np; ++p) {
    trips.insert(trips.end(), per_point[p].begin(), per_point[p].end());
    total += dropped[p];
  }
  return total;
}

void require_window(const ModeMap& t, const ModeWindow& w) {
  if (t.dim() != w.dim()) throw Error(ErrorKind::DimensionMismatch, "window dimension");
}

}  // namespace

DenseMatrix assemble_dense(const ModeMap& t, const ModeWindow& w, std::size_t basis_limit) {
  require_window(t, w);
  const std::size_t n = w.size() * static_cast<std::size_t>(t.spinor_dim());
  guard(n, basis_limit, "dense assembly");
  std::vector<Triplet> trips;
  DenseMatrix d;
  d.dropped = collect(t, w, trips);
  d.matrix = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const auto& tr : trips) d.matrix(tr.row, tr.col) += tr.value;
  return d;
}

SparseMatrix assemble_sparse(const ModeMap& t, const ModeWindow& w, std::size_t basis_limit) {
  require_window(t, w);
  const std::size_t n = w.size() * static_cast<std::size_t>(t.spinor_dim());
  guard(n, basis_limit, "sparse assembly");
  std::vector<Triplet> trips;
  SparseMatrix s;
  s.dropped = collect(t, w, trips);
  std::vector<Eigen::Triplet<Complex, std::int64_t>> et;
  et.reserve(trips.size());
  for (const auto& tr : trips) et.emplace_back(tr.row, tr.col, tr.value);
  s.matrix.resize(static_cast<std::int64_t>(n), static_cast<std::int64_t>(n));
  s.matrix.setFromTriplets(et.begin(), et.end());
  return s;
}

std::vector<std::vector<std::int64_t>> coupling_blocks(const SparseMatrix& m) {
  const auto n = m.matrix.cols();
  std::vector<std::int64_t> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::int64_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::int64_t c = 0; c < n; ++c) {
    for (decltype(m.matrix)::InnerIterator it(m.matrix, c); it; ++it) {
      if (it.value() == Complex{}) continue;
      const auto a = find(it.row()), b = find(c);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::unordered_map<std::int64_t, std::size_t> slot;
  std::vector<std::vector<std::int64_t>> blocks;
  for (std::int64_t i = 0; i < n; ++i) {
    const auto r = find(i);
    auto [it, inserted] = slot.try_emplace(r, blocks.size());
    if (inserted) blocks.emplace_back();
    blocks[it->second].push_back(i);
  }
  return blocks;
}

Spectrum spectrum(const ModeMap& t, const ModeWindow& w, std::size_t basis_limit,
                  std::size_t block_limit) {
  Spectrum sp;
  if (w.size() == 0) return sp;
  const auto sm = assemble_sparse(t, w, basis_limit);
  sp.dropped = sm.dropped;
  const auto blocks = coupling_blocks(sm);
  sp.blocks = blocks.size();
  for (const auto& b : blocks) sp.largest_block = std::max(sp.largest_block, b.size());
  guard(sp.largest_block, block_limit, "dense block");

  // Dense column access by block position.
  const auto& mat = sm.matrix;
  std::vector<std::vector<double>> per_block(blocks.size());
  parallel_for(blocks.size(), [&](std::size_t bi) {
    const auto& b = blocks[bi];
    const auto nb = static_cast<Eigen::Index>(b.size());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(nb, nb);
    for (Eigen::Index j = 0; j < nb; ++j) {
      for (decltype(sm.matrix)::InnerIterator it(mat, b[static_cast<std::size_t>(j)]); it; ++it) {
        const auto pos = std::lower_bound(b.begin(), b.end(), it.row()) - b.begin();
        h(pos, j) = it.value();
      }
    }
    const auto ev = linalg::hermitian_eigenvalues(h);
    per_block[bi].assign(ev.data(), ev.data() + ev.size());
  });
  for (const auto& v : per_block) sp.values.insert(sp.values.end(), v.begin(), v.end());
  std::sort(sp.values.begin(), sp.values.end());
  return sp;
}

double max_deviation(const ModeMap& a, const ModeMap& b, const std::vector<Point>& probe) {
  require_compatible(a, b);
  std::vector<double> worst(probe.size(), 0.0);
  parallel_for(probe.size(), [&](std::size_t p) {
    for (int s = 0; s < a.spinor_dim(); ++s) {
      std::vector<ModeAmp> diff;
      a.emit(probe[p], s, 1.0, diff);
      b.emit(probe[p], s, -1.0, diff);
      std::sort(diff.begin(), diff.end(), mode_less);
      for (std::size_t r = 0; r < diff.size();) {
        Complex acc{};
        std::size_t q = r;
        while (q < diff.size() && diff[q].k == diff[r].k && diff[q].spin == diff[r].spin) {
          acc += diff[q++].amp;
        }
        worst[p] = std::max(worst[p], std::abs(acc));
        r = q;
      }
    }
  });
  return worst.empty() ? 0.0 : *std::max_element(worst.begin(), worst.end());
}

StochasticTrace stochastic_trace(const SparseMatrix& h, const std::function<double(double)>& f,
                                 int probes, int lanczos_steps, std::uint64_t seed) {
  const auto n = h.matrix.cols();
  StochasticTrace st;
  st.probes = probes;
  if (n == 0 || probes <= 0) return st;
  const int steps = static_cast<int>(std::min<std::int64_t>(lanczos_steps, n));
  std::vector<double> est(static_cast<std::size_t>(probes), 0.0);
  parallel_for(static_cast<std::size_t>(probes), [&](std::size_t j) {
    std::mt19937_64 rng(seed + j);
    Eigen::VectorXcd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z(i) = (rng() & 1U) ? 1.0 : -1.0;
    const double znorm2 = static_cast<double>(n);
    Eigen::MatrixXcd basis(n, steps);
    std::vector<double> alpha, beta;
    Eigen::VectorXcd v = z / std::sqrt(znorm2);
    for (int it = 0; it < steps; ++it) {
      basis.col(it) = v;
      Eigen::VectorXcd w = h.matrix * v;
      const double a = w.dot(v).real();
      alpha.push_back(a);
      // Full reorthogonalization keeps the quadrature nodes clean.
      for (int pass = 0; pass < 2; ++pass) {
        for (int q = 0; q <= it; ++q) w -= basis.col(q).dot(w) * basis.col(q);
      }
      const double b = w.norm();
      if (it + 1 == steps || b < 1e-14) break;
      beta.push_back(b);
      v = w / b;
    }
    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      tri(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    double s = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double tau = es.eigenvectors()(0, i);
      s += tau * tau * f(es.eigenvalues()(i));
    }
    est[j] = znorm2 * s;
  });
  const double mean = std::accumulate(est.begin(), est.end(), 0.0) / probes;
  double var = 0.0;
  for (double e : est) var += (e - mean) * (e - mean);
  st.value = mean;
  st.std_error = probes > 1 ? std::sqrt(var / (probes - 1) / probes) : 0.0;
  return st;
}

}  // namespace ncspectral::ops
