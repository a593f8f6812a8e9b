#include "ncspectral/symbol.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include "ncspectral/error.hpp"
#include "ncspectral/polynomial.hpp"
#include "ncspectral/zeta.hpp"

namespace ncspectral::action {

using clifford::Matrix;
using weyl::FourierElement;

namespace {

// Polynomials in (xi_1..xi_n, eps) with eps the last variable, truncated at
// eps^order. On the unit sphere the degree -n part of the symbol is the
// eps^(n-q) coefficient of these series.
Polynomial truncate(const Polynomial& p, int order) {
  Polynomial out(p.dim());
  for (const auto& [e, c] : p.terms()) {
    if (e.back() <= order) out.add_term(e, c);
  }
  return out;
}

Polynomial mul_trunc(const Polynomial& a, const Polynomial& b, int order) {
  Polynomial out(a.dim());
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) {
      if (ea.back() + eb.back() > order) continue;
      Polynomial::Exponents e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

// eps^j coefficient as a polynomial in xi alone.
Polynomial eps_coefficient(const Polynomial& p, int j, int n) {
  Polynomial out(n);
  for (const auto& [e, c] : p.terms()) {
    if (e.back() != j) continue;
    out.add_term(Polynomial::Exponents(e.begin(), e.end() - 1), c);
  }
  return out;
}

// 1 / (1 + 2 eps xi.u + eps^2 |u|^2) as a series in eps.
Polynomial inverse_shift_factor(int n, const Point& u, int order) {
  Polynomial y(n + 1);
  Polynomial::Exponents e(static_cast<std::size_t>(n + 1), 0);
  for (int i = 0; i < n; ++i) {
    if (u[i] == 0) continue;
    std::fill(e.begin(), e.end(), 0);
    e[static_cast<std::size_t>(i)] = 1;
    e.back() = 1;
    y.add_term(e, 2.0 * static_cast<double>(u[i]));
  }
  const auto u2 = u.norm2();
  if (u2 != 0) {
    std::fill(e.begin(), e.end(), 0);
    e.back() = 2;
    y.add_term(e, static_cast<double>(u2));
  }
  Polynomial series = Polynomial::constant(n + 1, 1.0);
  if (y.is_zero()) return series;
  Polynomial power = Polynomial::constant(n + 1, 1.0);
  const Polynomial minus_y = Complex(-1.0) * y;
  for (int i = 1; i <= order; ++i) {
    power = mul_trunc(power, minus_y, order);
    if (power.is_zero()) break;
    series += power;
  }
  return series;
}

// One Weyl shift of A~: left part c_v, right part -(c^*)_v.
struct Step {
  Point v;
  Matrix left;   // sum_alpha (c_alpha)_v gamma^alpha
  Matrix right;  // -sum_alpha (c_alpha^*)_v gamma^alpha
};

double frac_distance(const std::vector<double>& a) {
  double d = 0.0;
  for (double x : a) d = std::max(d, std::fabs(x - std::nearbyint(x)));
  return d;
}

}  // namespace

nlohmann::json NcIntegral::to_json() const {
  return {{"q", q},
          {"re", value.real()},
          {"im", value.imag()},
          {"truncation_error", truncation_error},
          {"expansion_order", expansion_order},
          {"paths", paths},
          {"diagonal_terms", diagonal_terms},
          {"resonant_terms", resonant_terms},
          {"nonresonant_terms", nonresonant_terms},
          {"min_twist_distance", std::isfinite(min_twist_distance) ? nlohmann::json(min_twist_distance)
                                                                   : nlohmann::json(nullptr)},
          {"uncertified", uncertified}};
}

NcIntegral nc_integral_power(const weyl::OneForm& A, const ops::SpectralTriple& st, int q,
                             const SymbolOptions& opt) {
  const int n = st.n();
  if (A.dim() != n) throw Error(ErrorKind::DimensionMismatch, "one-form dimension differs from torus");
  if (q < 1 || q > n) throw Error(ErrorKind::OutOfRange, "nc_integral_power needs 1 <= q <= n");
  const int order = opt.expansion_order < 0 ? n + 3 : opt.expansion_order;
  if (order < 0) throw Error(ErrorKind::Precondition, "expansion order must be >= 0");

  NcIntegral out;
  out.q = q;
  out.expansion_order = order;
  out.min_twist_distance = std::numeric_limits<double>::infinity();
  out.uncertified = !opt.diophantine_certified;

  const auto& g = st.gammas.gammas;
  const int dim = st.spinor_dim();

  // c_alpha = -i A_alpha; A~ = sum_alpha (L(c_alpha) - R(c_alpha^*)) (x) gamma^alpha.
  std::map<Point, Step> steps;
  for (int alpha = 0; alpha < n; ++alpha) {
    const FourierElement c = Complex(0.0, -1.0) * A.components[static_cast<std::size_t>(alpha)];
    const FourierElement cs = weyl::adjoint(c);
    auto slot = [&](const Point& v) -> Step& {
      auto it = steps.find(v);
      if (it == steps.end()) {
        it = steps.emplace(v, Step{v, Matrix::Zero(dim, dim), Matrix::Zero(dim, dim)}).first;
      }
      return it->second;
    };
    for (const auto& [v, z] : c.terms()) slot(v).left += z * g[static_cast<std::size_t>(alpha)];
    for (const auto& [v, z] : cs.terms()) slot(v).right -= z * g[static_cast<std::size_t>(alpha)];
  }
  // At v = 0 both parts carry phase 1, so they merge; for anti-selfadjoint A
  // this cancels exactly and the diagonal amplitude of A~ D^-1 is zero.
  if (auto it = steps.find(Point::zero(n)); it != steps.end()) {
    it->second.left += it->second.right;
    it->second.right.setZero();
    if (it->second.left.isZero(0.0)) steps.erase(it);
  }
  if (steps.empty()) return out;

  std::int64_t spread = 0;
  for (const auto& [v, s] : steps) spread = std::max(spread, v.max_norm());

  const int N = n - q;  // eps power carrying the pole at s = 0
  const bool pole_kept = order >= N;
  const bool pole_at_edge = order == N;
  Complex total{};

  std::vector<const Step*> path;
  std::vector<Point> partial;  // u_j = v_1 + ... + v_{j-1}

  auto process_path = [&] {
    ++out.paths;
    // Denominator series, shared by all L/R choices.
    Polynomial den = Polynomial::constant(n + 1, 1.0);
    for (int j = 0; j < q; ++j) den = mul_trunc(den, inverse_shift_factor(n, partial[j], N), N);

    // Trace tensor t_mu summed over resonant L/R choices.
    std::vector<Complex> tensor;
    std::size_t tensor_size = 1;
    for (int j = 0; j < q; ++j) tensor_size *= static_cast<std::size_t>(n);
    tensor.assign(tensor_size, Complex{});
    bool any_resonant = false;

    std::vector<int> nonzero;
    for (int j = 0; j < q; ++j) {
      if (!path[j]->v.is_zero()) nonzero.push_back(j);
    }
    const std::size_t choices = std::size_t{1} << nonzero.size();
    std::vector<const Matrix*> mats(static_cast<std::size_t>(q));
    for (std::size_t mask = 0; mask < choices; ++mask) {
      Point w = Point::zero(n);
      double phase = 0.0;
      bool vanishes = false;
      for (int j = 0; j < q; ++j) mats[j] = &path[j]->left;
      for (std::size_t b = 0; b < nonzero.size(); ++b) {
        const int j = nonzero[b];
        const Step& s = *path[j];
        const double vu = st.theta.bilinear(s.v, partial[j]);
        if (mask >> b & 1) {  // right
          mats[j] = &s.right;
          phase += 0.5 * vu;
        } else {
          w = w + s.v;
          phase -= 0.5 * vu;
        }
        if (mats[j]->isZero(0.0)) vanishes = true;
      }
      if (vanishes) continue;
      ++out.diagonal_terms;
      // exp(-i (Theta^T w).k) = exp(2 pi i a.k).
      bool resonant = w.is_zero();
      if (!resonant) {
        auto a = st.theta.transpose_apply(w);
        for (auto& x : a) x /= -2.0 * std::acos(-1.0);
        const double d = frac_distance(a);
        resonant = d <= opt.resonance_tol;
        if (!resonant) {
          out.min_twist_distance = std::min(out.min_twist_distance, d);
          if (d < opt.near_resonance) out.uncertified = true;
        }
      }
      if (!resonant) {
        ++out.nonresonant_terms;
        continue;
      }
      ++out.resonant_terms;
      any_resonant = true;
      const Complex weight = std::polar(1.0, phase);
      // Tr[M_q gamma^mu_q ... M_1 gamma^mu_1], building products from the right.
      std::vector<Matrix> prod(static_cast<std::size_t>(q + 1));
      prod[0] = Matrix::Identity(dim, dim);
      std::vector<int> mu(static_cast<std::size_t>(q), 0);
      std::function<void(int, std::size_t)> rec = [&](int j, std::size_t idx) {
        if (j == q) {
          tensor[idx] += weight * prod[static_cast<std::size_t>(q)].trace();
          return;
        }
        for (int m = 0; m < n; ++m) {
          prod[static_cast<std::size_t>(j + 1)] = (*mats[j]) * g[static_cast<std::size_t>(m)] *
                                                 prod[static_cast<std::size_t>(j)];
          rec(j + 1, idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(m));
        }
      };
      rec(0, 0);
    }
    if (!any_resonant || !pole_kept) return;

    // Numerator sum_mu t_mu prod_j (xi_{mu_j} + eps u_j^{mu_j}), truncated at eps^N.
    Polynomial num(n + 1);
    std::vector<int> mu(static_cast<std::size_t>(q));
    for (std::size_t idx = 0; idx < tensor_size; ++idx) {
      if (tensor[idx] == Complex{}) continue;
      std::size_t r = idx;
      for (int j = q - 1; j >= 0; --j) {
        mu[static_cast<std::size_t>(j)] = static_cast<int>(r % static_cast<std::size_t>(n));
        r /= static_cast<std::size_t>(n);
      }
      Polynomial term = Polynomial::constant(n + 1, tensor[idx]);
      for (int j = 0; j < q; ++j) {
        Polynomial lin(n + 1);
        Polynomial::Exponents e(static_cast<std::size_t>(n + 1), 0);
        e[static_cast<std::size_t>(mu[j])] = 1;
        lin.add_term(e, 1.0);
        const auto uj = partial[j][mu[j]];
        if (uj != 0) {
          std::fill(e.begin(), e.end(), 0);
          e.back() = 1;
          lin.add_term(e, static_cast<double>(uj));
        }
        term = mul_trunc(term, lin, N);
      }
      num += term;
    }
    const Polynomial sym = eps_coefficient(mul_trunc(num, den, N), N, n);
    const auto fam = zeta::twisted_family_residue({{Complex(1.0), std::vector<double>(static_cast<std::size_t>(n), 0.0)}}, sym, true);
    total += fam.value;
  };

  // Closed paths v_1 + ... + v_q = 0 by depth-first search.
  std::vector<const Step*> all;
  for (const auto& [v, s] : steps) all.push_back(&s);
  path.assign(static_cast<std::size_t>(q), nullptr);
  partial.assign(static_cast<std::size_t>(q), Point::zero(n));
  std::function<void(int)> dfs = [&](int j) {
    if (j == q) {
      if (partial[q - 1] + path[q - 1]->v == Point::zero(n)) process_path();
      return;
    }
    for (const Step* s : all) {
      const Point next = partial[j] + s->v;
      const int remaining = q - j - 1;
      if (next.max_norm() > remaining * spread) continue;
      path[j] = s;
      if (j + 1 < q) partial[j + 1] = next;
      dfs(j + 1);
    }
  };
  dfs(0);

  out.value = total;
  if (pole_at_edge) out.truncation_error = std::abs(total);
  return out;
}

}  // namespace ncspectral::action
