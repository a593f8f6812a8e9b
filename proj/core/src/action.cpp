#include "ncspectral/action.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/SVD>
#include <boost/math/special_functions/beta.hpp>

#include "ncspectral/error.hpp"
#include "ncspectral/zeta.hpp"

namespace ncspectral::action {

namespace {

double spin_dim(int n) { return std::ldexp(1.0, n / 2); }

// sum_{j in Z} exp(-t j^2) with its tail bound; dual form for small t.
struct Theta1 {
  long double value;
  double tail;
};

Theta1 jacobi_theta(double t, double eps = 1e-20) {
  const long double lt = t;
  if (t >= 1.0) {
    const auto J = static_cast<long>(std::ceil(std::sqrt(-std::log(eps) / t)));
    long double s = 0;
    for (long j = J; j >= 1; --j) s += std::exp(-lt * j * j);
    const double tail = 2.0 * std::exp(-t * double(J + 1) * double(J + 1)) / (1.0 - std::exp(-t));
    return {1 + 2 * s, tail};
  }
  const long double c = std::sqrt(static_cast<long double>(kPi) / lt);
  const long double a = static_cast<long double>(kPi) * kPi / lt;
  const auto M = static_cast<long>(std::ceil(std::sqrt(-std::log(eps) / static_cast<double>(a))));
  long double s = 0;
  for (long m = M; m >= 1; --m) s += std::exp(-a * m * m);
  const double tail = static_cast<double>(c) * 2.0 * std::exp(-static_cast<double>(a) * double(M + 1) * double(M + 1));
  return {c * (1 + 2 * s), tail};
}

// sum_k exp(2 pi i alpha k - t k^2), real by symmetry.
double twisted_theta(double alpha, double t) {
  const double al = alpha - std::nearbyint(alpha);
  if (t >= kPi) {
    const auto J = static_cast<long>(std::ceil(std::sqrt(46.0 / t))) + 1;
    long double s = 0;
    for (long k = J; k >= 1; --k) s += std::cos(2.0L * kPi * al * k) * std::exp(-static_cast<long double>(t) * k * k);
    return static_cast<double>(1 + 2 * s);
  }
  // sqrt(pi/t) sum_m exp(-pi^2 (m - alpha)^2 / t): positive terms only.
  const long double c = std::sqrt(static_cast<long double>(kPi) / t);
  const long double a = static_cast<long double>(kPi) * kPi / t;
  const auto M = static_cast<long>(std::ceil(std::sqrt(46.0 / static_cast<double>(a)))) + 1;
  long double s = 0;
  for (long m = -M; m <= M; ++m) {
    const long double d = m - al;
    s += std::exp(-a * d * d);
  }
  return static_cast<double>(c * s);
}

// Number of k in Z^n with |k|^2 = N, for N <= Nmax.
std::vector<double> representation_counts(int n, std::size_t nmax) {
  std::vector<double> r1(nmax + 1, 0.0);
  for (std::size_t j = 0; j * j <= nmax; ++j) r1[j * j] = j == 0 ? 1.0 : 2.0;
  if (n == 1) return r1;
  if (n == 4) {
    // Jacobi: r_4(N) = 8 sum_{d | N, 4 does not divide d} d.
    std::vector<double> r(nmax + 1, 0.0);
    r[0] = 1.0;
    for (std::size_t d = 1; d <= nmax; ++d) {
      if (d % 4 == 0) continue;
      for (std::size_t m = d; m <= nmax; m += d) r[m] += 8.0 * static_cast<double>(d);
    }
    return r;
  }
  std::vector<double> r(nmax + 1, 0.0);
  if (n == 2) {
    for (std::size_t a = 0; a * a <= nmax; ++a) {
      for (std::size_t b = 0; a * a + b * b <= nmax; ++b) {
        r[a * a + b * b] += (a == 0 ? 1.0 : 2.0) * (b == 0 ? 1.0 : 2.0);
      }
    }
    return r;
  }
  r = r1;
  for (int dim = 2; dim <= n; ++dim) {
    std::vector<double> next(nmax + 1, 0.0);
    for (std::size_t N = 0; N <= nmax; ++N) {
      if (r[N] == 0.0) continue;
      for (std::size_t j = 0; N + j * j <= nmax; ++j) next[N + j * j] += r[N] * (j == 0 ? 1.0 : 2.0);
    }
    r.swap(next);
  }
  return r;
}

double unit_ball_volume(int n) { return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0); }

double one_form_norm_bound(const OneForm& A) {
  double s = 0.0;
  for (const auto& c : A.components) {
    for (const auto& [k, z] : c.terms()) s += std::abs(z);
  }
  return 2.0 * s;
}

struct WindowData {
  std::vector<double> eigenvalues;
  std::optional<ops::SparseMatrix> sparse;  // set when the stochastic path is needed
  double radius = 0.0;
  std::size_t basis = 0;
};

WindowData window_data(const OneForm& A, const SpectralTriple& st, double radius, const WindowOptions& opt) {
  const int n = st.n();
  const double estimate = unit_ball_volume(n) * std::pow(radius + 1.0, n) * st.spinor_dim();
  if (estimate > 1.5 * static_cast<double>(opt.basis_limit)) {
    throw Error(ErrorKind::Guard, "window of radius " + std::to_string(radius) + " needs about " +
                                      std::to_string(static_cast<long long>(estimate)) +
                                      " basis vectors (limit " + std::to_string(opt.basis_limit) + ")");
  }
  const auto w = ops::ModeWindow::ball(n, radius);
  const auto D = ops::covariant_dirac(A, st);
  WindowData out;
  out.radius = radius;
  out.basis = w.size() * static_cast<std::size_t>(st.spinor_dim());
  auto sm = ops::assemble_sparse(D, w, opt.basis_limit);
  const auto blocks = ops::coupling_blocks(sm);
  std::size_t largest = 0;
  for (const auto& b : blocks) largest = std::max(largest, b.size());
  if (largest > opt.block_limit) {
    out.sparse = std::move(sm);
    return out;
  }
  out.eigenvalues = ops::spectrum(D, w, opt.basis_limit, opt.block_limit).values;
  return out;
}

ActionSample trace_on_window(const WindowData& wd, const CutoffProfile& phi, double lambda,
                             const WindowOptions& opt) {
  ActionSample s;
  s.lambda = lambda;
  if (wd.sparse) {
    const auto est = ops::stochastic_trace(
        *wd.sparse, [&](double x) { return phi(x / lambda); }, opt.probes, opt.lanczos_steps, opt.seed);
    s.value = est.value;
    s.std_error = est.std_error;
    s.method = "stochastic-window";
  } else {
    CompensatedSum<double> acc;
    for (double ev : wd.eigenvalues) acc.add(phi(ev / lambda));
    s.value = acc.value();
    s.method = "dense-window";
  }
  s.tail_bound = opt.tail_eps * static_cast<double>(wd.basis);
  return s;
}

double window_radius(const CutoffProfile& phi, double lambda_max, const OneForm& A, const WindowOptions& opt) {
  return lambda_max * phi.cutoff_radius(opt.tail_eps) + 2.0 * static_cast<double>(A.spread()) + 2.0 +
         one_form_norm_bound(A);
}

}  // namespace

double lattice_cutoff_radius(const CutoffProfile& phi, double lambda, double eps) {
  return lambda * phi.cutoff_radius(eps);
}

HeatSample heat_trace_free(int n, double t) {
  if (!(t > 0)) throw Error(ErrorKind::Precondition, "heat trace needs t > 0");
  if (n < 1 || n > kMaxDim) throw Error(ErrorKind::OutOfRange, "dimension out of range");
  const auto th = jacobi_theta(t);
  HeatSample h;
  h.t = t;
  const long double v = std::pow(th.value, static_cast<long double>(n)) * spin_dim(n);
  h.value = static_cast<double>(v);
  h.tail_bound = static_cast<double>(v) * n * th.tail / static_cast<double>(th.value);
  h.cutoff_radius = std::sqrt(46.0 / t);
  h.method = "exact-formula";
  return h;
}

HeatSample heat_trace(const OneForm& A, const SpectralTriple& st, double t, HeatMethod method,
                      const WindowOptions& opt) {
  if (!(t > 0)) throw Error(ErrorKind::Precondition, "heat trace needs t > 0");
  if (A.dim() != st.n()) throw Error(ErrorKind::DimensionMismatch, "one-form dimension differs from torus");
  if (method == HeatMethod::ExactFormula) {
    if (!A.is_zero()) {
      throw Error(ErrorKind::Precondition, "the exact formula covers A = 0 only; use the dense window");
    }
    return heat_trace_free(st.n(), t);
  }
  const double lambda = 1.0 / std::sqrt(t);
  const auto phi = CutoffProfile::gaussian();
  const auto wd = window_data(A, st, window_radius(phi, lambda, A, opt), opt);
  const auto s = trace_on_window(wd, phi, lambda, opt);
  HeatSample h;
  h.t = t;
  h.value = s.value;
  h.std_error = s.std_error;
  h.tail_bound = s.tail_bound;
  h.cutoff_radius = wd.radius;
  h.method = s.method;
  h.basis = wd.basis;
  return h;
}

ActionSample spectral_action_free(const CutoffProfile& phi, double lambda, int n) {
  if (!(lambda > 0)) throw Error(ErrorKind::Precondition, "spectral action needs Lambda > 0");
  if (phi.kind() == CutoffProfile::Kind::Gaussian) {
    // Same path as the heat trace at t = 1 / Lambda^2.
    const auto h = heat_trace_free(n, 1.0 / (lambda * lambda));
    ActionSample s;
    s.lambda = lambda;
    s.value = h.value.real();
    s.tail_bound = h.tail_bound;
    s.method = "exact-formula";
    return s;
  }
  double nmax_real = 0.0;
  const double shell = n * unit_ball_volume(n);  // area of S^{n-1}
  if (phi.kind() == CutoffProfile::Kind::Rational) {
    const double r = phi.exponent();
    if (r <= 0.5 * n) {
      throw Error(ErrorKind::Precondition, "Tr Phi(D/Lambda) diverges for " + phi.name() + " in dimension " +
                                               std::to_string(n) + " (needs r > n/2)");
    }
    // Shells with Phi above 1e-16 are summed, capped at 4e6.
    const double x = phi.cutoff_radius(1e-16) * lambda;
    nmax_real = std::min(x * x, 4e6);
  } else {
    const double x = phi.cutoff_radius(1e-20) * lambda + std::sqrt(static_cast<double>(n));
    nmax_real = x * x;
  }
  const auto nmax = static_cast<std::size_t>(std::ceil(nmax_real));
  const auto counts = representation_counts(n, nmax);
  CompensatedSum<double> acc;
  for (std::size_t N = nmax + 1; N-- > 0;) {
    if (counts[N] != 0.0) acc.add(counts[N] * phi.of_square(static_cast<double>(N) / (lambda * lambda)));
  }
  double tail = 0.0, tail_bound = 0.0;
  if (phi.kind() == CutoffProfile::Kind::Rational) {
    // Remaining shells as the integral over |x| > R:
    // Lambda^n S_{n-1} / 2 * B(r - n/2, n/2; 1 / (1 + R^2 / Lambda^2)).
    const double r = phi.exponent();
    const double R2 = static_cast<double>(nmax) + 0.5;
    const double w0 = 1.0 / (1.0 + R2 / (lambda * lambda));
    tail = std::pow(lambda, n) * shell * 0.5 * boost::math::beta(r - 0.5 * n, 0.5 * n, w0);
    tail_bound = shell * std::pow(R2, 0.5 * (n - 1)) * phi.of_square(R2 / (lambda * lambda));
  }
  ActionSample s;
  s.lambda = lambda;
  s.value = spin_dim(n) * (acc.value() + tail);
  s.tail_bound = spin_dim(n) * tail_bound;
  s.method = "exact-formula";
  return s;
}

ActionSample spectral_action(const CutoffProfile& phi, double lambda, const OneForm& A, const SpectralTriple& st,
                             const WindowOptions& opt) {
  return spectral_action_grid(phi, {lambda}, A, st, opt).front();
}

std::vector<ActionSample> spectral_action_grid(const CutoffProfile& phi, const std::vector<double>& lambdas,
                                               const OneForm& A, const SpectralTriple& st,
                                               const WindowOptions& opt) {
  if (lambdas.empty()) return {};
  for (double l : lambdas) {
    if (!(l > 0)) throw Error(ErrorKind::Precondition, "spectral action needs Lambda > 0");
  }
  if (A.dim() != st.n()) throw Error(ErrorKind::DimensionMismatch, "one-form dimension differs from torus");
  std::vector<ActionSample> out(lambdas.size());
  if (A.is_zero()) {
    parallel_for(lambdas.size(), [&](std::size_t i) { out[i] = spectral_action_free(phi, lambdas[i], st.n()); });
    return out;
  }
  const double lmax = *std::max_element(lambdas.begin(), lambdas.end());
  const auto wd = window_data(A, st, window_radius(phi, lmax, A, opt), opt);
  for (std::size_t i = 0; i < lambdas.size(); ++i) out[i] = trace_on_window(wd, phi, lambdas[i], opt);
  return out;
}

// --------------------------------------------------------------------- fits

std::vector<double> log_grid(double lo, double hi, int count) {
  if (count < 2 || !(lo > 0) || !(hi > lo)) throw Error(ErrorKind::Precondition, "bad log grid");
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    g[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  }
  g.back() = hi;
  return g;
}

std::vector<double> default_lambda_grid() { return log_grid(6.0, 24.0, 8); }

double ExpansionFit::coefficient(int k) const {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (powers[i] == k) return c[i];
  }
  throw Error(ErrorKind::OutOfRange, "no fitted coefficient for power " + std::to_string(k));
}

double ExpansionFit::uncertainty(int k) const {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (powers[i] == k) return c_uncertainty[i];
  }
  throw Error(ErrorKind::OutOfRange, "no fitted coefficient for power " + std::to_string(k));
}

nlohmann::json ExpansionFit::to_json() const {
  nlohmann::json j;
  j["profile"] = profile;
  j["lambdas"] = lambdas;
  j["values"] = values;
  j["powers"] = powers;
  j["raw"] = raw;
  j["raw_uncertainty"] = raw_uncertainty;
  j["c"] = c;
  j["c_uncertainty"] = c_uncertainty;
  j["c_systematic"] = c_systematic;
  j["residual_rms"] = residual_rms;
  j["condition_number"] = condition_number;
  return j;
}

namespace {

struct LsqResult {
  std::vector<double> beta, sigma;
  double condition = 0.0, rms = 0.0;
};

// Column-scaled least squares on Lambda^power via SVD.
LsqResult power_lsq(const std::vector<double>& lambdas, const std::vector<double>& values,
                    const std::vector<int>& powers) {
  const auto m = static_cast<Eigen::Index>(lambdas.size());
  const auto p = static_cast<Eigen::Index>(powers.size());
  Eigen::MatrixXd X(m, p);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    y(i) = values[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < p; ++j) {
      X(i, j) = std::pow(lambdas[static_cast<std::size_t>(i)], powers[static_cast<std::size_t>(j)]);
    }
  }
  Eigen::VectorXd scale(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    scale(j) = X.col(j).norm();
    X.col(j) /= scale(j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  LsqResult out;
  out.condition = sv(0) / sv(p - 1);
  const Eigen::VectorXd beta = svd.solve(y);
  const Eigen::VectorXd resid = y - X * beta;
  const double rss = resid.squaredNorm();
  out.rms = std::sqrt(rss / static_cast<double>(m));
  const double s2 = m > p ? rss / static_cast<double>(m - p) : 0.0;
  // cov = s2 V S^-2 V^T, plus a rounding floor eps * cond * |y|.
  const Eigen::MatrixXd V = svd.matrixV();
  const double floor = std::numeric_limits<double>::epsilon() * out.condition * y.norm();
  for (Eigen::Index j = 0; j < p; ++j) {
    double var = 0.0;
    for (Eigen::Index k = 0; k < p; ++k) var += V(j, k) * V(j, k) / (sv(k) * sv(k));
    out.beta.push_back(beta(j) / scale(j));
    out.sigma.push_back(std::hypot(std::sqrt(s2 * var), floor) / scale(j));
  }
  return out;
}

}  // namespace

ExpansionFit fit_values(const CutoffProfile& phi, int n, const std::vector<double>& lambdas,
                        const std::vector<double>& values) {
  if (lambdas.size() != values.size()) throw Error(ErrorKind::DimensionMismatch, "grid and values differ in size");
  const auto m = static_cast<int>(lambdas.size());
  if (m < n + 3) {
    throw Error(ErrorKind::Precondition, "fit needs at least n+3 = " + std::to_string(n + 3) + " grid points");
  }
  const auto [lo, hi] = std::minmax_element(lambdas.begin(), lambdas.end());
  if (*hi < 4.0 * *lo) throw Error(ErrorKind::Precondition, "Lambda grid must spread over a factor of 4");

  ExpansionFit fit;
  fit.profile = phi.name();
  fit.lambdas = lambdas;
  fit.values = values;
  for (int k = n; k >= -1; --k) fit.powers.push_back(k);
  const auto base = power_lsq(lambdas, values, fit.powers);
  fit.condition_number = base.condition;
  if (!(fit.condition_number < 1e10)) {
    throw Error(ErrorKind::Precondition, "ill-conditioned fit (condition number " +
                                             std::to_string(fit.condition_number) + "); widen the grid");
  }
  fit.residual_rms = base.rms;
  fit.raw = base.beta;
  fit.raw_uncertainty = base.sigma;

  std::vector<double> shift(fit.powers.size() - 1, 0.0);
  if (m >= n + 5) {
    auto ext_powers = fit.powers;
    ext_powers.push_back(-2);
    const auto ext = power_lsq(lambdas, values, ext_powers);
    if (ext.condition < 1e10) {
      for (std::size_t j = 0; j < shift.size(); ++j) shift[j] = std::fabs(ext.beta[j] - base.beta[j]);
    }
  }
  for (std::size_t j = 0; j + 1 < fit.powers.size(); ++j) {
    const int k = fit.powers[j];
    const double norm = k >= 1 ? moment(phi, k) : phi(0.0);
    fit.c.push_back(fit.raw[j] / norm);
    fit.c_systematic.push_back(shift[j] / norm);
    fit.c_uncertainty.push_back(std::hypot(fit.raw_uncertainty[j], shift[j]) / norm);
  }
  return fit;
}

ExpansionFit fit_expansion(const CutoffProfile& phi, const std::vector<double>& lambdas, const OneForm& A,
                           const SpectralTriple& st, const WindowOptions& opt) {
  // Check the grid before any expensive work.
  if (static_cast<int>(lambdas.size()) < st.n() + 3) {
    throw Error(ErrorKind::Precondition, "fit needs at least n+3 = " + std::to_string(st.n() + 3) + " grid points");
  }
  const auto samples = spectral_action_grid(phi, lambdas, A, st, opt);
  std::vector<double> v;
  for (const auto& s : samples) v.push_back(s.value);
  return fit_values(phi, st.n(), lambdas, v);
}

// ------------------------------------------------------------ twisted traces

TwistedTrace twisted_heat_trace(const FourierElement& a, const FourierElement& b, const DeformationMatrix& theta,
                                double t) {
  if (!(t > 0)) throw Error(ErrorKind::Precondition, "twisted heat trace needs t > 0");
  const int n = theta.dim();
  if (a.dim() != n || b.dim() != n) throw Error(ErrorKind::DimensionMismatch, "element dimension differs from Theta");
  const double two_pi = 2.0 * kPi;
  CompensatedSum<Complex> acc;
  Complex q0{};
  for (const auto& [q, aq] : a.terms()) {
    const Complex bq = b.coeff(-q);
    if (bq == Complex{}) continue;
    const auto tq = theta.transpose_apply(q);
    double s = 1.0;
    for (int j = 0; j < n; ++j) s *= twisted_theta(-tq[static_cast<std::size_t>(j)] / two_pi, t);
    const Complex term = spin_dim(n) * aq * bq * s;
    if (q.is_zero()) q0 = term;
    else acc.add(term);
  }
  TwistedTrace out;
  out.t = t;
  out.q0_term = q0;
  out.correction = acc.value();
  out.value = q0 + out.correction;
  return out;
}

std::pair<FourierElement, FourierElement> correction_probe(int n, int qmax) {
  if (qmax < 1) throw Error(ErrorKind::Precondition, "probe needs qmax >= 1");
  FourierElement a = FourierElement::unit(n), b = FourierElement::unit(n);
  for (int Q = 1; Q <= qmax; ++Q) {
    const Point v = static_cast<std::int64_t>(Q) * Point::unit(n, n - 1);
    a.add_term(v, 1.0 / Q);
    b.add_term(-v, 1.0 / Q);
  }
  return {a, b};
}

std::vector<ScalingRow> correction_scaling(const std::vector<ScalingEntry>& family, const std::vector<double>& t_grid,
                                           const ScalingOptions& opt) {
  if (t_grid.size() < 6) throw Error(ErrorKind::Precondition, "correction scaling needs at least 6 t values");
  const double ratio = t_grid[1] / t_grid[0];
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0) || !(t_grid[i + 1] > t_grid[i]) ||
        std::fabs(t_grid[i + 1] / t_grid[i] - ratio) > 1e-6 * ratio) {
      throw Error(ErrorKind::Precondition, "t grid must be increasing and log-spaced");
    }
  }
  std::vector<ScalingRow> rows(family.size());
  parallel_for(family.size(), [&](std::size_t f) {
    const auto& e = family[f];
    const auto [a, b] = correction_probe(e.theta.dim(), opt.qmax);
    ScalingRow& row = rows[f];
    row.label = e.label;
    row.t = t_grid;
    for (double t : t_grid) {
      const auto tw = twisted_heat_trace(a, b, e.theta, t);
      row.delta.push_back(std::abs(tw.correction));
      row.base.push_back(std::abs(tw.q0_term));
    }
    row.exponentially_small = row.delta.front() < opt.noise_floor * row.base.front();
    row.slope = row.intercept = row.r2 = std::numeric_limits<double>::quiet_NaN();
    if (row.exponentially_small) return;
    std::vector<double> x, y;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      if (row.delta[i] > 0) {
        x.push_back(std::log(t_grid[i]));
        y.push_back(std::log(row.delta[i]));
      }
    }
    if (x.size() < 3) return;
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxx += (x[i] - mx) * (x[i] - mx);
      sxy += (x[i] - mx) * (y[i] - my);
      syy += (y[i] - my) * (y[i] - my);
    }
    row.slope = sxy / sxx;
    row.intercept = my - row.slope * mx;
    row.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
  });
  return rows;
}

// ----------------------------------------------------------- constant term

nlohmann::json ConstantTerm::to_json() const {
  nlohmann::json j;
  j["re"] = value.real();
  j["im"] = value.imag();
  j["truncation_error"] = truncation_error;
  j["uncertified"] = uncertified;
  j["tau_ff"] = {{"re", tau_ff.real()}, {"im", tau_ff.imag()}};
  if (target) j["target"] = {{"re", target->real()}, {"im", target->imag()}};
  else j["target"] = nullptr;
  j["terms"] = nlohmann::json::array();
  for (const auto& t : terms) j["terms"].push_back(t.to_json());
  return j;
}

ConstantTerm constant_term(const OneForm& A, const SpectralTriple& st, const SymbolOptions& opt) {
  const int n = st.n();
  ConstantTerm ct;
  ct.terms.resize(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n),
               [&](std::size_t i) { ct.terms[i] = nc_integral_power(A, st, static_cast<int>(i) + 1, opt); });
  for (const auto& t : ct.terms) {
    const double sign = t.q % 2 == 0 ? 1.0 : -1.0;
    ct.value += sign / t.q * t.value;
    ct.truncation_error += t.truncation_error / t.q;
    ct.uncertified = ct.uncertified || t.uncertified;
  }
  ct.tau_ff = weyl::trace_field_square(weyl::field_strength(A, st.theta), st.theta);
  if (n == 4) ct.target = -(4.0 * kPi * kPi / 3.0) * ct.tau_ff;
  if (n == 2) ct.target = Complex{};
  return ct;
}

CosmologicalTerm cosmological_term(const OneForm& A, const SpectralTriple& st, const std::vector<double>& lambdas,
                                   const WindowOptions& opt) {
  CosmologicalTerm out;
  out.fit = fit_expansion(CutoffProfile::gaussian(), lambdas, A, st, opt);
  out.value = out.fit.coefficient(st.n());
  out.uncertainty = out.fit.uncertainty(st.n());
  out.target = zeta::zeta_D_residue(st.n());
  return out;
}

}  // namespace ncspectral::action
