#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ncspectral/action.hpp"
#include "ncspectral/diophantine.hpp"
#include "ncspectral/error.hpp"
#include "ncspectral/operator.hpp"
#include "ncspectral/zeta.hpp"
#include "ncspectral_cli/cli.hpp"

#ifndef NCSPECTRAL_VERSION
#define NCSPECTRAL_VERSION "0.0.0"
#endif

namespace ncspectral::cli {

namespace {

using nlohmann::json;

std::string fmt(double x) { return format_double(x); }

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + fmt(v[i]);
  return s;
}

std::string join(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
  return s;
}

json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

ops::SpectralTriple triple(const RunConfig& cfg) {
  return ops::SpectralTriple(resolve_theta(cfg.torus, cfg.dio.depth));
}

std::vector<double> lambda_grid(const RunConfig& cfg) {
  return cfg.action.lambdas.empty() ? action::default_lambda_grid() : cfg.action.lambdas;
}

action::WindowOptions window_options(const RunConfig& cfg) {
  action::WindowOptions w;
  w.seed = cfg.seed;
  w.threads = thread_count();
  return w;
}

// Anti-selfadjoint one-form with `modes` random modes, |k|_inf <= r.
weyl::OneForm random_one_form(std::mt19937_64& rng, int n, int modes, int r) {
  std::uniform_int_distribution<int> pt(-r, r), axis(0, n - 1);
  std::normal_distribution<double> g;
  weyl::OneForm A = weyl::OneForm::zero(n);
  for (int i = 0; i < modes; ++i) {
    Point k(n);
    for (int j = 0; j < n; ++j) k[j] = pt(rng);
    const Complex z = 0.3 * Complex(g(rng), g(rng));
    auto& c = A.components[static_cast<std::size_t>(axis(rng))];
    c.add_term(k, z);
    c.add_term(-k, -std::conj(z));
  }
  return A;
}

weyl::FourierElement random_unitary(std::mt19937_64& rng, int n, int r) {
  std::uniform_int_distribution<int> pt(-r, r);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi);
  Point k(n);
  for (int j = 0; j < n; ++j) k[j] = pt(rng);
  return weyl::FourierElement::weyl(k, std::polar(1.0, ph(rng)));
}

// ------------------------------------------------------------------ zeta

Artifacts zeta_eval(const RunConfig& cfg) {
  const int n = cfg.torus.n;
  const zeta::TwistedSeries f(n, Polynomial::parse(cfg.zeta.P, n), cfg.zeta.twist);
  Artifacts a;
  a.header = {"n", "P", "a", "s_re", "s_im", "value_re", "value_im", "est_error", "method"};
  a.results = json::array();
  for (double s : cfg.zeta.s) {
    const auto r = zeta::evaluate(f, Complex(s, cfg.zeta.s_im));
    a.rows.push_back({std::to_string(n), cfg.zeta.P, join(cfg.zeta.twist), fmt(r.s.real()), fmt(r.s.imag()),
                      fmt(r.value.real()), fmt(r.value.imag()), fmt(r.est_error), r.method});
    a.results.push_back({{"s", complex_json(r.s)},
                         {"value", complex_json(r.value)},
                         {"est_error", r.est_error},
                         {"method", r.method}});
  }
  return a;
}

Artifacts zeta_residue(const RunConfig& cfg) {
  const int n = cfg.torus.n;
  const auto P = Polynomial::parse(cfg.zeta.P, n);
  const int p = P.homogeneous_degree();
  const double c = cfg.zeta.shift == 0.0 ? n + p : cfg.zeta.shift;
  const double pole = n + p - c;  // Res_{s=pole} sum P(k) |k|^-(s+c)
  const auto at_pole = zeta::residue_shifted(n, P, n + p);
  const auto at_zero = zeta::residue_shifted(n, P, c);
  Artifacts a;
  a.header = {"n", "P", "shift", "pole_s", "residue_re", "residue_im", "residue_at_zero_re", "residue_at_zero_im"};
  a.rows.push_back({std::to_string(n), cfg.zeta.P, fmt(c), fmt(pole), fmt(at_pole.value.real()),
                    fmt(at_pole.value.imag()), fmt(at_zero.value.real()), fmt(at_zero.value.imag())});
  a.results = {{"n", n},
               {"P", P.to_string()},
               {"degree", p},
               {"shift", c},
               {"pole_s", pole},
               {"residue", complex_json(at_pole.value)},
               {"residue_at_zero", complex_json(at_zero.value)},
               {"pole_at_zero", at_zero.pole},
               {"sphere_integral", complex_json(zeta::sphere_integral(P))}};
  return a;
}

// ----------------------------------------------------------- diophantine

Artifacts dio_classify(const RunConfig& cfg) {
  dio::ScanOptions opt;
  opt.digits = cfg.dio.digits;
  opt.seed = cfg.seed;
  opt.threads = thread_count();
  dio::ApproximabilityReport rep;
  if (!cfg.dio.target.empty()) {
    std::vector<dio::RealSpec> a;
    for (const auto& t : cfg.dio.target) a.push_back(dio::RealSpec::parse(t));
    rep = dio::bv_search(a, cfg.dio.delta, cfg.dio.c, cfg.dio.qmax, opt);
  } else {
    rep = dio::classify_matrix(resolve_theta(cfg.torus, cfg.dio.depth), cfg.dio.delta, cfg.dio.c, cfg.dio.qmax,
                               cfg.dio.u_bound, opt);
  }
  Artifacts a;
  a.header = {"q", "m", "distance", "bound", "ambiguous"};
  for (const auto& w : rep.witnesses) {
    a.rows.push_back({join(w.q), w.m.str(), fmt(w.distance), fmt(w.bound), w.ambiguous ? "1" : "0"});
  }
  a.results = rep.to_json();
  return a;
}

Artifacts dio_construct(const RunConfig& cfg) {
  const auto jr = dio::jarnik_construct(dio::Profile::parse(cfg.dio.profile), static_cast<std::size_t>(cfg.dio.depth));
  Artifacts a;
  a.header = {"k", "a_k", "p_k", "q_k", "log10_error", "log10_gap", "log10_f", "exact", "holds"};
  for (const auto& c : jr.certificates) {
    a.rows.push_back({std::to_string(c.k), jr.cf.quotients[c.k].str(), jr.cf.p[c.k].str(), jr.cf.q[c.k].str(),
                      fmt(c.log10_error), fmt(c.log10_gap), fmt(c.log10_f), c.exact ? "1" : "0",
                      c.holds ? "1" : "0"});
  }
  a.results = jr.to_json();
  a.results["all_hold"] = jr.all_hold();
  a.results["irrationality_exponent_estimate"] = dio::irrationality_exponent_estimate(jr.cf).value;
  a.check_failed = !jr.all_hold();
  return a;
}

// ---------------------------------------------------------------- action

Artifacts action_fit(const RunConfig& cfg) {
  const auto st = triple(cfg);
  const auto A = resolve_one_form(st.n(), cfg.one_form);
  const auto phi = action::CutoffProfile::parse(cfg.action.profile);
  const auto grid = lambda_grid(cfg);
  const auto opt = window_options(cfg);
  const auto samples = action::spectral_action_grid(phi, grid, A, st, opt);
  std::vector<double> values;
  for (const auto& s : samples) values.push_back(s.value);
  const auto fit = action::fit_values(phi, st.n(), grid, values);

  Artifacts a;
  a.header = {"kind", "param", "value", "uncertainty"};
  for (const auto& s : samples) {
    a.rows.push_back({"sample", fmt(s.lambda), fmt(s.value), fmt(std::hypot(s.std_error, s.tail_bound))});
  }
  for (std::size_t i = 0; i < fit.c.size(); ++i) {
    a.rows.push_back({"c", std::to_string(fit.powers[i]), fmt(fit.c[i]), fmt(fit.c_uncertainty[i])});
  }
  const double target = zeta::zeta_D_residue(st.n());
  const double cn = fit.coefficient(st.n());
  const double un = fit.uncertainty(st.n());
  a.rows.push_back({"target", std::to_string(st.n()), fmt(target), "0"});
  a.results = fit.to_json();
  json samples_json = json::array();
  for (const auto& s : samples) {
    samples_json.push_back({{"lambda", s.lambda},
                            {"value", s.value},
                            {"std_error", s.std_error},
                            {"tail_bound", s.tail_bound},
                            {"method", s.method}});
  }
  a.results["samples"] = samples_json;
  a.results["c_n_target"] = target;
  a.results["c_n_relative_error"] = std::fabs(cn - target) / target;
  a.check_failed = cfg.action.check && std::fabs(cn - target) > std::max(3.0 * un, 1e-4 * target);
  return a;
}

Artifacts action_heat(const RunConfig& cfg) {
  const auto st = triple(cfg);
  const auto A = resolve_one_form(st.n(), cfg.one_form);
  action::HeatMethod method;
  if (cfg.action.heat_method == "exact") method = action::HeatMethod::ExactFormula;
  else if (cfg.action.heat_method == "dense") method = action::HeatMethod::DenseWindow;
  else throw Error(ErrorKind::Config, "heat method must be exact or dense");
  const std::vector<double> ts = cfg.action.t.empty() ? std::vector<double>{1e-3, 1e-2, 1e-1, 1.0} : cfg.action.t;
  Artifacts a;
  a.header = {"t", "value_re", "value_im", "std_error", "tail_bound", "cutoff_radius", "method", "basis"};
  a.results = json::array();
  const auto opt = window_options(cfg);
  for (double t : ts) {
    const auto h = action::heat_trace(A, st, t, method, opt);
    a.rows.push_back({fmt(h.t), fmt(h.value.real()), fmt(h.value.imag()), fmt(h.std_error), fmt(h.tail_bound),
                      fmt(h.cutoff_radius), h.method, std::to_string(h.basis)});
    a.results.push_back({{"t", h.t},
                         {"value", complex_json(h.value)},
                         {"std_error", h.std_error},
                         {"tail_bound", h.tail_bound},
                         {"method", h.method},
                         {"free_value", action::heat_trace_free(st.n(), t).value.real()}});
  }
  return a;
}

Artifacts action_constant_term(const RunConfig& cfg) {
  const auto st = triple(cfg);
  const auto A = resolve_one_form(st.n(), cfg.one_form);
  action::SymbolOptions opt;
  opt.expansion_order = cfg.action.expansion_order;
  const auto ct = action::constant_term(A, st, opt);
  Artifacts a;
  a.header = {"kind", "q", "re", "im", "error"};
  for (const auto& t : ct.terms) {
    a.rows.push_back({"nc_integral", std::to_string(t.q), fmt(t.value.real()), fmt(t.value.imag()),
                      fmt(t.truncation_error)});
  }
  a.rows.push_back({"constant_term", "", fmt(ct.value.real()), fmt(ct.value.imag()), fmt(ct.truncation_error)});
  a.results = ct.to_json();
  if (ct.target) {
    a.rows.push_back({"target", "", fmt(ct.target->real()), fmt(ct.target->imag()), "0"});
    const double scale = std::max(std::abs(*ct.target), 1e-300);
    const double rel = std::abs(ct.value - *ct.target) / scale;
    // Absolute check when the target vanishes.
    const double err = std::abs(*ct.target) == 0.0 ? std::abs(ct.value) : rel;
    double tol = cfg.tolerances.constant_term;
    const double est = std::abs(*ct.target) == 0.0 ? ct.truncation_error : ct.truncation_error / scale;
    if (est > tol) tol = std::max(tol, 0.05);
    a.results["deviation"] = err;
    a.results["tolerance"] = tol;
    a.check_failed = cfg.action.check && !(err <= tol);
  }
  return a;
}

std::vector<action::ScalingEntry> families(const RunConfig& cfg) {
  std::vector<action::ScalingEntry> out;
  for (const auto& f : cfg.action.families) {
    TorusSpec t = cfg.torus;
    t.theta = f;
    t.matrix.clear();
    out.push_back({f, resolve_theta(t, cfg.dio.depth)});
  }
  return out;
}

Artifacts action_correction(const RunConfig& cfg) {
  const auto fam = families(cfg);
  const auto ts = cfg.action.t.empty() ? action::log_grid(1e-4, 1e-1, 10) : cfg.action.t;
  action::ScalingOptions opt;
  opt.qmax = cfg.action.probe_qmax;
  opt.noise_floor = cfg.action.noise_floor;
  const auto rows = action::correction_scaling(fam, ts, opt);
  Artifacts a;
  a.header = {"label", "t", "delta", "base"};
  a.results = json::array();
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.t.size(); ++i) a.rows.push_back({r.label, fmt(r.t[i]), fmt(r.delta[i]), fmt(r.base[i])});
    auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
    a.results.push_back({{"label", r.label},
                         {"slope", num(r.slope)},
                         {"intercept", num(r.intercept)},
                         {"r2", num(r.r2)},
                         {"exponentially_small", r.exponentially_small}});
  }
  return a;
}

// -------------------------------------------------------------------- op

Artifacts op_check(const RunConfig& cfg) {
  const auto st = triple(cfg);
  const int n = st.n();
  const auto probe = ops::default_probe(n);
  const double tol = cfg.tolerances.op;
  std::mt19937_64 rng(cfg.seed);
  Artifacts a;
  a.header = {"suite", "case", "deviation", "tolerance", "pass"};
  json summary = json::object();
  auto record = [&](const std::string& suite, const std::string& label, double dev) {
    const bool pass = dev <= tol;
    a.rows.push_back({suite, label, fmt(dev), fmt(tol), pass ? "1" : "0"});
    auto& s = summary[suite];
    if (s.is_null()) s = {{"cases", 0}, {"failures", 0}, {"max_deviation", 0.0}};
    s["cases"] = s["cases"].get<int>() + 1;
    if (!pass) s["failures"] = s["failures"].get<int>() + 1;
    s["max_deviation"] = std::max(s["max_deviation"].get<double>(), dev);
    if (!pass) a.check_failed = true;
  };
  for (const auto& suite : cfg.op.suites) {
    if (suite == "puregauge") {
      for (const auto& k : box_points(n, 3)) {
        std::vector<std::int64_t> kv;
        for (int i = 0; i < n; ++i) kv.push_back(k[i]);
        const std::string label = join(kv);
        record(suite, label, std::max(ops::pure_gauge_check(k, st, probe), ops::pure_gauge_vanishing(k, st, probe)));
      }
    } else if (suite == "covariance") {
      const auto D = ops::dirac(st);
      for (int i = 0; i < cfg.op.trials; ++i) {
        const auto u = random_unitary(rng, n, 3);
        record(suite, std::to_string(i), ops::max_deviation(ops::conjugate_by_Vu(D, u, st), D, probe));
      }
    } else if (suite == "gauge-dirac") {
      for (int i = 0; i < cfg.op.trials; ++i) {
        const auto A = random_one_form(rng, n, 3, 2);
        const auto u = random_unitary(rng, n, 3);
        const auto lhs = ops::conjugate_by_Vu(ops::covariant_dirac(A, st), u, st);
        const auto rhs = ops::covariant_dirac(ops::gauge_transform(u, A, st.theta), st);
        record(suite, std::to_string(i), ops::max_deviation(lhs, rhs, probe));
      }
    } else if (suite == "square") {
      for (int i = 0; i < cfg.op.square_trials; ++i) {
        record(suite, std::to_string(i), ops::square_expansion_check(random_one_form(rng, n, 3, 1), st, probe));
      }
    } else {
      throw Error(ErrorKind::Config, "unknown op suite '" + suite + "' (puregauge, covariance, gauge-dirac, square)");
    }
  }
  a.results = summary;
  a.results["passed"] = !a.check_failed;
  return a;
}

}  // namespace

std::string version() { return NCSPECTRAL_VERSION; }

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_csv(const Artifacts& a) {
  auto cell = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  std::ostringstream out;
  for (std::size_t i = 0; i < a.header.size(); ++i) out << (i ? "," : "") << cell(a.header[i]);
  out << "\n";
  for (const auto& r : a.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << cell(r[i]);
    out << "\n";
  }
  return out.str();
}

Artifacts run_command(const std::string& command, const RunConfig& cfg) {
  if (command == "zeta eval") return zeta_eval(cfg);
  if (command == "zeta residue") return zeta_residue(cfg);
  if (command == "dio classify") return dio_classify(cfg);
  if (command == "dio construct") return dio_construct(cfg);
  if (command == "action fit") return action_fit(cfg);
  if (command == "action heat") return action_heat(cfg);
  if (command == "action constant-term") return action_constant_term(cfg);
  if (command == "action correction") return action_correction(cfg);
  if (command == "op check") return op_check(cfg);
  throw Error(ErrorKind::Unsupported, "unknown subcommand '" + command + "'");
}

void write_artifacts(const std::string& command, const RunConfig& cfg, const Artifacts& a) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Config, "cannot create output directory '" + cfg.output + "'");
  {
    std::ofstream csv(dir / "results.csv", std::ios::binary);
    csv << to_csv(a);
  }
  json resolved = {{"threads", thread_count()}};
  try {
    resolved["theta"] = resolve_theta(cfg.torus, cfg.dio.depth).row_major();
  } catch (const Error&) {
    resolved["theta"] = nullptr;
  }
  const json summary = {{"command", command},
                        {"version", version()},
                        {"config", cfg.to_json()},
                        {"resolved", resolved},
                        {"check_failed", a.check_failed},
                        {"results", a.results}};
  std::ofstream js(dir / "summary.json", std::ios::binary);
  js << summary.dump(2) << "\n";
}

}  // namespace ncspectral::cli
