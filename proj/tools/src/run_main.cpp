#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "ncspectral/error.hpp"
#include "ncspectral/numeric.hpp"
#include "ncspectral_cli/cli.hpp"

namespace ncspectral::cli {

namespace {

// Flag values that override config keys only when given.
struct Overrides {
  std::string config_path;
  std::optional<std::string> out, theta, profile, P, dio_profile, heat_method;
  std::optional<int> n, depth, u_bound, digits, order, probe_qmax, trials;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  std::optional<double> shift, s_im, delta, c, noise_floor, tol;
  std::optional<std::int64_t> qmax;
  std::vector<std::string> modes, target, families, suites;
  std::vector<double> s, twist, lambdas, t;
  bool check = false;
  bool all = false;
};

void apply(const Overrides& o, RunConfig& cfg) {
  if (o.out) cfg.output = *o.out;
  if (o.n) cfg.torus.n = *o.n;
  if (o.theta) {
    cfg.torus.theta = *o.theta;
    cfg.torus.matrix.clear();
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.threads) cfg.threads = *o.threads;
  if (!o.modes.empty()) {
    cfg.one_form.clear();
    for (const auto& m : o.modes) cfg.one_form.push_back(parse_mode(m));
  }
  if (o.P) cfg.zeta.P = *o.P;
  if (o.shift) cfg.zeta.shift = *o.shift;
  if (o.s_im) cfg.zeta.s_im = *o.s_im;
  if (!o.s.empty()) cfg.zeta.s = o.s;
  if (!o.twist.empty()) cfg.zeta.twist = o.twist;
  if (!o.target.empty()) cfg.dio.target = o.target;
  if (o.delta) cfg.dio.delta = *o.delta;
  if (o.c) cfg.dio.c = *o.c;
  if (o.qmax) cfg.dio.qmax = *o.qmax;
  if (o.u_bound) cfg.dio.u_bound = *o.u_bound;
  if (o.digits) cfg.dio.digits = *o.digits;
  if (o.dio_profile) cfg.dio.profile = *o.dio_profile;
  if (o.depth) cfg.dio.depth = *o.depth;
  if (o.profile) cfg.action.profile = *o.profile;
  if (!o.lambdas.empty()) cfg.action.lambdas = o.lambdas;
  if (!o.t.empty()) cfg.action.t = o.t;
  if (o.heat_method) cfg.action.heat_method = *o.heat_method;
  if (o.order) cfg.action.expansion_order = *o.order;
  if (!o.families.empty()) cfg.action.families = o.families;
  if (o.probe_qmax) cfg.action.probe_qmax = *o.probe_qmax;
  if (o.noise_floor) cfg.action.noise_floor = *o.noise_floor;
  if (o.check) cfg.action.check = true;
  if (!o.suites.empty()) cfg.op.suites = o.suites;
  if (o.all) cfg.op.suites = OpSpec{}.suites;
  if (o.trials) cfg.op.trials = *o.trials;
}

int exit_code_for(ErrorKind k) {
  return k == ErrorKind::Config ? kExitBadConfig : kExitPrecondition;
}

}  // namespace

int run_main(int argc, const char* const* argv) {
  CLI::App app{"Spectral action on the noncommutative torus: zeta residues, Diophantine checks, "
               "heat traces and spectral-action fits. Writes results.csv and summary.json."};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;

  app.add_option("--config", o.config_path, "JSON run configuration");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--threads", o.threads, "worker cap (default: NCSPECTRAL_THREADS or 1)");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--n", o.n, "torus dimension");
  app.add_option("--theta", o.theta, "golden | zero | rational:p/q | jarnik:<profile> | planar:<x>");
  app.add_option("--mode", o.modes, "one-form mode axis:k1,k2,...:re[,im] (repeatable)");

  auto* zeta = app.add_subcommand("zeta", "twisted Epstein series");
  zeta->require_subcommand(1);
  auto* zeval = zeta->add_subcommand("eval", "evaluate the continued series");
  zeval->footer("CSV: n,P,a,s_re,s_im,value_re,value_im,est_error,method");
  zeval->add_option("--P", o.P, "homogeneous polynomial, e.g. k1^2*k2^2");
  zeval->add_option("--s", o.s, "real parts of s")->delimiter(',');
  zeval->add_option("--s-im", o.s_im, "imaginary part of s");
  zeval->add_option("--twist", o.twist, "twist a")->delimiter(',');
  auto* zres = zeta->add_subcommand("residue", "residue of sum P(k) |k|^-(s+shift)");
  zres->footer("CSV: n,P,shift,pole_s,residue_re,residue_im,residue_at_zero_re,residue_at_zero_im");
  zres->add_option("--P", o.P, "homogeneous polynomial");
  zres->add_option("--shift", o.shift, "offset c (default n + deg P)");

  auto* dio = app.add_subcommand("dio", "Diophantine tools");
  dio->require_subcommand(1);
  auto* dcls = dio->add_subcommand("classify", "badly-approximable scan of a vector or of Theta");
  dcls->footer("CSV: q,m,distance,bound,ambiguous (one row per witness)");
  dcls->add_option("--target", o.target, "reals: golden, sqrt2, rational:p/q, liouville, cf:..., decimals")
      ->delimiter(',');
  dcls->add_option("--delta", o.delta, "exponent delta");
  dcls->add_option("--c", o.c, "constant c");
  dcls->add_option("--qmax", o.qmax, "scan bound");
  dcls->add_option("--u-bound", o.u_bound, "|u|_inf bound for Theta^T u");
  dcls->add_option("--digits", o.digits, "decimal digits");
  auto* dcon = dio->add_subcommand("construct", "Jarnik construction with certificates");
  dcon->footer("CSV: k,a_k,p_k,q_k,log10_error,log10_gap,log10_f,exact,holds");
  dcon->add_option("--profile", o.dio_profile, "power:<alpha>[:<c>] | exp | power-log:<alpha>");
  dcon->add_option("--depth", o.depth, "number of partial quotients");

  auto* act = app.add_subcommand("action", "spectral action");
  act->require_subcommand(1);
  auto* afit = act->add_subcommand("fit", "fit S(Lambda) on Lambda^n..Lambda^0, Lambda^-1");
  afit->footer("CSV: kind,param,value,uncertainty (kind = sample | c | target)");
  afit->add_option("--profile", o.profile, "gaussian | super-gaussian | rational:<r>");
  afit->add_option("--lambdas", o.lambdas, "Lambda grid")->delimiter(',');
  afit->add_flag("--check", o.check, "exit 3 unless c_n matches 2^m vol(S^(n-1))");
  auto* aheat = act->add_subcommand("heat", "heat trace Tr exp(-t D_A^2)");
  aheat->footer("CSV: t,value_re,value_im,std_error,tail_bound,cutoff_radius,method,basis");
  aheat->add_option("--t", o.t, "sample times")->delimiter(',');
  aheat->add_option("--method", o.heat_method, "exact | dense");
  auto* act_ct = act->add_subcommand("constant-term", "zeta_{D_A}(0) - zeta_D(0) by noncommutative integrals");
  act_ct->footer("CSV: kind,q,re,im,error (kind = nc_integral | constant_term | target)");
  act_ct->add_option("--order", o.order, "symbol expansion order (default n+3)");
  act_ct->add_option("--tolerance", o.tol, "relative tolerance against the target");
  act_ct->add_flag("--check", o.check, "exit 3 if the target is missed");
  auto* acor = act->add_subcommand("correction", "scaling of twisted heat-trace corrections");
  acor->footer("CSV: label,t,delta,base");
  acor->add_option("--family", o.families, "theta presets")->delimiter(',');
  acor->add_option("--t", o.t, "log-spaced t grid")->delimiter(',');
  acor->add_option("--probe-qmax", o.probe_qmax, "probe length");
  acor->add_option("--noise-floor", o.noise_floor, "exponentially-small threshold");

  auto* op = app.add_subcommand("op", "operator identities");
  op->require_subcommand(1);
  auto* ochk = op->add_subcommand("check", "pure gauge, covariance, gauge-Dirac and square suites");
  ochk->footer("CSV: suite,case,deviation,tolerance,pass");
  ochk->add_flag("--all", o.all, "run every suite");
  ochk->add_option("--suite", o.suites, "puregauge,covariance,gauge-dirac,square")->delimiter(',');
  ochk->add_option("--trials", o.trials, "random cases per suite");
  ochk->add_option("--tolerance", o.tol, "deviation tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ExtrasError& e) {
    app.exit(e);
    return kExitUnknownCommand;
  } catch (const CLI::RequiredError& e) {
    app.exit(e);
    std::cerr << "subcommands: ";
    for (const auto& c : kCommands) std::cerr << "'" << c << "' ";
    std::cerr << "\n";
    return kExitUnknownCommand;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadConfig;
  }

  std::string command;
  for (const auto* group : app.get_subcommands()) {
    for (const auto* leaf : group->get_subcommands()) command = group->get_name() + " " + leaf->get_name();
  }

  try {
    RunConfig cfg = o.config_path.empty() ? RunConfig{} : RunConfig::load(o.config_path);
    apply(o, cfg);
    if (o.tol) {
      if (command == "op check") cfg.tolerances.op = *o.tol;
      else cfg.tolerances.constant_term = *o.tol;
    }
    set_thread_count(cfg.threads > 0 ? cfg.threads : default_thread_count());
    const Artifacts a = run_command(command, cfg);
    write_artifacts(command, cfg, a);
    std::cout << to_csv(a);
    if (a.check_failed) {
      std::cerr << command << ": check failed (see " << cfg.output << "/summary.json)\n";
      return kExitCheckFailed;
    }
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.kind() == ErrorKind::Config) std::cerr << app.help();
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }
}

}  // namespace ncspectral::cli
