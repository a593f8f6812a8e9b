#pragma once

// Run configuration shared by every subcommand: JSON in, JSON out, with
// command-line flags overriding individual keys.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ncspectral/action.hpp"
#include "ncspectral/weyl.hpp"

namespace ncspectral::cli {

struct ModeSpec {
  int axis = 0;
  std::vector<std::int64_t> k;
  double re = 0.0;
  double im = 0.0;

  bool operator==(const ModeSpec&) const = default;
};

struct TorusSpec {
  int n = 2;
  /// golden, zero, rational:p/q, jarnik:<profile>, planar:<x>; ignored when matrix is set.
  std::string theta = "golden";
  std::vector<double> matrix;  // row-major n x n

  bool operator==(const TorusSpec&) const = default;
};

struct ZetaSpec {
  std::string P = "1";
  std::vector<double> twist;
  std::vector<double> s = {0.0, -1.0, 0.5, 3.0};
  double s_im = 0.0;
  double shift = 0.0;  // residue offset c; 0 selects n + deg P

  bool operator==(const ZetaSpec&) const = default;
};

struct DioSpec {
  std::vector<std::string> target;  // empty: classify the torus matrix
  double delta = 0.0;
  double c = 0.2;
  std::int64_t qmax = 1000;
  int u_bound = 3;
  int digits = 60;
  std::string profile = "power:4";
  int depth = 8;

  bool operator==(const DioSpec&) const = default;
};

struct ActionSpec {
  std::string profile = "gaussian";
  std::vector<double> lambdas;  // empty: 8 log-spaced in [6, 24]
  std::vector<double> t;        // heat: sample times; correction: log-spaced grid
  std::string heat_method = "exact";
  int expansion_order = -1;
  std::vector<std::string> families = {"rational:1/3", "golden", "jarnik:power:4"};
  int probe_qmax = 21;
  double noise_floor = 1e-12;
  bool check = false;

  bool operator==(const ActionSpec&) const = default;
};

struct OpSpec {
  std::vector<std::string> suites = {"puregauge", "covariance", "gauge-dirac", "square"};
  int trials = 20;
  int square_trials = 10;

  bool operator==(const OpSpec&) const = default;
};

struct Tolerances {
  double op = 1e-13;
  double constant_term = 0.01;

  bool operator==(const Tolerances&) const = default;
};

struct RunConfig {
  TorusSpec torus;
  std::vector<ModeSpec> one_form;
  ZetaSpec zeta;
  DioSpec dio;
  ActionSpec action;
  OpSpec op;
  Tolerances tolerances;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: NCSPECTRAL_THREADS or 1
  std::string output = "ncspectral-out";

  bool operator==(const RunConfig&) const = default;

  nlohmann::json to_json() const;
  /// Throws Error{Config} on unknown keys or wrong types.
  static RunConfig from_json(const nlohmann::json& j);
  /// Throws Error{Config} for an unreadable, empty or malformed file.
  static RunConfig load(const std::string& path);
};

/// Resolves a theta preset for dimension n. rational and jarnik presets
/// fill Theta_12 only when n > 2.
weyl::DeformationMatrix resolve_theta(const TorusSpec& t, int jarnik_depth = 8);
/// Modes expanded as z U_k - conj(z) U_-k.
weyl::OneForm resolve_one_form(int n, const std::vector<ModeSpec>& modes);
/// Parses "axis:k1,k2,...:re[,im]".
ModeSpec parse_mode(const std::string& s);

}  // namespace ncspectral::cli
