#include "ncspectral_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ncspectral/diophantine.hpp"
#include "ncspectral/error.hpp"

namespace ncspectral::cli {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where, const std::set<std::string>& keys) {
  if (!j.is_object()) throw Error(ErrorKind::Config, where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!keys.count(k)) throw Error(ErrorKind::Config, "unknown key '" + k + "' in " + where);
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

json RunConfig::to_json() const {
  json t = {{"n", torus.n}};
  if (torus.matrix.empty()) t["theta"] = torus.theta;
  else t["theta"] = torus.matrix;
  json modes = json::array();
  for (const auto& m : one_form) modes.push_back({{"axis", m.axis}, {"k", m.k}, {"re", m.re}, {"im", m.im}});
  return {
      {"torus", t},
      {"one_form", modes},
      {"zeta", {{"P", zeta.P}, {"twist", zeta.twist}, {"s", zeta.s}, {"s_im", zeta.s_im}, {"shift", zeta.shift}}},
      {"dio",
       {{"target", dio.target},
        {"delta", dio.delta},
        {"c", dio.c},
        {"qmax", dio.qmax},
        {"u_bound", dio.u_bound},
        {"digits", dio.digits},
        {"profile", dio.profile},
        {"depth", dio.depth}}},
      {"action",
       {{"profile", action.profile},
        {"lambdas", action.lambdas},
        {"t", action.t},
        {"heat_method", action.heat_method},
        {"expansion_order", action.expansion_order},
        {"families", action.families},
        {"probe_qmax", action.probe_qmax},
        {"noise_floor", action.noise_floor},
        {"check", action.check}}},
      {"op", {{"suites", op.suites}, {"trials", op.trials}, {"square_trials", op.square_trials}}},
      {"tolerances", {{"op", tolerances.op}, {"constant_term", tolerances.constant_term}}},
      {"seed", seed},
      {"threads", threads},
      {"output", output},
  };
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  try {
    require_object(j, "config",
                   {"torus", "one_form", "zeta", "dio", "action", "op", "tolerances", "seed", "threads", "output"});
    if (j.contains("torus")) {
      const auto& t = j["torus"];
      require_object(t, "torus", {"n", "theta"});
      read(t, "n", c.torus.n);
      if (t.contains("theta")) {
        if (t["theta"].is_string()) {
          c.torus.theta = t["theta"].get<std::string>();
        } else {
          c.torus.matrix = t["theta"].get<std::vector<double>>();
          c.torus.theta = "matrix";
        }
      }
    }
    if (j.contains("one_form")) {
      if (!j["one_form"].is_array()) throw Error(ErrorKind::Config, "one_form must be an array");
      for (const auto& m : j["one_form"]) {
        require_object(m, "one_form entry", {"axis", "k", "re", "im"});
        ModeSpec s;
        read(m, "axis", s.axis);
        read(m, "k", s.k);
        read(m, "re", s.re);
        read(m, "im", s.im);
        c.one_form.push_back(s);
      }
    }
    if (j.contains("zeta")) {
      const auto& z = j["zeta"];
      require_object(z, "zeta", {"P", "twist", "s", "s_im", "shift"});
      read(z, "P", c.zeta.P);
      read(z, "twist", c.zeta.twist);
      read(z, "s", c.zeta.s);
      read(z, "s_im", c.zeta.s_im);
      read(z, "shift", c.zeta.shift);
    }
    if (j.contains("dio")) {
      const auto& d = j["dio"];
      require_object(d, "dio", {"target", "delta", "c", "qmax", "u_bound", "digits", "profile", "depth"});
      read(d, "target", c.dio.target);
      read(d, "delta", c.dio.delta);
      read(d, "c", c.dio.c);
      read(d, "qmax", c.dio.qmax);
      read(d, "u_bound", c.dio.u_bound);
      read(d, "digits", c.dio.digits);
      read(d, "profile", c.dio.profile);
      read(d, "depth", c.dio.depth);
    }
    if (j.contains("action")) {
      const auto& a = j["action"];
      require_object(a, "action",
                     {"profile", "lambdas", "t", "heat_method", "expansion_order", "families", "probe_qmax",
                      "noise_floor", "check"});
      read(a, "profile", c.action.profile);
      read(a, "lambdas", c.action.lambdas);
      read(a, "t", c.action.t);
      read(a, "heat_method", c.action.heat_method);
      read(a, "expansion_order", c.action.expansion_order);
      read(a, "families", c.action.families);
      read(a, "probe_qmax", c.action.probe_qmax);
      read(a, "noise_floor", c.action.noise_floor);
      read(a, "check", c.action.check);
    }
    if (j.contains("op")) {
      const auto& o = j["op"];
      require_object(o, "op", {"suites", "trials", "square_trials"});
      read(o, "suites", c.op.suites);
      read(o, "trials", c.op.trials);
      read(o, "square_trials", c.op.square_trials);
    }
    if (j.contains("tolerances")) {
      const auto& t = j["tolerances"];
      require_object(t, "tolerances", {"op", "constant_term"});
      read(t, "op", c.tolerances.op);
      read(t, "constant_term", c.tolerances.constant_term);
    }
    read(j, "seed", c.seed);
    read(j, "threads", c.threads);
    read(j, "output", c.output);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("malformed config: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Error(ErrorKind::Config, "config '" + path + "' is empty");
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, "config '" + path + "' is not valid JSON: " + e.what());
  }
  return from_json(j);
}

weyl::DeformationMatrix resolve_theta(const TorusSpec& t, int jarnik_depth) {
  const int n = t.n;
  if (n < 1 || n > kMaxDim) throw Error(ErrorKind::Config, "torus.n must lie in 1.." + std::to_string(kMaxDim));
  if (!t.matrix.empty()) {
    if (t.matrix.size() != static_cast<std::size_t>(n * n)) {
      throw Error(ErrorKind::Config, "theta matrix needs n*n = " + std::to_string(n * n) + " entries");
    }
    try {
      return weyl::DeformationMatrix(n, t.matrix);
    } catch (const Error& e) {
      throw Error(ErrorKind::Config, e.what());
    }
  }
  const std::string& s = t.theta;
  if (s == "zero" || n == 1) return weyl::DeformationMatrix::zero(n);
  if (s == "golden") return weyl::DeformationMatrix::golden(n);
  double x = 0.0;  // Theta_12 / 2pi
  if (s.rfind("rational:", 0) == 0) {
    const auto slash = s.find('/', 9);
    if (slash == std::string::npos) throw Error(ErrorKind::Config, "rational preset needs p/q");
    try {
      const long long p = std::stoll(s.substr(9, slash - 9));
      const long long q = std::stoll(s.substr(slash + 1));
      if (q == 0) throw Error(ErrorKind::Config, "rational preset with q = 0");
      if (n == 2) return weyl::DeformationMatrix::rational_planar(p, q);
      x = static_cast<double>(p) / static_cast<double>(q);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Config, "bad rational preset '" + s + "'");
    }
  } else if (s.rfind("jarnik:", 0) == 0) {
    const auto jr = dio::jarnik_construct(dio::Profile::parse(s.substr(7)), static_cast<std::size_t>(jarnik_depth));
    x = jr.cf.to_double();
  } else if (s.rfind("planar:", 0) == 0) {
    if (n != 2) throw Error(ErrorKind::Config, "planar preset needs n = 2");
    try {
      return weyl::DeformationMatrix::planar(std::stod(s.substr(7)));
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Config, "bad planar preset '" + s + "'");
    }
  } else {
    throw Error(ErrorKind::Config,
                "unknown theta preset '" + s + "' (golden, zero, rational:p/q, jarnik:<profile>, planar:<x>)");
  }
  std::vector<double> m(static_cast<std::size_t>(n * n), 0.0);
  m[1] = 2.0 * kPi * x;
  m[static_cast<std::size_t>(n)] = -m[1];
  return weyl::DeformationMatrix(n, m);
}

weyl::OneForm resolve_one_form(int n, const std::vector<ModeSpec>& modes) {
  std::vector<weyl::OneFormMode> out;
  for (const auto& m : modes) {
    if (m.axis < 0 || m.axis >= n) throw Error(ErrorKind::Config, "one-form axis out of range");
    if (m.k.size() != static_cast<std::size_t>(n)) {
      throw Error(ErrorKind::Config, "one-form mode needs a lattice point with " + std::to_string(n) + " entries");
    }
    Point k(n);
    for (int i = 0; i < n; ++i) k[i] = m.k[static_cast<std::size_t>(i)];
    out.push_back({m.axis, k, Complex(m.re, m.im)});
  }
  return weyl::OneForm::from_modes(n, out);
}

ModeSpec parse_mode(const std::string& s) {
  // axis:k1,k2,...:re[,im]
  const auto a = s.find(':');
  const auto b = a == std::string::npos ? a : s.find(':', a + 1);
  if (b == std::string::npos) throw Error(ErrorKind::Config, "mode '" + s + "' must read axis:k1,k2,...:re[,im]");
  auto split = [](const std::string& t) {
    std::vector<std::string> out;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
  };
  ModeSpec m;
  try {
    m.axis = std::stoi(s.substr(0, a));
    for (const auto& x : split(s.substr(a + 1, b - a - 1))) m.k.push_back(std::stoll(x));
    const auto z = split(s.substr(b + 1));
    if (z.empty() || z.size() > 2) throw std::invalid_argument("coefficient");
    m.re = std::stod(z[0]);
    if (z.size() == 2) m.im = std::stod(z[1]);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::Config, "mode '" + s + "' must read axis:k1,k2,...:re[,im]");
  }
  return m;
}

}  // namespace ncspectral::cli
