#include "poro/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "poro/errors.hpp"
#include "poro/textio.hpp"

namespace poro {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  const char* c = v.c_str();
  char* end = nullptr;
  double x = std::strtod(c, &end);
  if (end == c || *end != '\0') {
    throw ConfigError("config key " + key + ": not a number: '" + v + "'");
  }
  return x;
}

long parse_long(const std::string& key, const std::string& v) {
  const char* c = v.c_str();
  char* end = nullptr;
  long x = std::strtol(c, &end, 10);
  if (end == c || *end != '\0') {
    throw ConfigError("config key " + key + ": not an integer: '" + v + "'");
  }
  return x;
}

// Accepts "[a, b, c]" or "a,b,c"; empty brackets give an empty list.
std::vector<std::string> split_list(const std::string& key,
                                    const std::string& v) {
  std::string body = trim(v);
  if (!body.empty() && body.front() == '[') {
    if (body.back() != ']') {
      throw ConfigError("config key " + key + ": unterminated list");
    }
    body = trim(body.substr(1, body.size() - 2));
  }
  std::vector<std::string> items;
  if (body.empty()) return items;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) {
      throw ConfigError("config key " + key + ": empty list entry");
    }
    items.push_back(item);
  }
  return items;
}

std::vector<double> parse_double_list(const std::string& key,
                                      const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(key, v)) {
    out.push_back(parse_double(key, item));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& item : split_list(key, v)) {
    out.push_back(static_cast<int>(parse_long(key, item)));
  }
  return out;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

void check_unit(const std::string& key, const std::vector<double>& f) {
  require(f.size() == 3, "config key " + key + ": needs 3 components");
  double n = std::sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]);
  require(std::abs(n - 1.0) < 1e-9, "config key " + key + ": not unit length");
}

double dot3(const std::vector<double>& a, const std::vector<double>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += g17(v[i]);
  }
  return s + "]";
}

std::string fmt_list(const std::vector<int>& v) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(v[i]);
  }
  return s + "]";
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    require(!key.empty(), "config line " + std::to_string(lineno) +
                              ": empty key");
    if (!seen.insert(key).second) {
      throw ConfigError("duplicate config key: " + key);
    }

    if (key == "problem") cfg.problem = val;
    else if (key == "formulation") cfg.formulation = val;
    else if (key == "dim") cfg.dim = static_cast<int>(parse_long(key, val));
    else if (key == "nx") cfg.nx = static_cast<int>(parse_long(key, val));
    else if (key == "ny") cfg.ny = static_cast<int>(parse_long(key, val));
    else if (key == "nz") cfg.nz = static_cast<int>(parse_long(key, val));
    else if (key == "length_x") cfg.length_x = parse_double(key, val);
    else if (key == "length_y") cfg.length_y = parse_double(key, val);
    else if (key == "length_z") cfg.length_z = parse_double(key, val);
    else if (key == "dt") cfg.dt = parse_double(key, val);
    else if (key == "t_ramp") cfg.t_ramp = parse_double(key, val);
    else if (key == "tol") cfg.tol = parse_double(key, val);
    else if (key == "max_steps") cfg.max_steps = static_cast<int>(parse_long(key, val));
    else if (key == "ramp_mode") cfg.ramp_mode = val;
    else if (key == "stages") cfg.stages = static_cast<int>(parse_long(key, val));
    else if (key == "aa_depth") cfg.aa_depth = parse_int_list(key, val);
    else if (key == "newton_abs_tol") cfg.newton_abs_tol = parse_double(key, val);
    else if (key == "newton_rel_tol") cfg.newton_rel_tol = parse_double(key, val);
    else if (key == "newton_max_iter") cfg.newton_max_iter = static_cast<int>(parse_long(key, val));
    else if (key == "C") cfg.C = parse_double(key, val);
    else if (key == "B") cfg.B = parse_double(key, val);
    else if (key == "b_ff") cfg.b_ff = parse_double(key, val);
    else if (key == "b_ss") cfg.b_ss = parse_double(key, val);
    else if (key == "b_nn") cfg.b_nn = parse_double(key, val);
    else if (key == "b_fs") cfg.b_fs = parse_double(key, val);
    else if (key == "b_fn") cfg.b_fn = parse_double(key, val);
    else if (key == "b_sn") cfg.b_sn = parse_double(key, val);
    else if (key == "fiber_f") cfg.fiber_f = parse_double_list(key, val);
    else if (key == "fiber_s") cfg.fiber_s = parse_double_list(key, val);
    else if (key == "fiber_n") cfg.fiber_n = parse_double_list(key, val);
    else if (key == "q1") cfg.q1 = parse_double(key, val);
    else if (key == "q2") cfg.q2 = parse_double(key, val);
    else if (key == "q3") cfg.q3 = parse_double(key, val);
    else if (key == "k") cfg.k = parse_double(key, val);
    else if (key == "rho_f") cfg.rho_f = parse_double(key, val);
    else if (key == "p_ref") cfg.p_ref = parse_double(key, val);
    else if (key == "phi_bar") cfg.phi_bar = parse_double(key, val);
    else if (key == "beta") cfg.beta = parse_double_list(key, val);
    else if (key == "p_source") cfg.p_source = parse_double_list(key, val);
    else if (key == "gravity_x") cfg.gravity_x = parse_double(key, val);
    else if (key == "gravity_y") cfg.gravity_y = parse_double(key, val);
    else if (key == "gravity_z") cfg.gravity_z = parse_double(key, val);
    else if (key == "out") cfg.out = val;
    else if (key == "seed") cfg.seed = static_cast<unsigned long>(parse_long(key, val));
    else throw ConfigError("unknown config key: " + key);
  }
  finalize_config(cfg);
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

void finalize_config(RunConfig& cfg) {
  require(cfg.dim == 2 || cfg.dim == 3, "config key dim: must be 2 or 3");
  if (cfg.dim == 2) {
    if (cfg.nx < 0) cfg.nx = 16;
    if (cfg.ny < 0) cfg.ny = cfg.nx;
    cfg.nz = 0;
    if (cfg.length_x < 0) cfg.length_x = 1.0;
    if (cfg.length_y < 0) cfg.length_y = cfg.length_x;
    cfg.length_z = 0.0;
  } else {
    if (cfg.nx < 0) cfg.nx = 10;
    if (cfg.ny < 0) cfg.ny = 2;
    if (cfg.nz < 0) cfg.nz = 2;
    if (cfg.length_x < 0) cfg.length_x = 5.0;
    if (cfg.length_y < 0) cfg.length_y = 1.0;
    if (cfg.length_z < 0) cfg.length_z = 1.0;
  }
  require(cfg.problem == "forward" || cfg.problem == "refconf" ||
              cfg.problem == "roundtrip",
          "config key problem: must be forward, refconf or roundtrip");
  require(cfg.formulation == "primal" || cfg.formulation == "mixed_p" ||
              cfg.formulation == "mixed_u",
          "config key formulation: must be primal, mixed_p or mixed_u");
  require(cfg.ramp_mode == "linear" || cfg.ramp_mode == "staged",
          "config key ramp_mode: must be linear or staged");
  require(cfg.nx >= 1, "config key nx: must be >= 1");
  require(cfg.ny >= 1, "config key ny: must be >= 1");
  require(cfg.dim == 2 || cfg.nz >= 1, "config key nz: must be >= 1");
  require(cfg.length_x > 0, "config key length_x: must be positive");
  require(cfg.length_y > 0, "config key length_y: must be positive");
  require(cfg.dim == 3 || cfg.length_y == cfg.length_x,
          "config key length_y: 2D domain is a square, must equal length_x");
  require(cfg.dim == 2 || cfg.length_z > 0,
          "config key length_z: must be positive");
  require(cfg.dt > 0, "config key dt: must be positive");
  require(cfg.t_ramp >= 0, "config key t_ramp: must be >= 0");
  require(cfg.tol > 0 && cfg.tol < 1, "config key tol: must be in (0, 1)");
  require(cfg.max_steps >= 1, "config key max_steps: must be >= 1");
  require(cfg.stages >= 1, "config key stages: must be >= 1");
  require(!cfg.aa_depth.empty(), "config key aa_depth: must be nonempty");
  for (int d : cfg.aa_depth) {
    require(d >= 0, "config key aa_depth: entries must be >= 0");
  }
  require(cfg.newton_abs_tol > 0, "config key newton_abs_tol: must be positive");
  require(cfg.newton_rel_tol >= 0, "config key newton_rel_tol: must be >= 0");
  require(cfg.newton_max_iter >= 1, "config key newton_max_iter: must be >= 1");
  require(cfg.C > 0, "config key C: must be positive");
  require(cfg.B >= 0, "config key B: must be >= 0");
  const std::pair<double, const char*> bcoef[] = {
      {cfg.b_ff, "b_ff"}, {cfg.b_ss, "b_ss"}, {cfg.b_nn, "b_nn"},
      {cfg.b_fs, "b_fs"}, {cfg.b_fn, "b_fn"}, {cfg.b_sn, "b_sn"}};
  for (auto [v, key] : bcoef) {
    require(v >= 0, std::string("config key ") + key + ": must be >= 0");
  }
  check_unit("fiber_f", cfg.fiber_f);
  check_unit("fiber_s", cfg.fiber_s);
  check_unit("fiber_n", cfg.fiber_n);
  require(std::abs(dot3(cfg.fiber_f, cfg.fiber_s)) < 1e-9 &&
              std::abs(dot3(cfg.fiber_f, cfg.fiber_n)) < 1e-9 &&
              std::abs(dot3(cfg.fiber_s, cfg.fiber_n)) < 1e-9,
          "config keys fiber_f/fiber_s/fiber_n: frame not orthogonal");
  require(cfg.q1 > 0, "config key q1: must be positive");
  require(cfg.q2 >= 0, "config key q2: must be >= 0");
  require(cfg.q3 > 0, "config key q3: must be positive");
  require(cfg.k > 0, "config key k: must be positive");
  require(cfg.rho_f > 0, "config key rho_f: must be positive");
  require(cfg.phi_bar > 0 && cfg.phi_bar < 1,
          "config key phi_bar: must be in (0, 1)");
  require(cfg.beta.size() == cfg.p_source.size(),
          "config keys beta and p_source: lists must have equal length");
  for (double b : cfg.beta) {
    require(b >= 0, "config key beta: entries must be >= 0");
  }
  require(!cfg.out.empty(), "config key out: must be nonempty");
}

std::string echo_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "# effective configuration\n";
  os << "# units: length = mesh unit (test geometries: cm), time = s,\n";
  os << "# pressure = Pa, k = length^2/(s Pa), beta = 1/(s Pa)\n";
  os << "problem = " << cfg.problem << "\n";
  os << "formulation = " << cfg.formulation << "\n";
  os << "dim = " << cfg.dim << "\n";
  os << "nx = " << cfg.nx << "\n";
  os << "ny = " << cfg.ny << "\n";
  if (cfg.dim == 3) os << "nz = " << cfg.nz << "\n";
  os << "length_x = " << g17(cfg.length_x) << "\n";
  os << "length_y = " << g17(cfg.length_y) << "\n";
  if (cfg.dim == 3) os << "length_z = " << g17(cfg.length_z) << "\n";
  os << "dt = " << g17(cfg.dt) << "\n";
  os << "t_ramp = " << g17(cfg.t_ramp) << "\n";
  os << "tol = " << g17(cfg.tol) << "\n";
  os << "max_steps = " << cfg.max_steps << "\n";
  os << "ramp_mode = " << cfg.ramp_mode << "\n";
  os << "stages = " << cfg.stages << "\n";
  os << "aa_depth = " << fmt_list(cfg.aa_depth) << "\n";
  os << "newton_abs_tol = " << g17(cfg.newton_abs_tol) << "\n";
  os << "newton_rel_tol = " << g17(cfg.newton_rel_tol) << "\n";
  os << "newton_max_iter = " << cfg.newton_max_iter << "\n";
  os << "C = " << g17(cfg.C) << "\n";
  os << "B = " << g17(cfg.B) << "\n";
  os << "b_ff = " << g17(cfg.b_ff) << "\n";
  os << "b_ss = " << g17(cfg.b_ss) << "\n";
  os << "b_nn = " << g17(cfg.b_nn) << "\n";
  os << "b_fs = " << g17(cfg.b_fs) << "\n";
  os << "b_fn = " << g17(cfg.b_fn) << "\n";
  os << "b_sn = " << g17(cfg.b_sn) << "\n";
  os << "fiber_f = " << fmt_list(cfg.fiber_f) << "\n";
  os << "fiber_s = " << fmt_list(cfg.fiber_s) << "\n";
  os << "fiber_n = " << fmt_list(cfg.fiber_n) << "\n";
  os << "q1 = " << g17(cfg.q1) << "\n";
  os << "q2 = " << g17(cfg.q2) << "\n";
  os << "q3 = " << g17(cfg.q3) << "\n";
  os << "k = " << g17(cfg.k) << "\n";
  os << "rho_f = " << g17(cfg.rho_f) << "\n";
  os << "p_ref = " << g17(cfg.p_ref) << "\n";
  os << "phi_bar = " << g17(cfg.phi_bar) << "\n";
  os << "beta = " << fmt_list(cfg.beta) << "\n";
  os << "p_source = " << fmt_list(cfg.p_source) << "\n";
  os << "gravity_x = " << g17(cfg.gravity_x) << "\n";
  os << "gravity_y = " << g17(cfg.gravity_y) << "\n";
  os << "gravity_z = " << g17(cfg.gravity_z) << "\n";
  os << "out = " << cfg.out << "\n";
  os << "seed = " << cfg.seed << "\n";
  return os.str();
}

MaterialParams to_material_params(const RunConfig& cfg) {
  MaterialParams m;
  m.C = cfg.C;
  m.B = cfg.B;
  m.b_ff = cfg.b_ff;
  m.b_ss = cfg.b_ss;
  m.b_nn = cfg.b_nn;
  m.b_fs = cfg.b_fs;
  m.b_fn = cfg.b_fn;
  m.b_sn = cfg.b_sn;
  for (int i = 0; i < 3; ++i) {
    m.fiber_f[i] = cfg.fiber_f[static_cast<size_t>(i)];
    m.fiber_s[i] = cfg.fiber_s[static_cast<size_t>(i)];
    m.fiber_n[i] = cfg.fiber_n[static_cast<size_t>(i)];
  }
  m.q1 = cfg.q1;
  m.q2 = cfg.q2;
  m.q3 = cfg.q3;
  m.k_perm = cfg.k;
  m.rho_f = cfg.rho_f;
  m.p_ref = cfg.p_ref;
  m.phi_bar = cfg.phi_bar;
  m.sources.clear();
  for (size_t i = 0; i < cfg.beta.size(); ++i) {
    m.sources.push_back({cfg.beta[i], cfg.p_source[i]});
  }
  m.gravity = {cfg.gravity_x, cfg.gravity_y, cfg.gravity_z};
  return m;
}

TimeStepperOptions to_stepper_options(const RunConfig& cfg) {
  TimeStepperOptions opt;
  opt.dt = cfg.dt;
  opt.t_ramp = cfg.t_ramp;
  opt.tol = cfg.tol;
  opt.max_steps = cfg.max_steps;
  opt.aa_depth = cfg.aa_depth.front();
  opt.ramp_mode = cfg.ramp_mode == "staged" ? RampMode::Staged : RampMode::Linear;
  opt.stages = cfg.stages;
  opt.newton.abs_tol = cfg.newton_abs_tol;
  opt.newton.rel_tol = cfg.newton_rel_tol;
  opt.newton.max_iter = cfg.newton_max_iter;
  return opt;
}

Formulation formulation_from_string(const std::string& name) {
  if (name == "primal") return Formulation::Primal;
  if (name == "mixed_p") return Formulation::MixedP;
  if (name == "mixed_u") return Formulation::MixedU;
  throw ConfigError("unknown formulation: " + name);
}

}  // namespace poro
