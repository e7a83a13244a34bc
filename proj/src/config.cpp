#include "nlwave/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nlwave {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

ConfigMap ConfigMap::parse_string(const std::string& text) {
  ConfigMap m;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error("config line " + std::to_string(lineno) +
                           ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(lineno) +
                         ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw config_error("config line " + std::to_string(lineno) + ": empty key");
    std::string full = section.empty() ? key : section + "." + key;
    if (m.kv_.count(full))
      throw config_error("config: duplicate key " + full);
    m.kv_[full] = value;
  }
  return m;
}

ConfigMap ConfigMap::parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error("config: cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return parse_string(os.str());
}

bool ConfigMap::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string ConfigMap::get_string(const std::string& key,
                                  const std::string& def) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return def;
  consumed_.insert(key);
  return it->second;
}

std::string ConfigMap::require_string(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw config_error("config: missing required key " + key);
  consumed_.insert(key);
  return it->second;
}

double ConfigMap::require_double(const std::string& key) const {
  std::string v = require_string(key);
  if (v == "inf" || v == "infinity")
    return std::numeric_limits<double>::infinity();
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw config_error("config: key " + key + " is not a number: " + v);
  }
}

double ConfigMap::get_double(const std::string& key, double def) const {
  if (!has(key)) return def;
  return require_double(key);
}

int ConfigMap::get_int(const std::string& key, int def) const {
  if (!has(key)) return def;
  double d = require_double(key);
  int i = static_cast<int>(d);
  if (i != d) throw config_error("config: key " + key + " must be an integer");
  return i;
}

std::uint64_t ConfigMap::get_u64(const std::string& key,
                                 std::uint64_t def) const {
  if (!has(key)) return def;
  std::string v = require_string(key);
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw config_error("config: key " + key + " is not an unsigned integer");
  }
}

bool ConfigMap::get_bool(const std::string& key, bool def) const {
  if (!has(key)) return def;
  std::string v = require_string(key);
  std::transform(v.begin(), v.end(), v.begin(), ::tolower);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw config_error("config: key " + key + " is not a boolean");
}

VecD ConfigMap::get_vec(const std::string& key, int dim) const {
  std::string v = require_string(key);
  std::istringstream is(v);
  VecD out(dim);
  for (int i = 0; i < dim; ++i)
    if (!(is >> out[i]))
      throw config_error("config: key " + key + " needs " +
                         std::to_string(dim) + " numbers");
  double extra;
  if (is >> extra)
    throw config_error("config: key " + key + " has too many numbers");
  return out;
}

VecD ConfigMap::get_vec_or(const std::string& key, const VecD& def) const {
  if (!has(key)) return def;
  return get_vec(key, static_cast<int>(def.size()));
}

void ConfigMap::finish() const {
  for (const auto& [key, value] : kv_)
    if (!consumed_.count(key))
      throw config_error("config: unknown or unused key " + key);
}

namespace {

ConeSpec parse_cone(const ConfigMap& m, const std::string& prefix, int dim) {
  std::string kind = m.get_string(prefix, "full");
  if (kind == "full") return ConeSpec::Full(dim);
  if (kind != "caps")
    throw config_error("config: " + prefix + " must be 'full' or 'caps'");
  int count = m.get_int(prefix + ".count", 1);
  std::vector<Cap> caps;
  for (int i = 0; i < count; ++i) {
    std::string base = prefix + ".cap" + std::to_string(i);
    Cap cap;
    cap.axis = m.get_vec(base + ".axis", dim);
    double n = cap.axis.norm();
    if (n == 0) throw config_error("config: " + base + ".axis is zero");
    cap.axis /= n;
    cap.half_angle = m.require_double(base + ".angle");
    caps.push_back(cap);
  }
  return ConeSpec::CapUnion(dim, caps);
}

KernelSpec parse_kernel(const ConfigMap& m, int dim) {
  std::string cls = m.get_string("kernel.class", "B");
  if (cls == "B") {
    SingularKernel k;
    k.dim = dim;
    k.s = m.get_double("kernel.s", 0.5);
    k.truncation = m.get_double("kernel.r",
                                std::numeric_limits<double>::infinity());
    k.cone = parse_cone(m, "kernel.cone", dim);
    std::string mkind = m.get_string("kernel.m", "constant");
    DirectionWeight w;
    w.c0 = m.get_double("kernel.m.c0", 1.0);
    if (mkind == "constant") {
      // nothing else
    } else if (mkind == "linear" || mkind == "quadratic") {
      w.c1 = m.get_double("kernel.m.c1", 0.0);
      if (mkind == "quadratic") w.c2 = m.get_double("kernel.m.c2", 0.0);
      VecD def = VecD::Zero(dim);
      def[0] = 1.0;
      w.axis = m.get_vec_or("kernel.m.axis", def);
      w.axis /= w.axis.norm();
    } else {
      throw config_error("config: kernel.m must be constant, linear or quadratic");
    }
    k.m = w;
    return KernelSpec::singular(k);
  }
  if (cls != "A") throw config_error("config: kernel.class must be A or B");
  IntegrableKernel k;
  k.dim = dim;
  std::string family = m.get_string("kernel.family", "ball");
  double mass = m.get_double("kernel.mass", 1.0);
  if (family == "ball") {
    k.family = BallKernel{m.get_double("kernel.radius", 0.25), mass};
  } else if (family == "gaussian") {
    k.family = GaussianKernel{m.get_double("kernel.sigma", 0.1), mass};
  } else if (family == "offset-gaussian") {
    VecD def = VecD::Zero(dim);
    def[0] = 0.05;
    k.family = OffsetGaussianKernel{m.get_double("kernel.sigma", 0.1),
                                    m.get_vec_or("kernel.center", def), mass};
  } else if (family == "cone-indicator") {
    k.family = ConeIndicatorKernel{m.get_double("kernel.radius", 0.25),
                                   parse_cone(m, "kernel.cone", dim), mass};
  } else {
    throw config_error("config: unknown kernel.family " + family);
  }
  return KernelSpec::integrable(k);
}

}  // namespace

RunConfig RunConfig::from_map(const ConfigMap& m) {
  RunConfig cfg;
  cfg.command = m.get_string("run.command", "");
  cfg.out_dir = m.get_string("run.out", "out");
  cfg.seed = m.get_u64("run.seed", 42);
  cfg.threads = m.get_int("run.threads", 1);
  if (cfg.threads < 1) throw config_error("config: run.threads must be >= 1");

  cfg.grid.dim = m.get_int("grid.d", 2);
  cfg.grid.n = m.get_int("grid.N", 64);
  cfg.grid.length = m.get_double("grid.L", 1.0);
  cfg.grid.validate();

  cfg.kernel = parse_kernel(m, cfg.grid.dim);
  cfg.lambda = m.get_double("solve.lambda", 1.0);
  if (cfg.lambda < 0) throw config_error("config: solve.lambda must be >= 0");

  cfg.f_source = m.get_string("solve.f", "random");
  cfg.f_zero_mean = m.get_bool("solve.f.zero_mean", false);
  if (cfg.f_source == "mode") {
    VecD def = VecD::Zero(cfg.grid.dim);
    def[0] = 1;
    VecD kk = m.get_vec_or("solve.f.mode", def);
    for (int a = 0; a < cfg.grid.dim; ++a)
      cfg.f_mode[a] = static_cast<int>(kk[a]);
  }
  VecD amp_def = VecD::Ones(cfg.grid.dim);
  cfg.f_amp = m.get_vec_or("solve.f.amp", amp_def);
  VecD c_def = VecD::Constant(cfg.grid.dim, 0.5 * cfg.grid.length);
  cfg.f_center = m.get_vec_or("solve.f.center", c_def);
  cfg.f_sigma = m.get_double("solve.f.sigma", 0.1 * cfg.grid.length);
  cfg.f_file = m.get_string("solve.f.file", "");

  cfg.wave_T = m.get_double("wave.T", 1.0);
  cfg.stepper = m.get_string("wave.stepper", "exact");
  if (cfg.stepper != "exact" && cfg.stepper != "leapfrog")
    throw config_error("config: wave.stepper must be exact or leapfrog");
  cfg.dt = m.get_double("wave.dt", 0.0);
  cfg.outputs = m.get_int("wave.outputs", 8);
  if (cfg.outputs < 1) throw config_error("config: wave.outputs must be >= 1");
  cfg.wave_forcing = m.get_string("wave.forcing", "zero");
  if (cfg.wave_forcing != "zero" && cfg.wave_forcing != "constant")
    throw config_error("config: wave.forcing must be zero or constant");
  cfg.u0_source = m.get_string("wave.u0", "gaussian");
  cfg.v0_source = m.get_string("wave.v0", "zero");
  cfg.u0_sigma = m.get_double("wave.u0.sigma", 0.08 * cfg.grid.length);
  cfg.u0_center = m.get_vec_or("wave.u0.center", c_def);
  cfg.u0_amp = m.get_vec_or("wave.u0.amp", amp_def);

  m.finish();
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  return from_map(ConfigMap::parse_file(path));
}

}  // namespace nlwave
