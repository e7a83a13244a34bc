#pragma once

#include <map>
#include <set>
#include <string>

#include "nlwave/field.hpp"
#include "nlwave/kernel.hpp"

namespace nlwave {

/// Plain-text configuration: `[section]` headers followed by `key = value`
/// lines; '#' starts a comment. Keys are addressed as "section.key". Every
/// key must be consumed by the schema; finish() rejects leftovers.
class ConfigMap {
 public:
  static ConfigMap parse_file(const std::string& path);
  static ConfigMap parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& def) const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double def) const;
  double require_double(const std::string& key) const;
  int get_int(const std::string& key, int def) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t def) const;
  bool get_bool(const std::string& key, bool def) const;
  /// Whitespace-separated reals of the given length.
  VecD get_vec(const std::string& key, int dim) const;
  VecD get_vec_or(const std::string& key, const VecD& def) const;

  /// Throws config_error naming the first unknown (unconsumed) key.
  void finish() const;

 private:
  std::map<std::string, std::string> kv_;
  mutable std::set<std::string> consumed_;
};

struct RunConfig {
  std::string command;  // symbol | validate | solve-steady | solve-wave
  std::string out_dir = "out";
  std::uint64_t seed = 42;
  int threads = 1;

  GridSpec grid;
  KernelSpec kernel;
  double lambda = 1.0;

  // steady-solve data source
  std::string f_source = "random";  // random | mode | gaussian | file
  bool f_zero_mean = false;
  std::array<int, 3> f_mode{1, 0, 0};
  VecD f_amp;
  VecD f_center;
  double f_sigma = 0.1;
  std::string f_file;

  // wave run
  double wave_T = 1.0;
  std::string stepper = "exact";  // exact | leapfrog
  double dt = 0.0;
  int outputs = 8;
  std::string wave_forcing = "zero";  // zero | constant
  std::string u0_source = "gaussian";  // gaussian | random | zero
  std::string v0_source = "zero";      // gaussian | random | zero
  double u0_sigma = 0.08;
  VecD u0_center;
  VecD u0_amp;

  static RunConfig load(const std::string& path);
  static RunConfig from_map(const ConfigMap& map);
};

}  // namespace nlwave
