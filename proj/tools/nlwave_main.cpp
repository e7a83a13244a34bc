#include <CLI11.hpp>
#include <cstdio>
#include <exception>

#include "nlwave/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nlwave: spectral solver and validation suite for strongly "
               "coupled nonlocal elasticity systems"};
  std::string command, config_path, out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  bool have_seed = false, have_threads = false;
  app.add_option("command", command,
                 "symbol | validate | solve-steady | solve-wave")
      ->required();
  app.add_option("--config", config_path, "configuration file")->required();
  auto* out_opt = app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "override run.seed");
  auto* thr_opt = app.add_option("--threads", threads, "override run.threads");
  CLI11_PARSE(app, argc, argv);
  have_seed = seed_opt->count() > 0;
  have_threads = thr_opt->count() > 0;

  try {
    nlwave::RunConfig cfg = nlwave::RunConfig::load(config_path);
    cfg.command = command;
    if (out_opt->count() > 0) cfg.out_dir = out_dir;
    if (have_seed) cfg.seed = seed;
    if (have_threads) cfg.threads = threads;
    return nlwave::run_command(cfg);
  } catch (const nlwave::config_error& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 3;
  }
}
