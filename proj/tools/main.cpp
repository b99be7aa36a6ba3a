// horolab command line: batch experiment runner and verification suites.
//
//   horolab run --config cfg.txt [--seed S] [--workers W] [--out DIR]
//   horolab verify --suite identities|group|distance|mixing|full
//   horolab presets --list
//
// Exit codes for `run`: 0 completed, 1 config/IO error, 2 numeric failure.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "horolab/acceptance.hpp"
#include "horolab/config.hpp"
#include "horolab/runner.hpp"

namespace {

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            std::optional<int> workers, std::optional<std::string> out_dir) {
  horolab::ExperimentConfig config;
  try {
    config = horolab::ExperimentConfig::load(config_path);
    if (seed) config.seed = *seed;
    if (workers) config.workers = *workers;
    if (out_dir) config.out = *out_dir;
    config.validate();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  }

  horolab::RunReport report;
  try {
    report = horolab::run_experiment(config);
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  try {
    horolab::write_report_files(report, config.out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "output error: %s\n", e.what());
    return 1;
  }

  std::printf("haar_ref(f) = %.8f +- %.2e\n", report.haar_ref_f, report.haar_stderr_f);
  std::printf("%10s %-18s %14s %12s %10s\n", "param", "ensemble", "estimate", "abs_err", "terms");
  for (const auto& r : report.results)
    std::printf("%10lld %-18s %14.8f %12.3e %10lld\n", static_cast<long long>(r.param),
                r.ensemble.c_str(), r.estimate.real(), r.abs_err,
                static_cast<long long>(r.terms));
  for (const auto& f : report.fits)
    std::printf("fit %-14s delta_hat = %.4f  (r2 %.4f, %zu pts)\n", f.name.c_str(),
                f.fit.delta_hat, f.fit.r2, f.fit.points.size());
  std::printf("wall %.1fs -> %s/results.csv, %s/report.json\n", report.wall_seconds,
              config.out.c_str(), config.out.c_str());
  return 0;
}

int cmd_verify(const std::string& suite, int workers, bool quick,
               const std::optional<std::string>& out_dir) {
  horolab::AcceptanceOptions opts;
  opts.workers = workers;
  opts.quick = quick;
  try {
    const auto rows = horolab::run_suite(suite, opts, /*print_lines=*/true);
    if (out_dir) {
      horolab::RunReport report;
      report.verification = rows;
      horolab::write_report_files(report, *out_dir);
    }
    for (const auto& r : rows)
      if (!r.pass) return 1;
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "verify error: %s\n", e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"horolab: ensemble averages on the space of affine unimodular lattices"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an experiment config");
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers_run;
  std::optional<std::string> out_dir;
  run->add_option("--config", config_path, "config file path")->required();
  run->add_option("--seed", seed, "override the config seed");
  run->add_option("--workers", workers_run, "override the worker count (0 = hardware)");
  run->add_option("--out", out_dir, "override the output directory");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite = "full";
  int workers_verify = 0;
  bool quick = false;
  std::optional<std::string> verify_out;
  verify->add_option("--suite", suite, "identities|group|distance|mixing|full")->required();
  verify->add_option("--workers", workers_verify, "worker count (0 = hardware)");
  verify->add_flag("--quick", quick, "development shortcut with reduced sample sizes");
  verify->add_option("--out", verify_out, "also write the pass/fail table as a JSON report");

  auto* presets = app.add_subcommand("presets", "list experiment presets");
  bool list = false;
  presets->add_flag("--list", list, "print preset names");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(config_path, seed, workers_run, out_dir);
  if (verify->parsed()) return cmd_verify(suite, workers_verify, quick, verify_out);
  if (presets->parsed()) {
    for (const auto& name : horolab::ExperimentConfig::preset_names()) {
      const auto c = horolab::ExperimentConfig::preset_config(name);
      std::printf("%-18s section=%-22s f=%-16s psi=%s\n", name.c_str(), c.section.c_str(),
                  c.f.c_str(), c.psi.c_str());
    }
    return 0;
  }
  return 0;
}
