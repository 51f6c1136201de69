// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "enclosure.hpp"

namespace fs = std::filesystem;
using namespace enclosure;

namespace
{

struct Overrides
{
  std::optional<double> tau_min, tau_max;
  std::optional<int> tau_count, workers;
};

json read_json(const fs::path &path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open " + path.string());
  try
  {
    return json::parse(in);
  }
  catch (const json::parse_error &e)
  {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
}

void apply_overrides(json &cfg, const Overrides &o)
{
  if (o.tau_min)
    cfg["tau"]["min"] = *o.tau_min;
  if (o.tau_max)
    cfg["tau"]["max"] = *o.tau_max;
  if (o.tau_count)
    cfg["tau"]["count"] = *o.tau_count;
  if (o.workers)
    cfg["discretization"]["workers"] = *o.workers;
}

int summarize(const fs::path &report)
{
  const json r = read_json(report);
  std::printf("status %s\n", r.value("status", "?").c_str());
  if (r.contains("distance") && !r["distance"]["d_hat"].is_null())
    std::printf("d_hat %.6g (true %.6g)\n", r["distance"]["d_hat"].get<double>(),
                r["distance"]["true_distance"].get<double>());
  if (r.contains("sign"))
    std::printf("sign %s\n", r["sign"]["class"].get<std::string>().c_str());
  if (r.contains("coefficients") && !r["coefficients"]["gamma_hat"].is_null())
    std::printf("gamma_hat %.6g beta_hat %.6g\n", r["coefficients"]["gamma_hat"].get<double>(),
                r["coefficients"]["beta_hat"].get<double>());
  for (const auto &e : r.value("errors", json::array()))
    std::fprintf(stderr, "%s\n", e.get<std::string>().c_str());
  return 0;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Time-domain enclosure method: simulate, transform, extract"};
  app.require_subcommand(1);

  fs::path config, out = "out";
  Overrides ov;
  auto common = [&](CLI::App *sub, bool with_out) {
    sub->add_option("--config", config, "Configuration file (JSON)")->required()->check(CLI::ExistingFile);
    if (with_out)
      sub->add_option("--out", out, "Output directory");
    sub->add_option("--tau-min", ov.tau_min, "Smallest tau");
    sub->add_option("--tau-max", ov.tau_max, "Largest tau");
    sub->add_option("--tau-count", ov.tau_count, "Number of tau values");
    sub->add_option("--workers", ov.workers, "Worker threads");
  };
  CLI::App *run = app.add_subcommand("run", "Run one experiment");
  common(run, true);
  CLI::App *sweep_cmd = app.add_subcommand("sweep", "Run one experiment per parameter value");
  common(sweep_cmd, true);
  CLI::App *validate = app.add_subcommand("validate", "Check a configuration without running it");
  common(validate, false);
  CLI::App *reference = app.add_subcommand("emit-reference", "Write closed-form 1D reference curves");
  common(reference, true);

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (*sweep_cmd)
    {
      const json j = read_json(config);
      SweepSpec s = parse_sweep(j, config.parent_path());
      apply_overrides(s.base, Overrides{ov.tau_min, ov.tau_max, ov.tau_count, std::nullopt});
      // Runs are parallel; each run keeps one thread.
      s.base["discretization"]["workers"] = 1;
      fs::create_directories(out);
      const auto rows = sweep(s, ov.workers.value_or(detail::default_workers()));
      write_text(out / "sweep.csv", sweep_csv(rows));
      std::printf("%zu runs written to %s\n", rows.size(), (out / "sweep.csv").string().c_str());
      return 0;
    }

    json j = read_json(config);
    apply_overrides(j, ov);
    const ExperimentConfig cfg = parse_config(j);

    if (*validate)
    {
      std::printf("ok: %s (T = %.6g, threshold %.6g)\n", cfg.name.c_str(), cfg.observation_time(),
                  min_observation_time(cfg.scene, cfg.data_mode));
      return 0;
    }
    if (*reference)
    {
      fs::create_directories(out);
      write_text(out / "reference.csv", reference_csv(cfg));
      std::printf("wrote %s\n", (out / "reference.csv").string().c_str());
      return 0;
    }

    const RunArtifacts a = run_experiment(cfg, out);
    summarize(a.report);
    if (a.exit_code == 4)
      std::fprintf(stderr, "observation time is below the threshold; distance estimate is unreliable\n");
    return a.exit_code;
  }
  catch (const ConfigError &e)
  {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  catch (const std::exception &e)
  {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
