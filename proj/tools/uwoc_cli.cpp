// Command-line front end: figure presets, config runs and the validation suite.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "uwoc/config.hpp"
#include "uwoc/errors.hpp"
#include "uwoc/runner.hpp"
#include "uwoc/validation.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;
constexpr int kAcceptanceFailure = 4;

constexpr const char* kUnits = R"(Units:
  snr_sweep values are 10 log10(gamma_bar) in dB; gamma_bar is the average
  electrical SNR scale that multiplies h^2.
  power_sweep values are transmit powers in dBm. Underwater hop:
  gamma_bar = P^2 exp(-2 alpha_ext l_U) / sigma^2; terrestrial hop (mixed):
  gamma_bar_T = P^2 / sigma^2, the fog gain acting as its path loss.
  gamma_th_db is the outage threshold in dB.
Environment:
  UWOC_WORKERS overrides the config's worker count; --workers overrides both.
Exit codes: 0 success, 2 config error, 3 numerical failure, 4 acceptance failure.)";

std::optional<unsigned> env_workers() {
  const char* v = std::getenv("UWOC_WORKERS");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const unsigned long n = std::strtoul(v, &end, 10);
  if (*end != '\0' || n == 0 || n > 4096)
    throw uwoc::ConfigError({std::string("UWOC_WORKERS: must be an integer in [1, 4096] (got \"") +
                             v + "\")"});
  return static_cast<unsigned>(n);
}

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const uwoc::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  } catch (const uwoc::ParameterError& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kConfigError;
  } catch (const uwoc::ConvergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const uwoc::ContourError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const uwoc::PoleError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-layer underwater and mixed terrestrial-underwater optical link analysis"};
  app.footer(kUnits);
  app.require_subcommand(1);

  std::string config_path, preset_name, out_dir, profile = "strict", format = "csv";
  std::optional<std::uint64_t> trials, seed;
  std::optional<unsigned> workers;

  auto* run = app.add_subcommand("run", "Compute the CSV series of a config or preset");
  auto* src = run->add_option_group("source");
  src->add_option("--config", config_path, "JSON run config")->check(CLI::ExistingFile);
  src->add_option("--preset", preset_name, "Built-in figure preset");
  src->require_option(1);
  run->add_option("--out", out_dir, "Output directory (default: the config's outputs.dir)");
  run->add_option("--mc-trials", trials, "Monte Carlo trials; 0 drops the MC columns");
  run->add_option("--seed", seed, "Monte Carlo seed");
  run->add_option("--workers", workers, "Monte Carlo worker threads")->check(CLI::PositiveNumber);
  run->add_option("--tolerance-profile", profile, "strict or fast")
      ->check(CLI::IsMember({"strict", "fast"}));
  run->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv"}));

  auto* val = app.add_subcommand("validate", "Run every registered invariant and oracle check");
  std::uint64_t v_trials = uwoc::SuiteOptions{}.trials, v_seed = uwoc::SuiteOptions{}.seed;
  std::optional<unsigned> v_workers;
  double inject = 0.0;
  val->add_option("--mc-trials", v_trials, "Trials per Monte Carlo check")
      ->check(CLI::Range(std::uint64_t{10000}, std::uint64_t{1} << 40));
  val->add_option("--seed", v_seed, "Monte Carlo seed");
  val->add_option("--workers", v_workers, "Monte Carlo worker threads")->check(CLI::PositiveNumber);
  val->add_option("--inject-foxh-error", inject,
                  "Fault injection: relative error added to every Fox-H result");

  auto* pre = app.add_subcommand("presets", "List presets or write their canonical configs");
  std::string write_dir;
  pre->add_option("--write", write_dir, "Directory for <name>.json files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  if (*run) {
    return guarded([&] {
      uwoc::RunConfig cfg =
          preset_name.empty() ? uwoc::parse_config_file(config_path) : uwoc::preset(preset_name);
      if (trials) {
        if (*trials != 0 && *trials < 10000)
          throw uwoc::ConfigError({"--mc-trials: must be 0 or >= 10000"});
        cfg.plan.trials = *trials;
      }
      if (seed) cfg.plan.seed = *seed;
      if (const auto w = env_workers()) cfg.plan.workers = *w;
      if (workers) cfg.plan.workers = *workers;
      const auto prof =
          profile == "fast" ? uwoc::ToleranceProfile::fast : uwoc::ToleranceProfile::strict;
      const uwoc::RunResult res = uwoc::run(cfg, prof);
      const auto files = uwoc::write_outputs(cfg, res, out_dir.empty() ? cfg.out_dir : out_dir);
      for (const auto& f : files) std::cout << f << "\n";
      if (!res.pass) {
        std::cerr << "Monte Carlo comparison outside tolerance; see the summary file\n";
        return kAcceptanceFailure;
      }
      return kOk;
    });
  }

  if (*val) {
    return guarded([&] {
      uwoc::SuiteOptions o;
      o.trials = v_trials;
      o.seed = v_seed;
      if (const auto w = env_workers()) o.workers = *w;
      if (v_workers) o.workers = *v_workers;
      o.foxh_perturbation = inject;
      const uwoc::SuiteReport rep = uwoc::validate_all(o);
      std::cout << rep.text();
      return rep.pass ? kOk : kAcceptanceFailure;
    });
  }

  return guarded([&] {
    if (write_dir.empty()) {
      for (const auto& n : uwoc::preset_names()) std::cout << n << "\n";
      return kOk;
    }
    std::filesystem::create_directories(write_dir);
    for (const auto& n : uwoc::preset_names()) {
      const auto p = std::filesystem::path(write_dir) / (n + ".json");
      std::ofstream(p, std::ios::binary) << uwoc::serialize_config(uwoc::preset(n));
      std::cout << p.string() << "\n";
    }
    return kOk;
  });
}
