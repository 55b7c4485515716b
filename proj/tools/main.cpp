// Command-line front end. Exit statuses: 0 success, 1 tolerance violation,
// 2 configuration or usage error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qwork/commands.hpp"

namespace {

struct SubArgs {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
};

void add_common_flags(CLI::App* sub, SubArgs& args, bool config_required) {
  auto* config_opt =
      sub->add_option("--config", args.config, "Run configuration file");
  if (config_required) config_opt->required();
  sub->add_option("--out", args.out, "Output directory (default: .)");
  sub->add_option("--seed", args.seed,
                  "Random seed override (defaults to [run] seed)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Work statistics for driven quantum systems"};
  app.require_subcommand(1);

  SubArgs ttm_args, mf_args, osc_args, verify_args;
  std::string preset;

  CLI::App* ttm = app.add_subcommand(
      "ttm", "Two-time-measurement work distribution and Jarzynski check");
  add_common_flags(ttm, ttm_args, true);

  CLI::App* mf = app.add_subcommand(
      "mf", "Measurement-free work distribution and modified identity");
  add_common_flags(mf, mf_args, true);

  CLI::App* osc = app.add_subcommand(
      "oscillator", "Closed-form oscillator sweep (CSV/JSON)");
  add_common_flags(osc, osc_args, false);
  osc->add_option("--preset", preset,
                  "Built-in parameter set: fig1 (omega 1->2) or fig2 (2->1)");

  CLI::App* verify = app.add_subcommand(
      "verify", "Identity/bound verification over seeded instances");
  add_common_flags(verify, verify_args, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0 through CLI11; real usage errors become
    // configuration errors (status 2).
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (ttm->parsed()) {
      return qwork::cmd_ttm(
          qwork::ConfigMap::parse_file(ttm_args.config),
          qwork::CommandOptions{ttm_args.out, ttm_args.seed});
    }
    if (mf->parsed()) {
      return qwork::cmd_mf(qwork::ConfigMap::parse_file(mf_args.config),
                           qwork::CommandOptions{mf_args.out, mf_args.seed});
    }
    if (osc->parsed()) {
      if (!preset.empty() && !osc_args.config.empty())
        throw qwork::ConfigError("give either --preset or --config, not both");
      if (preset.empty() && osc_args.config.empty())
        throw qwork::ConfigError("oscillator needs --preset or --config");
      qwork::ConfigMap cfg =
          preset.empty() ? qwork::ConfigMap::parse_file(osc_args.config)
                         : qwork::preset_config(preset);
      return qwork::cmd_oscillator(
          cfg, qwork::CommandOptions{osc_args.out, osc_args.seed});
    }
    if (verify->parsed()) {
      return qwork::cmd_verify(
          qwork::ConfigMap::parse_file(verify_args.config),
          qwork::CommandOptions{verify_args.out, verify_args.seed});
    }
  } catch (const qwork::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
