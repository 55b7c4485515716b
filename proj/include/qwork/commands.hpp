// Subcommand implementations behind the CLI front end. Each returns the
// process exit status: 0 success, 1 tolerance violation (files are still
// written), while configuration problems escape as ConfigError for the
// frontend to map to status 2.

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qwork/run_config.hpp"

namespace qwork {

struct CommandOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides [run] seed when present
};

int cmd_ttm(const ConfigMap& cfg, const CommandOptions& opts);
int cmd_mf(const ConfigMap& cfg, const CommandOptions& opts);
int cmd_oscillator(const ConfigMap& cfg, const CommandOptions& opts);
int cmd_verify(const ConfigMap& cfg, const CommandOptions& opts);

/// Built-in sweep configurations reproducing the two bundled parameter sets
/// (omega 1 -> 2 and omega 2 -> 1). Accepted names: "fig1", "fig2".
ConfigMap preset_config(const std::string& name);

}  // namespace qwork
