#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "fedcache/sweep.hpp"

namespace fedcache {

// Flat `key = value` experiment configuration. `#` starts a comment; keys
// mirror the ExperimentConfig / WorkloadSpec / SweepSpec field names
// (e.g. n_clients, tau, policy, task, dim, tau_grid, repeats). Lists are
// comma separated. Unknown keys are rejected.
struct ConfigFile {
  std::map<std::string, std::string> values;
};

ConfigFile parse_config_text(const std::string& text);
ConfigFile load_config_file(const std::filesystem::path& path);

// Applies the file's keys on top of the given defaults. Experiment-level
// keys land in spec.base; grid-level keys land in the sweep spec. Throws
// std::invalid_argument naming the key for unknown keys or bad values.
void apply_config(const ConfigFile& file, SweepSpec& spec);

}  // namespace fedcache
