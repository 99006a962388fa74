#include "fedcache/config_file.hpp"

#include <charconv>
#include <stdexcept>

#include "fedcache/report.hpp"

namespace fedcache {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(',', start);
    const auto item = trim(pos == std::string_view::npos
                               ? s.substr(start)
                               : s.substr(start, pos - start));
    if (!item.empty()) out.emplace_back(item);
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

template <typename T>
T to_number(const std::string& key, std::string_view s) {
  T v{};
  const auto sv = trim(s);
  const auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
  if (res.ec != std::errc{} || res.ptr != sv.data() + sv.size()) {
    throw std::invalid_argument("config key '" + key + "': bad value '" +
                                std::string(sv) + "'");
  }
  return v;
}

}  // namespace

ConfigFile parse_config_text(const std::string& text) {
  ConfigFile file;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line(text.data() + start,
                          (end == std::string::npos ? text.size() : end) - start);
    start = end == std::string::npos ? text.size() + 1 : end + 1;
    ++lineno;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty key");
    }
    file.values[std::string(key)] = std::string(value);
  }
  return file;
}

ConfigFile load_config_file(const std::filesystem::path& path) {
  return parse_config_text(read_text_file(path));
}

void apply_config(const ConfigFile& file, SweepSpec& spec) {
  for (const auto& [key, value] : file.values) {
    ExperimentConfig& base = spec.base;
    WorkloadSpec& wl = base.workload;
    if (key == "n_clients") {
      base.n_clients = to_number<int>(key, value);
    } else if (key == "clients_per_round") {
      base.clients_per_round = to_number<int>(key, value);
    } else if (key == "tau") {
      base.tau = to_number<double>(key, value);
    } else if (key == "cache_capacity") {
      base.cache_capacity = to_number<int>(key, value);
    } else if (key == "policy") {
      base.policy = parse_policy(value);
    } else if (key == "rounds") {
      base.rounds = to_number<int>(key, value);
    } else if (key == "seed") {
      base.seed = to_number<std::uint64_t>(key, value);
    } else if (key == "alpha") {
      base.priority.alpha = to_number<double>(key, value);
    } else if (key == "beta") {
      base.priority.beta = to_number<double>(key, value);
    } else if (key == "gamma") {
      base.priority.gamma = to_number<double>(key, value);
    } else if (key == "task") {
      wl.task = parse_task(value);
    } else if (key == "dim") {
      wl.dim = to_number<int>(key, value);
    } else if (key == "classes") {
      wl.classes = to_number<int>(key, value);
    } else if (key == "samples_per_client") {
      wl.samples_per_client.clear();
      for (const auto& item : split_list(value)) {
        wl.samples_per_client.push_back(to_number<int>(key, item));
      }
      if (wl.samples_per_client.empty()) {
        throw std::invalid_argument("config key 'samples_per_client': empty list");
      }
    } else if (key == "heterogeneity") {
      wl.heterogeneity = to_number<double>(key, value);
    } else if (key == "local_epochs") {
      wl.local_epochs = to_number<int>(key, value);
    } else if (key == "learning_rate") {
      wl.learning_rate = to_number<double>(key, value);
    } else if (key == "batch_size") {
      wl.batch_size = to_number<int>(key, value);
    } else if (key == "noise_std") {
      wl.noise_std = to_number<double>(key, value);
    } else if (key == "tau_grid") {
      spec.tau_grid.clear();
      for (const auto& item : split_list(value)) {
        spec.tau_grid.push_back(to_number<double>(key, item));
      }
    } else if (key == "capacity_grid") {
      spec.capacity_grid.clear();
      for (const auto& item : split_list(value)) {
        spec.capacity_grid.push_back(to_number<int>(key, item));
      }
    } else if (key == "policy_grid") {
      spec.policy_grid.clear();
      for (const auto& item : split_list(value)) {
        spec.policy_grid.push_back(parse_policy(item));
      }
    } else if (key == "repeats") {
      spec.repeats = to_number<int>(key, value);
    } else if (key == "objective") {
      spec.objective = parse_objective(value);
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
}

}  // namespace fedcache
