#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "slowvary/generators.hpp"

namespace slowvary::cli {

/// Raised for malformed configs; `path` is a JSON path such as "$.policies[1].name".
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::invalid_argument(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct PolicySpec {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
  std::string label;  // output file stem; defaults to name

  bool operator==(const PolicySpec&) const = default;
};

struct ExperimentConfig {
  std::variant<std::string, GeneratorSpec> instance;  // file path or inline generator
  std::vector<PolicySpec> policies;
  Timestep T = 0;
  std::int64_t n_runs = 10;
  std::uint64_t base_seed = 0;
  std::string output_dir = "out";
  std::int64_t decimation = 1;
  bool bound_overlays = false;
  std::vector<double> sweep_deltas;  // used by the sweep subcommand

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);

GeneratorSpec parse_generator_spec(const nlohmann::json& doc, const std::string& path = "$");
nlohmann::json to_json(const GeneratorSpec& spec);

/// Builds the config's instance. File instances are resolved relative to
/// `base_dir` and must have horizon T.
BanditInstance materialize(const ExperimentConfig& config, const std::filesystem::path& base_dir = {});

}  // namespace slowvary::cli
