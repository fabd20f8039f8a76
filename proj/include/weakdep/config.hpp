#pragma once

// Experiment configuration and its JSON schema ("schema": 1).  Seeds are
// 64-bit unsigned decimal strings, moment-like quantities are JSON decimals,
// counts are integers.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "weakdep/bounds.hpp"
#include "weakdep/models.hpp"

namespace weakdep {

inline constexpr int kSchemaVersion = 1;

// Raised on malformed or inconsistent configuration; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Check { clt, moments, rate, bounds, decay_probe };

std::string check_name(Check c);
Check check_from_name(const std::string& name);

struct HeredityConfig {
  HeredityProblem problem;
  std::int64_t lag_max = 64;  // heredity curves are emitted for k = 0..lag_max
  bool operator==(const HeredityConfig& o) const;
};

struct TheoryBlock {
  double m = 3.0;
  Family family = Family::lambda;
  double decay_exp = 1.0;
  std::optional<HeredityConfig> heredity;
  bool operator==(const TheoryBlock& o) const;
};

struct ProbeConfig {
  std::vector<std::size_t> gaps;  // empty = powers of two up to n/4 (capped at 64)
  std::size_t block = 1;
  std::size_t n = 0;  // 0 = largest n_grid entry
  bool operator==(const ProbeConfig&) const = default;
};

struct ExperimentConfig {
  std::string name;
  ProcessSpec process;
  std::vector<std::size_t> n_grid;
  std::size_t replicates = 0;
  std::uint64_t master_seed = 0;
  std::vector<Check> checks;
  std::optional<TheoryBlock> theory;
  std::optional<double> moment_delta;  // moments check; derived from theory when absent
  ProbeConfig probe;
  std::filesystem::path output_dir;  // may be empty (resolved by the CLI)

  bool operator==(const ExperimentConfig& o) const;
};

// JSON (de)serialization.  parse(serialize(config)) == config.
nlohmann::json decay_law_to_json(const DecayLaw& law);
DecayLaw decay_law_from_json(const nlohmann::json& j);
nlohmann::json innovation_to_json(const InnovationSpec& innov);
InnovationSpec innovation_from_json(const nlohmann::json& j);
nlohmann::json coeff_window_to_json(const CoeffWindow& w);
CoeffWindow coeff_window_from_json(const nlohmann::json& j);
nlohmann::json process_to_json(const ProcessSpec& spec);
ProcessSpec process_from_json(const nlohmann::json& j);
nlohmann::json theory_to_json(const TheoryBlock& theory);
TheoryBlock theory_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

ExperimentConfig load_config(const std::filesystem::path& file);

// Structural validation shared by every command: n_grid strictly increasing,
// replicates >= 100 for statistical checks, theory present where a check
// requires it.  Throws ConfigError.
void validate_config(const ExperimentConfig& config);

}  // namespace weakdep
