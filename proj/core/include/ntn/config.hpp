#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ntn/env.hpp"
#include "ntn/scenario.hpp"
#include "ntn/trainer.hpp"

namespace ntn {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything one experiment run needs. Lengths in the file are km and are
/// converted to meters here.
struct ExperimentConfig {
  Scenario scenario;
  RewardMode mode = RewardMode::best_effort;
  Objective objective = Objective::ee_max;
  double d_max_m = km(1500.0);
  double sigma_d_m = km(1500.0);
  // Reward normalizers; unset values are derived from the scenario.
  std::optional<double> mu_r;
  std::optional<double> sigma_r;
  std::optional<double> mu_e;
  std::optional<double> sigma_e;
  TrainConfig train;
  std::vector<std::uint64_t> seeds{1};
  std::vector<std::string> baselines;
  std::string out_dir = "out";
};

/// INI text with sections [run] [scenario] [lane1] [lane2] [lane_mid]
/// [channel] [power] [reward] [marl] [baseline]. Throws ConfigError naming
/// the offending section and key on unknown, missing or malformed entries.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Stable textual form of every setting; equal configs give equal text.
std::string canonical_config(const ExperimentConfig& c);

/// FNV-1a 64 of canonical_config().
std::uint64_t config_hash(const ExperimentConfig& c);

std::uint64_t fnv1a64(std::string_view bytes);

/// Normalizers with explicit values taking precedence over derived ones.
RewardWeights reward_weights(const ExperimentConfig& c);

}  // namespace ntn
