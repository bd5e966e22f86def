#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>

#include "ntn/trainer.hpp"

namespace ntn {

/// Checkpoint layout:
///
///   NTNCKPT1
///   seed <decimal>
///   config_hash <16 hex digits>
///   agents <J>
///   heads <lane1>,<lane2>,<accel_x>,<accel_y>
///   actor <j> <comma separated layer sizes>     (one line per agent)
///   critic <comma separated layer sizes>
///   value_scale <critic output unit, shortest round-trip decimal>
///   blob <number of doubles>
///   <newline, then the blob>
///
/// The blob holds, per actor, its parameters followed by its RMSprop mean
/// squares, then the same for the critic. Every value is an IEEE-754
/// binary64 stored little-endian.
class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CheckpointMeta {
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
};

void save_checkpoint(const std::filesystem::path& path, const Learners& learners, const CheckpointMeta& meta);

struct LoadedCheckpoint {
  Learners learners;
  CheckpointMeta meta;
};

/// Restores networks and optimizer state. Throws CheckpointError on a
/// malformed file or when the shapes disagree with the expected ones.
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path, std::size_t observation_size,
                                 const ActionHeads& heads, int agents);

}  // namespace ntn
