// Copyright 2026 The Balance Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "balance/ddpg/agent.hpp"

namespace balance::ddpg {

/*
 * Checkpoint container, little-endian:
 *   "BLCKPT\0\0"           8 bytes magic
 *   u32 version            currently 1
 *   u64 seed, u64 episodes completed
 *   hyperparameters        fixed field order, see checkpoint.cpp
 *   u64 obs size, u64 action size, f64 lower[act], f64 upper[act]
 *   actor, critic, actor target, critic target:
 *     per layer: u64 rows, u64 cols, f64 weights (row-major), f64 bias[rows]
 *   u64 FNV-1a hash of every preceding byte
 */
inline constexpr std::uint32_t kCheckpointVersion = 1;

class CheckpointCorrupt : public std::runtime_error {
 public:
  explicit CheckpointCorrupt(const std::string& what) : std::runtime_error(what) {}
};

struct Checkpoint {
  ActorCriticParams params;
  Hyperparams hyperparams;
  Vector action_lower;
  Vector action_upper;
  std::uint64_t seed = 0;
  std::uint64_t episodes = 0;

  Agent to_agent() const { return Agent(params, action_lower, action_upper, hyperparams); }
};

Checkpoint make_checkpoint(const Agent& agent, std::uint64_t seed, std::uint64_t episodes);

std::string serialize_checkpoint(const Checkpoint& c);
/// Throws CheckpointCorrupt on any structural or integrity problem.
Checkpoint deserialize_checkpoint(const std::string& bytes);

/// Writes to a sibling temporary file, then renames over the target.
void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace balance::ddpg
