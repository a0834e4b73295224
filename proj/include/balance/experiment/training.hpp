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

#include <cstddef>
#include <optional>
#include <vector>

#include "balance/ddpg/trainer.hpp"
#include "balance/experiment/config.hpp"
#include "balance/experiment/rollout.hpp"

namespace balance::experiment {

struct ValidationScore {
  std::size_t episodes = 0;  // training episodes completed when scored
  int standing = 0;          // survived quiet-standing rollouts
  int pushes = 0;            // balanced validation pushes

  int total() const { return standing + pushes; }
};

/// Scores a policy on the validation seeds and forces, which are kept apart
/// from the evaluation seeds so selection does not peek at the final test.
ValidationScore validate_policy(const Policy& policy, const ExperimentConfig& cfg);

struct BalanceTrainingResult {
  ddpg::TrainingResult run;
  /// Highest-scoring snapshot (the latest on ties); the final agent when
  /// validation is disabled.
  ddpg::Agent best;
  std::optional<ValidationScore> best_score;
  std::vector<ValidationScore> validations;
};

/// DDPG on BalanceEnv with periodic validation. User callbacks run before
/// validation and may stop training early.
BalanceTrainingResult train_balance(const ExperimentConfig& cfg, const ddpg::TrainingCallbacks& callbacks = {},
                                    std::optional<ddpg::Agent> initial = std::nullopt);

}  // namespace balance::experiment
