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

#include "balance/experiment/training.hpp"

#include <utility>

#include "balance/experiment/balance_env.hpp"

namespace balance::experiment {

ValidationScore validate_policy(const Policy& policy, const ExperimentConfig& cfg) {
  ValidationScore s;
  for (const auto& r : evaluate_standing(policy, cfg, cfg.validation_seeds)) s.standing += r.survived ? 1 : 0;
  for (double f : cfg.validation_forces) {
    s.pushes += push_outcome(policy, cfg, f).verdict == Verdict::Balanced ? 1 : 0;
  }
  return s;
}

BalanceTrainingResult train_balance(const ExperimentConfig& cfg, const ddpg::TrainingCallbacks& callbacks,
                                    std::optional<ddpg::Agent> initial) {
  BalanceEnv env(cfg);
  std::optional<ddpg::Agent> best;
  std::optional<ValidationScore> best_score;
  std::vector<ValidationScore> validations;

  const auto consider = [&](const ddpg::Agent& agent, std::size_t episodes) {
    ValidationScore s = validate_policy(agent_policy(agent), cfg);
    s.episodes = episodes;
    validations.push_back(s);
    if (!best_score || s.total() >= best_score->total()) {
      best_score = s;
      best.emplace(agent);
    }
  };

  ddpg::TrainingCallbacks cb;
  cb.on_episode = [&](const ddpg::EpisodeLog& e, const ddpg::Agent& agent) {
    const bool keep_going = !callbacks.on_episode || callbacks.on_episode(e, agent);
    const std::size_t done = e.episode + 1;
    if (cfg.validate_every > 0 && done % cfg.validate_every == 0) consider(agent, done);
    return keep_going;
  };

  ddpg::TrainingResult run = ddpg::train(env, cfg.hyperparams, cfg.seed, cb, std::move(initial));
  if (cfg.validate_every > 0 && (validations.empty() || validations.back().episodes != run.episodes_completed)) {
    consider(run.agent, run.episodes_completed);
  }
  if (!best) best.emplace(run.agent);
  return {std::move(run), std::move(*best), best_score, std::move(validations)};
}

}  // namespace balance::experiment
