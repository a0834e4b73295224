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

#include "balance/ddpg/trainer.hpp"

#include <array>
#include <cstdio>
#include <random>
#include <ostream>
#include <string>

#include "balance/ddpg/noise.hpp"

namespace balance::ddpg {

void write_training_log_header(std::ostream& os) {
  os << "episode,steps,return,critic_loss_mean,exploration_scale\n";
}

void write_training_log_row(std::ostream& os, const EpisodeLog& e) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%zu,%zu,%.9g,%.9g,%.9g\n", e.episode, e.steps, e.episode_return,
                e.critic_loss_mean, e.exploration_scale);
  os << buf;
}

double exploration_scale(std::size_t episode, std::size_t episodes, double final_scale) {
  if (episodes <= 1) return 1.0;
  const double f = static_cast<double>(episode) / static_cast<double>(episodes - 1);
  return 1.0 + (final_scale - 1.0) * f;
}

TrainingResult train(Environment& env, const Hyperparams& hp, std::uint64_t seed,
                     const TrainingCallbacks& callbacks, std::optional<Agent> initial) {
  hp.validate();
  std::seed_seq seq{seed, std::uint64_t{0x5eed}};
  std::array<std::uint64_t, 4> streams{};
  seq.generate(streams.begin(), streams.end());

  const Vector lower = env.action_lower();
  const Vector upper = env.action_upper();
  TrainingResult result{{}, initial ? std::move(*initial) : Agent(env.observation_size(), lower, upper, hp, streams[0]), 0};
  Agent& agent = result.agent;

  const Vector sigma = hp.noise_sigma * 0.5 * (upper - lower);
  OrnsteinUhlenbeck noise(sigma, hp.noise_decay, streams[1]);
  Rng sample_rng(streams[2]);
  Rng env_rng(streams[3]);
  ReplayBuffer buffer(hp.buffer_capacity);

  for (std::size_t ep = 0; ep < hp.episodes; ++ep) {
    const double scale = exploration_scale(ep, hp.episodes, hp.noise_final_scale);
    noise.reset();
    Vector obs = env.reset(env_rng);
    EpisodeLog log{ep, 0, 0.0, 0.0, scale};
    std::size_t updates = 0;

    for (std::size_t t = 0; t < hp.max_steps; ++t) {
      const Vector action = (agent.act_raw(obs) + noise.sample(1.0, scale)).cwiseMax(lower).cwiseMin(upper);
      const StepResult sr = env.step(action);
      buffer.add({obs, action, sr.reward, sr.observation, sr.terminal});
      log.episode_return += sr.reward;
      ++log.steps;

      if (buffer.size() >= hp.batch_size) {
        const Batch batch = buffer.sample(hp.batch_size, sample_rng);
        try {
          log.critic_loss_mean += agent.critic_update(batch);
          agent.actor_update(batch);
        } catch (const NonFiniteLossError& e) {
          throw NonFiniteLossError(std::string(e.what()) + " (episode " + std::to_string(ep) + ", step " +
                                   std::to_string(t) + ", buffer " + std::to_string(buffer.size()) + ")");
        }
        agent.soft_update_targets();
        ++updates;
      }
      obs = sr.observation;
      if (sr.terminal || sr.truncated) break;
    }
    if (updates > 0) log.critic_loss_mean /= static_cast<double>(updates);
    result.log.push_back(log);
    result.episodes_completed = ep + 1;
    if (callbacks.on_episode && !callbacks.on_episode(log, agent)) break;
  }
  return result;
}

}  // namespace balance::ddpg
