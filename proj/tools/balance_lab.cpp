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

// Command-line front end: train, eval, push, sweep, capacity, plot.
//
// Exit codes: 0 success, 1 other failure, 2 configuration or input error,
// 3 simulation or training blow-up.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "balance/ddpg/checkpoint.hpp"
#include "balance/ddpg/trainer.hpp"
#include "balance/experiment/balance_env.hpp"
#include "balance/experiment/config.hpp"
#include "balance/experiment/report.hpp"
#include "balance/experiment/rollout.hpp"
#include "balance/experiment/training.hpp"

namespace fs = std::filesystem;
using namespace balance;
using namespace balance::experiment;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBlowUp = 3;

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string checkpoint;
  std::string out;
  bool baseline = false;
};

ExperimentConfig resolve_config(const CommonOptions& o) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (!o.out.empty()) cfg.output_dir = o.out;
  cfg.validate();
  return cfg;
}

void check_compatible(const ddpg::Checkpoint& c, const ExperimentConfig& cfg) {
  if (c.params.actor.obs_size() != static_cast<Eigen::Index>(kObservationSize) ||
      c.action_lower.size() != static_cast<Eigen::Index>(kNumJoints)) {
    throw ConfigError("checkpoint network does not match the biped observation and action sizes");
  }
  if (!c.action_lower.isApprox(ddpg::Vector(joint_lower(cfg.model))) ||
      !c.action_upper.isApprox(ddpg::Vector(joint_upper(cfg.model)))) {
    throw ConfigError("checkpoint action bounds differ from the configured joint limits");
  }
}

Policy load_policy(const CommonOptions& o, const ExperimentConfig& cfg) {
  if (o.baseline) return hold_pose_policy();
  if (o.checkpoint.empty()) throw ConfigError("--checkpoint is required (or pass --baseline for the PD pose holder)");
  const ddpg::Checkpoint c = ddpg::load_checkpoint(o.checkpoint);
  check_compatible(c, cfg);
  return agent_policy(c.to_agent());
}

void save_resolved_config(const ExperimentConfig& cfg) {
  write_text(fs::path(cfg.output_dir) / "config.resolved", dump_config(cfg));
}

int cmd_train(const CommonOptions& o, std::size_t checkpoint_every) {
  const ExperimentConfig cfg = resolve_config(o);
  const fs::path out(cfg.output_dir);
  fs::create_directories(out);
  save_resolved_config(cfg);

  std::optional<ddpg::Agent> initial;
  std::uint64_t episode_offset = 0;
  if (!o.checkpoint.empty()) {
    const ddpg::Checkpoint c = ddpg::load_checkpoint(o.checkpoint);
    check_compatible(c, cfg);
    // Resuming keeps the weights; the run's own hyperparameters apply.
    initial.emplace(c.params, c.action_lower, c.action_upper, cfg.hyperparams);
    episode_offset = c.episodes;
  }

  std::ofstream log_file(out / "training_log.csv", std::ios::trunc);
  if (!log_file) throw IoError("cannot write " + (out / "training_log.csv").string());
  ddpg::write_training_log_header(log_file);

  ddpg::TrainingCallbacks cb;
  cb.on_episode = [&](const ddpg::EpisodeLog& e, const ddpg::Agent& agent) {
    ddpg::write_training_log_row(log_file, e);
    const std::size_t done = e.episode + 1;
    if (checkpoint_every > 0 && done % checkpoint_every == 0) {
      log_file.flush();
      ddpg::save_checkpoint(ddpg::make_checkpoint(agent, cfg.seed, episode_offset + done),
                            out / "checkpoint_latest.bin");
      std::printf("episode %zu: return %.2f, %zu steps\n", done, e.episode_return, e.steps);
      std::fflush(stdout);
    }
    return true;
  };

  try {
    const BalanceTrainingResult r = train_balance(cfg, cb, std::move(initial));
    const std::size_t total = episode_offset + r.run.episodes_completed;
    ddpg::save_checkpoint(ddpg::make_checkpoint(r.run.agent, cfg.seed, total), out / "checkpoint_final.bin");
    const std::size_t best_episodes = r.best_score ? episode_offset + r.best_score->episodes : total;
    ddpg::save_checkpoint(ddpg::make_checkpoint(r.best, cfg.seed, best_episodes), out / "checkpoint.bin");

    std::string v = "episodes,standing,pushes,total\n";
    for (const auto& s : r.validations) {
      v += std::to_string(episode_offset + s.episodes) + "," + std::to_string(s.standing) + "," +
           std::to_string(s.pushes) + "," + std::to_string(s.total()) + "\n";
    }
    write_text(out / "validation.csv", v);
    std::printf("trained %zu episodes; selected snapshot from episode %zu -> %s\n", total, best_episodes,
                (out / "checkpoint.bin").c_str());
  } catch (const ddpg::NonFiniteLossError& e) {
    log_file.flush();
    std::fprintf(stderr, "training diverged: %s\n", e.what());
    write_text(out / "divergence.txt", std::string(e.what()) + "\n");
    return kExitBlowUp;
  }
  return kExitOk;
}

int cmd_eval(const CommonOptions& o) {
  ExperimentConfig cfg = resolve_config(o);
  if (o.seed) {
    for (std::size_t i = 0; i < cfg.eval_seeds.size(); ++i) cfg.eval_seeds[i] = *o.seed + i;
  }
  const Policy policy = load_policy(o, cfg);
  const auto results = evaluate_standing(policy, cfg, cfg.eval_seeds);
  std::string csv = "seed,survived,duration,final_com_xd\n";
  std::size_t survived = 0;
  for (const auto& r : results) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%llu,%d,%.9g,%.9g\n", static_cast<unsigned long long>(r.seed),
                  r.survived ? 1 : 0, r.duration, r.final_com_xd);
    csv += buf;
    survived += r.survived ? 1 : 0;
  }
  write_text(fs::path(cfg.output_dir) / "eval.csv", csv);
  std::printf("quiet standing: %zu/%zu rollouts survived %.0f s\n", survived, results.size(), cfg.episode_length);
  return kExitOk;
}

int cmd_push(const CommonOptions& o, std::optional<double> magnitude) {
  ExperimentConfig cfg = resolve_config(o);
  if (magnitude) cfg.push.magnitude = *magnitude;
  const Policy policy = load_policy(o, cfg);
  const fs::path csv_path = fs::path(cfg.output_dir) / "rollout.csv";
  try {
    const TrialResult r = run_push_trial(policy, cfg, cfg.push.signed_force());
    emit_csv(r.log, csv_path);
    const auto& s = r.summary;
    std::printf("push %.1f N for %.3f s (%.2f N s): %s\n", s.force, cfg.push.duration, s.impulse,
                verdict_name(s.verdict));
    std::printf("final COM velocity %.4f m/s, max COM excursion %.4f m\n", s.final_com_xd, s.max_com_excursion);
    std::printf("ankle range [%.4f, %.4f] rad, underactuated %.3f s (toe %.3f s)\n", s.min_ankle_angle,
                s.max_ankle_angle, s.underactuation_time, s.toe_tilt_time);
    std::printf("peak underactuated ankle torque %.2f N m, peak torque/ceiling %.4f\n", s.peak_underactuated_torque,
                s.peak_ceiling_ratio);
    std::printf("log: %s\n", csv_path.c_str());
  } catch (const SimulationBlowUp& e) {
    emit_csv(e.log, csv_path);
    std::fprintf(stderr, "simulation blew up: %s (partial log in %s)\n", e.what(), csv_path.c_str());
    return kExitBlowUp;
  }
  return kExitOk;
}

int cmd_sweep(const CommonOptions& o) {
  const ExperimentConfig cfg = resolve_config(o);
  const Policy policy = load_policy(o, cfg);
  const auto sweep = run_sweep(policy, cfg, cfg.sweep_magnitudes);
  const fs::path path = fs::path(cfg.output_dir) / "sweep.csv";
  write_text(path, sweep_csv(sweep));
  for (const auto& s : sweep) {
    std::printf("%9.1f N  %7.2f N s  %-8s  max ankle %.4f rad\n", s.force, s.impulse,
                s.blew_up ? "blew_up" : verdict_name(s.verdict), s.max_ankle_angle);
  }
  std::printf("table: %s\n", path.c_str());
  return kExitOk;
}

int cmd_capacity(const CommonOptions& o, const std::string& direction) {
  const ExperimentConfig cfg = resolve_config(o);
  const Policy policy = load_policy(o, cfg);
  std::string text;
  for (int dir : {1, -1}) {
    if ((dir > 0 && direction == "backward") || (dir < 0 && direction == "forward")) continue;
    const CapacityReport rep = impulse_capacity_search(policy, cfg, dir);
    text += capacity_text(rep) + "\n";
  }
  write_text(fs::path(cfg.output_dir) / "capacity.txt", text);
  std::fputs(text.c_str(), stdout);
  return kExitOk;
}

int cmd_plot(const CommonOptions& o, const std::string& input) {
  const ExperimentConfig cfg = resolve_config(o);
  const fs::path in = input.empty() ? fs::path(cfg.output_dir) / "rollout.csv" : fs::path(input);
  const RolloutLog log = read_csv(in);
  const auto files = emit_plots(log, fs::path(cfg.output_dir) / "plots");
  for (const auto& f : files) std::printf("%s\n", f.c_str());
  return kExitOk;
}

void add_common(CLI::App* sub, CommonOptions& o, bool policy) {
  sub->add_option("--config", o.config, "Experiment config file (key = value)");
  sub->add_option("--seed", o.seed, "Random seed");
  sub->add_option("--out", o.out, "Output directory");
  if (policy) {
    sub->add_option("--checkpoint", o.checkpoint, "Policy checkpoint");
    sub->add_flag("--baseline", o.baseline, "Use the PD pose holder instead of a learned policy");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar biped push-recovery lab"};
  app.require_subcommand(1);
  CommonOptions o;

  auto* train = app.add_subcommand("train", "Train a balance policy with DDPG");
  add_common(train, o, false);
  train->add_option("--checkpoint", o.checkpoint, "Resume from this checkpoint");
  std::size_t checkpoint_every = 100;
  train->add_option("--checkpoint-every", checkpoint_every, "Episodes between checkpoints (0 disables)");

  auto* eval = app.add_subcommand("eval", "Quiet-standing rollouts");
  add_common(eval, o, true);

  auto* push = app.add_subcommand("push", "Single push-recovery trial with a full log");
  add_common(push, o, true);
  std::optional<double> magnitude;
  push->add_option("--magnitude", magnitude, "Push magnitude in N (overrides push.magnitude)");

  auto* sweep = app.add_subcommand("sweep", "Push-recovery sweep over the configured magnitudes");
  add_common(sweep, o, true);

  auto* capacity = app.add_subcommand("capacity", "Impulse-capacity bisection");
  add_common(capacity, o, true);
  std::string direction = "both";
  capacity->add_option("--direction", direction, "forward, backward or both")
      ->check(CLI::IsMember({"forward", "backward", "both"}));

  auto* plot = app.add_subcommand("plot", "SVG panels from a rollout CSV");
  add_common(plot, o, false);
  std::string input;
  plot->add_option("--input", input, "Rollout CSV (default <out>/rollout.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (train->parsed()) return cmd_train(o, checkpoint_every);
    if (eval->parsed()) return cmd_eval(o);
    if (push->parsed()) return cmd_push(o, magnitude);
    if (sweep->parsed()) return cmd_sweep(o);
    if (capacity->parsed()) return cmd_capacity(o, direction);
    if (plot->parsed()) return cmd_plot(o, input);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const ddpg::CheckpointCorrupt& e) {
    std::fprintf(stderr, "checkpoint error: %s\n", e.what());
    return kExitConfig;
  } catch (const NonFiniteError& e) {
    std::fprintf(stderr, "simulation blew up: %s\n", e.what());
    return kExitBlowUp;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
  return kExitFailure;
}
