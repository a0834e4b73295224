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

#include "balance/experiment/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace balance::experiment {
namespace {

struct Field {
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};

using Registry = std::map<std::string, Field>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (r.ec != std::errc() || r.ptr != end) throw ConfigError("expected a number, got '" + v + "'");
  return out;
}

std::uint64_t parse_u64(const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (r.ec != std::errc() || r.ptr != end) throw ConfigError("expected a non-negative integer, got '" + v + "'");
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("expected true or false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty item in list '" + v + "'");
    out.push_back(item);
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_floating_point_v<T>) {
      s += fmt(xs[i]);
    } else {
      s += std::to_string(xs[i]);
    }
  }
  return s;
}

void add_double(Registry& r, const std::string& key, double& ref) {
  r[key] = {[&ref](const std::string& v) { ref = parse_double(v); }, [&ref] { return fmt(ref); }};
}

template <typename Int>
void add_uint(Registry& r, const std::string& key, Int& ref) {
  r[key] = {[&ref](const std::string& v) { ref = static_cast<Int>(parse_u64(v)); },
            [&ref] { return std::to_string(ref); }};
}

void add_bool(Registry& r, const std::string& key, bool& ref) {
  r[key] = {[&ref](const std::string& v) { ref = parse_bool(v); }, [&ref] { return std::string(ref ? "true" : "false"); }};
}

Registry build_registry(ExperimentConfig& c) {
  Registry r;
  auto& m = c.model;
  for (std::size_t i = 0; i < kNumLinks; ++i) {
    const std::string p = std::string("model.") + link_name(static_cast<Link>(i)) + ".";
    add_double(r, p + "mass", m.links[i].mass);
    add_double(r, p + "length", m.links[i].length);
    add_double(r, p + "com_x", m.links[i].com_x);
    add_double(r, p + "com_z", m.links[i].com_z);
    add_double(r, p + "inertia", m.links[i].inertia);
  }
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    const std::string name = joint_name(static_cast<Joint>(j));
    const std::string p = "model." + name + ".";
    add_double(r, p + "lower", m.joints[j].lower);
    add_double(r, p + "upper", m.joints[j].upper);
    add_double(r, p + "torque_limit", m.joints[j].torque_limit);
    add_double(r, p + "armature", m.joints[j].armature);
    add_double(r, "control.kp." + name, c.gains.kp[static_cast<Eigen::Index>(j)]);
    add_double(r, "control.kd." + name, c.gains.kd[static_cast<Eigen::Index>(j)]);
  }
  add_double(r, "model.foot.heel", m.foot.heel);
  add_double(r, "model.foot.toe", m.foot.toe);
  add_double(r, "model.foot.thickness", m.foot.thickness);
  add_double(r, "model.contact.stiffness", m.contact.stiffness);
  add_double(r, "model.contact.damping", m.contact.damping);
  add_double(r, "model.contact.friction", m.contact.friction);
  add_bool(r, "model.contact.enabled", m.contact.enabled);
  add_double(r, "model.gravity", m.gravity);

  add_uint(r, "control.physics_hz", c.schedule.physics_hz);
  add_uint(r, "control.llc_hz", c.schedule.llc_hz);
  add_uint(r, "control.hlc_hz", c.schedule.hlc_hz);
  add_double(r, "control.feedback_cutoff_hz", c.schedule.feedback_cutoff_hz);
  add_double(r, "observation.cutoff_hz", c.observation_cutoff_hz);

  for (std::size_t k = 0; k < kNumObjectives; ++k) {
    add_double(r, std::string("reward.weight.") + objective_name(static_cast<Objective>(k)), c.reward.weights[k]);
  }
  add_double(r, "reward.epsilon", c.reward.epsilon);
  add_double(r, "reward.max_lean", c.reward.max_lean);
  add_double(r, "reward.pendulum_length", c.reward.pendulum_length);
  add_double(r, "reward.com_z_target", c.reward.com_z_target);

  auto& h = c.hyperparams;
  add_double(r, "ddpg.gamma", h.gamma);
  add_double(r, "ddpg.tau", h.tau);
  add_uint(r, "ddpg.batch_size", h.batch_size);
  add_uint(r, "ddpg.buffer_capacity", h.buffer_capacity);
  add_double(r, "ddpg.actor_lr", h.actor_lr);
  add_double(r, "ddpg.critic_lr", h.critic_lr);
  r["ddpg.optimizer"] = {[&h](const std::string& v) {
                           if (v == "sgd") h.optimizer = ddpg::OptimizerKind::Sgd;
                           else if (v == "adam") h.optimizer = ddpg::OptimizerKind::Adam;
                           else throw ConfigError("optimizer must be sgd or adam, got '" + v + "'");
                         },
                         [&h] { return std::string(h.optimizer == ddpg::OptimizerKind::Adam ? "adam" : "sgd"); }};
  add_double(r, "ddpg.noise_decay", h.noise_decay);
  add_double(r, "ddpg.noise_sigma", h.noise_sigma);
  add_double(r, "ddpg.noise_final_scale", h.noise_final_scale);
  add_uint(r, "ddpg.max_steps", h.max_steps);
  add_uint(r, "ddpg.episodes", h.episodes);
  add_uint(r, "ddpg.hidden", h.hidden);
  add_double(r, "ddpg.final_layer_init", h.final_layer_init);
  add_bool(r, "ddpg.invert_gradients", h.invert_gradients);

  r["push.direction"] = {[&c](const std::string& v) {
                           if (v == "forward") c.push.direction = 1;
                           else if (v == "backward") c.push.direction = -1;
                           else throw ConfigError("push direction must be forward or backward, got '" + v + "'");
                         },
                         [&c] { return std::string(c.push.direction > 0 ? "forward" : "backward"); }};
  add_double(r, "push.magnitude", c.push.magnitude);
  add_double(r, "push.duration", c.push.duration);
  add_double(r, "push.onset", c.push.onset);

  r["sweep.magnitudes"] = {[&c](const std::string& v) {
                             c.sweep_magnitudes.clear();
                             for (const auto& s : split_list(v)) c.sweep_magnitudes.push_back(parse_double(s));
                           },
                           [&c] { return join(c.sweep_magnitudes); }};
  add_uint(r, "run.seed", c.seed);
  r["eval.seeds"] = {[&c](const std::string& v) {
                       c.eval_seeds.clear();
                       for (const auto& s : split_list(v)) c.eval_seeds.push_back(parse_u64(s));
                     },
                     [&c] { return join(c.eval_seeds); }};
  add_double(r, "eval.perturbation", c.eval_perturbation);
  add_double(r, "episode.length", c.episode_length);
  add_double(r, "episode.settle_time", c.settle_time);
  add_double(r, "termination.pelvis_height", c.fall_pelvis_height);
  add_double(r, "termination.torso_pitch", c.fall_torso_pitch);
  add_double(r, "verdict.com_velocity", c.balanced_com_velocity);
  add_double(r, "training.push_probability", c.train_push_probability);
  add_double(r, "training.push_max_force", c.train_push_max_force);
  add_uint(r, "training.validate_every", c.validate_every);
  r["training.validation_seeds"] = {[&c](const std::string& v) {
                                      c.validation_seeds.clear();
                                      for (const auto& s : split_list(v)) c.validation_seeds.push_back(parse_u64(s));
                                    },
                                    [&c] { return join(c.validation_seeds); }};
  r["training.validation_forces"] = {[&c](const std::string& v) {
                                       c.validation_forces.clear();
                                       for (const auto& s : split_list(v)) c.validation_forces.push_back(parse_double(s));
                                     },
                                     [&c] { return join(c.validation_forces); }};
  add_double(r, "capacity.max_impulse", c.capacity_max_impulse);
  add_double(r, "capacity.tolerance", c.capacity_tolerance);
  r["output.dir"] = {[&c](const std::string& v) { c.output_dir = v; }, [&c] { return c.output_dir; }};
  return r;
}

template <typename F>
void rethrow_as_config(F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  rethrow_as_config([&] {
    model.validate();
    gains.validate();
    schedule.validate();
    reward.validate();
    hyperparams.validate();
  });
  if (!(observation_cutoff_hz > 0.0) || observation_cutoff_hz >= 0.5 * schedule.hlc_hz) {
    throw ConfigError("observation.cutoff_hz must lie below the policy Nyquist rate");
  }
  if (!(push.duration > 0.0)) throw ConfigError("push.duration must be positive");
  if (push.magnitude < 0.0) throw ConfigError("push.magnitude is unsigned; use push.direction");
  if (push.onset < 0.0) throw ConfigError("push.onset must be >= 0");
  if (settle_time < 2.0) throw ConfigError("episode.settle_time must be at least 2 s");
  if (!(episode_length > push.onset + push.duration)) throw ConfigError("episode.length must outlast the push");
  if (!(fall_pelvis_height > 0.0) || !(fall_torso_pitch > 0.0)) throw ConfigError("fall thresholds must be positive");
  if (!(balanced_com_velocity > 0.0)) throw ConfigError("verdict.com_velocity must be positive");
  if (train_push_probability < 0.0 || train_push_probability > 1.0) {
    throw ConfigError("training.push_probability must be in [0, 1]");
  }
  if (train_push_max_force < 0.0) throw ConfigError("training.push_max_force must be >= 0");
  if (!(capacity_tolerance > 0.0) || !(capacity_max_impulse > capacity_tolerance)) {
    throw ConfigError("capacity.max_impulse must exceed capacity.tolerance > 0");
  }
  if (validate_every > 0 && validation_seeds.empty() && validation_forces.empty()) {
    throw ConfigError("validation needs seeds or forces when training.validate_every > 0");
  }
  if (eval_seeds.empty()) throw ConfigError("eval.seeds must not be empty");
  if (eval_perturbation < 0.0) throw ConfigError("eval.perturbation must be >= 0");
  for (double m : sweep_magnitudes) {
    if (m < 0.0) throw ConfigError("sweep magnitudes are unsigned; use push.direction");
  }
}

void apply_config_text(ExperimentConfig& cfg, const std::string& text, const std::string& source) {
  Registry reg = build_registry(cfg);
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool reward_touched = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = reg.find(key);
    if (it == reg.end()) throw ConfigError(where + "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where + "key '" + key + "' given twice");
    if (value.empty()) throw ConfigError(where + "missing value for '" + key + "'");
    try {
      it->second.set(value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + key + ": " + e.what());
    }
    if (key.rfind("reward.", 0) == 0 || key == "model.gravity") reward_touched = true;
  }
  if (reward_touched) {
    cfg.reward.gravity = cfg.model.gravity;
    rethrow_as_config([&] { cfg.reward.recompute_alpha(); });
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  ExperimentConfig cfg;
  apply_config_text(cfg, ss.str(), path.string());
  cfg.validate();
  return cfg;
}

std::string dump_config(const ExperimentConfig& cfg) {
  ExperimentConfig copy = cfg;
  const Registry reg = build_registry(copy);
  std::string out;
  for (const auto& [key, field] : reg) out += key + " = " + field.get() + "\n";
  return out;
}

std::vector<std::string> config_keys() {
  ExperimentConfig c;
  std::vector<std::string> keys;
  for (const auto& kv : build_registry(c)) keys.push_back(kv.first);
  return keys;
}

}  // namespace balance::experiment
