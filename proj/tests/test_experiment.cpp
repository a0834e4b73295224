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

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "balance/capture_point.hpp"
#include "balance/experiment/balance_env.hpp"
#include "balance/experiment/config.hpp"
#include "balance/experiment/report.hpp"
#include "balance/experiment/rollout.hpp"
#include "balance/experiment/training.hpp"

using namespace balance;
using namespace balance::experiment;
namespace fs = std::filesystem;

namespace {

// Emits uniformly random joint targets within the limits at every tick.
Policy random_policy(const BipedModel& m, std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  const JointVector lo = joint_lower(m), hi = joint_upper(m);
  return [rng, lo, hi](const Observation&) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    JointVector a;
    for (int j = 0; j < 4; ++j) a[j] = lo[j] + u(*rng) * (hi[j] - lo[j]);
    return a;
  };
}

bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '-'; }

// name (ws+ attr="value")* ws*
bool parse_start_tag(const std::string& tag, std::string& name) {
  std::size_t i = 0;
  const auto read_name = [&](std::string& out) {
    const std::size_t b = i;
    if (i >= tag.size() || !std::isalpha(static_cast<unsigned char>(tag[i]))) return false;
    while (i < tag.size() && is_name_char(tag[i])) ++i;
    out = tag.substr(b, i - b);
    return true;
  };
  if (!read_name(name)) return false;
  while (i < tag.size()) {
    const std::size_t before = i;
    while (i < tag.size() && std::isspace(static_cast<unsigned char>(tag[i]))) ++i;
    if (i == tag.size()) return true;
    if (i == before) return false;
    std::string attr;
    if (!read_name(attr) || i + 1 >= tag.size() || tag[i] != '=' || tag[i + 1] != '"') return false;
    const auto close = tag.find('"', i + 2);
    if (close == std::string::npos || tag.find('<', i + 2) < close) return false;
    i = close + 1;
  }
  return true;
}

// Minimal structural XML check: balanced tags, quoted attributes, escaped text.
bool well_formed_xml(const std::string& s, std::string& why) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  bool root_seen = false;
  while (i < s.size()) {
    if (s[i] != '<') {
      if (s[i] == '&') {
        const auto semi = s.find(';', i);
        const std::string ent = semi == std::string::npos ? "" : s.substr(i, semi - i + 1);
        if (ent != "&amp;" && ent != "&lt;" && ent != "&gt;" && ent != "&quot;" && ent != "&apos;") {
          why = "bad entity at " + std::to_string(i);
          return false;
        }
      }
      if (stack.empty() && !std::isspace(static_cast<unsigned char>(s[i]))) {
        why = "text outside the root element";
        return false;
      }
      ++i;
      continue;
    }
    const auto end = s.find('>', i);
    if (end == std::string::npos) {
      why = "unterminated tag";
      return false;
    }
    std::string tag = s.substr(i + 1, end - i - 1);
    i = end + 1;
    if (tag.starts_with("?")) {
      if (!tag.ends_with("?")) return why = "bad declaration", false;
      continue;
    }
    if (tag.starts_with("/")) {
      const std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return why = "mismatched </" + name + ">", false;
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.ends_with("/");
    if (self_closing) tag.pop_back();
    std::string name;
    if (!parse_start_tag(tag, name)) return why = "malformed tag <" + tag.substr(0, 40) + ">", false;
    if (stack.empty()) {
      if (root_seen) return why = "second root element", false;
      root_seen = true;
    }
    if (!self_closing) stack.push_back(name);
  }
  if (!stack.empty()) return why = "unclosed <" + stack.back() + ">", false;
  return root_seen || (why = "no root", false);
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BALANCE_LAB_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("balance_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("config defaults and overrides") {
  ExperimentConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.push.duration == 0.1);
  CHECK(cfg.settle_time >= 2.0);
  apply_config_text(cfg,
                    "# comment line\n"
                    "push.magnitude = 426   # trailing comment\n"
                    "push.direction = backward\n"
                    "\n"
                    "ddpg.optimizer = adam\n"
                    "control.kp.ankle = 3000\n"
                    "sweep.magnitudes = 100, 200\n",
                    "t.cfg");
  CHECK(cfg.push.signed_force() == -426.0);
  CHECK(cfg.hyperparams.optimizer == ddpg::OptimizerKind::Adam);
  CHECK(cfg.gains.kp[0] == 3000.0);
  CHECK(cfg.sweep_magnitudes == std::vector<double>{100, 200});
}

TEST_CASE("config errors name the source line") {
  const auto message = [](const std::string& text) {
    ExperimentConfig cfg;
    try {
      apply_config_text(cfg, text, "bad.cfg");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("push.magnitude = 1\n\nreward.epsilonn = 1e-5\n").find("bad.cfg:3:") == 0);
  CHECK(message("push.magnitude = 1\npush.magnitude = 2\n").find("bad.cfg:2:") == 0);
  CHECK(message("push.magnitude = lots\n").find("bad.cfg:1:") == 0);
  CHECK(message("push.magnitude\n").find("bad.cfg:1:") == 0);
  CHECK(message("ddpg.optimizer = rmsprop\n").find("bad.cfg:1:") == 0);

  ExperimentConfig cfg;
  apply_config_text(cfg, "episode.settle_time = 1.0\n");
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/balance.cfg"), ConfigError);
}

TEST_CASE("config dump round trips and covers every key") {
  ExperimentConfig a;
  apply_config_text(a, "reward.pendulum_length = 1.2\nrun.seed = 77\neval.seeds = 4, 5\nmodel.torso.mass = 50\n");
  const std::string dump = dump_config(a);
  ExperimentConfig b;
  apply_config_text(b, dump, "dump");
  CHECK(dump_config(b) == dump);
  CHECK(b.seed == 77);
  CHECK(b.model.links[index(Link::Torso)].mass == 50.0);
  for (const auto& key : config_keys()) CHECK(dump.find(key + " = ") != std::string::npos);
  // Reward normalization follows the overridden pendulum length.
  CHECK(b.reward.alpha == normalization_factors(error_ranges(1.2, b.reward.max_lean), b.reward.epsilon));
}

TEST_CASE("falls are detected by pelvis height and torso pitch") {
  const ExperimentConfig cfg;
  BipedState s = nominal_state(cfg.model);
  CHECK_FALSE(has_fallen(cfg, s));
  s.q[kFootZ] -= 0.5;
  CHECK(has_fallen(cfg, s));
  s = nominal_state(cfg.model);
  s.q[kFirstJoint + 3] = 0.6;
  s.q[kFirstJoint + 2] = 0.5;
  CHECK(has_fallen(cfg, s));
}

TEST_CASE("settled stance earns close to the full reward") {
  const ExperimentConfig cfg;
  const BipedState s = settled_state(cfg);
  CHECK(s.time == 0.0);
  const RewardBreakdown r = state_reward(cfg, s);
  CHECK(r.total > 9.9);
  CHECK(r.total <= 10.0);
}

TEST_CASE("zero push on a pose holder stays balanced with a small COM excursion") {
  const ExperimentConfig cfg;
  const TrialResult t = run_push_trial(hold_pose_policy(), cfg, 0.0);
  CHECK(t.summary.verdict == Verdict::Balanced);
  CHECK(t.summary.max_com_excursion < 0.02);
  CHECK(t.log.samples.size() == static_cast<std::size_t>(std::llround(cfg.episode_length * 1000)));
}

TEST_CASE("rollout CSV: schema, empty log, round trip and byte stability") {
  CHECK(rollout_columns().size() == 26);
  CHECK(rollout_columns().front() == "time");
  const std::string empty = rollout_csv(RolloutLog{});
  CHECK(empty.rfind(std::string(kRolloutSchema) + "\n", 0) == 0);
  CHECK(std::count(empty.begin(), empty.end(), '\n') == 2);

  ExperimentConfig cfg;
  cfg.episode_length = 3.0;
  const TrialResult a = run_push_trial(hold_pose_policy(), cfg, 300.0);
  const TrialResult b = run_push_trial(hold_pose_policy(), cfg, 300.0);
  const std::string csv = rollout_csv(a.log);
  CHECK(csv == rollout_csv(b.log));

  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  CHECK(std::count(line.begin(), line.end(), ',') == 25);

  const RolloutLog back = parse_csv(csv);
  REQUIRE(back.samples.size() == a.log.samples.size());
  const auto close = [](double x, double y) {
    if (std::isnan(x)) return std::isnan(y);
    return std::abs(x - y) <= 1e-8 * std::max(1.0, std::abs(x));
  };
  for (std::size_t i = 0; i < back.samples.size(); i += 37) {
    const auto &p = a.log.samples[i], &q = back.samples[i];
    CHECK(close(p.time, q.time));
    CHECK(close(p.ankle_angle, q.ankle_angle));
    CHECK(close(p.capture_point_x, q.capture_point_x));
    CHECK(close(p.torque[2], q.torque[2]));
    CHECK(close(p.ankle_torque_ceiling, q.ankle_torque_ceiling));
    CHECK(close(p.reward.total, q.reward.total));
    CHECK(p.heel_contact == q.heel_contact);
  }
  CHECK(rollout_csv(back) == csv);

  const fs::path dir = scratch_dir("csv");
  emit_csv(a.log, dir / "r.csv");
  CHECK(slurp(dir / "r.csv") == csv);
  CHECK(rollout_csv(read_csv(dir / "r.csv")) == csv);
  CHECK_THROWS_AS(read_csv(dir / "missing.csv"), IoError);
  CHECK_THROWS_AS(emit_csv(a.log, "/proc/forbidden/r.csv"), IoError);
  fs::remove_all(dir);
}

TEST_CASE("plots: six well-formed panels, flat zero series, labelled capture point panel") {
  ExperimentConfig cfg;
  cfg.episode_length = 2.0;
  const TrialResult t = run_push_trial(hold_pose_policy(), cfg, 200.0);
  const auto panels = rollout_panels(t.log);
  REQUIRE(panels.size() == 6);
  CHECK(panels[3].file_stem == "d_capture_point");
  REQUIRE(panels[3].series.size() == 2);
  CHECK(panels[3].series[0].label == "capture point");
  CHECK(panels[3].series[1].label == "COM x");

  const fs::path dir = scratch_dir("plots");
  const auto files = emit_plots(t.log, dir);
  CHECK(files.size() == 6);
  for (const auto& f : files) {
    std::string why;
    const std::string svg = slurp(f);
    INFO(f.string() << ": " << why);
    CHECK(well_formed_xml(svg, why));
    CHECK(svg.find("time [s]") != std::string::npos);
  }
  const std::string d = slurp(dir / "d_capture_point.svg");
  CHECK(d.find(">capture point<") != std::string::npos);
  CHECK(d.find(">COM x<") != std::string::npos);
  fs::remove_all(dir);

  Panel flat{"z", "zero", "value [1]", {{"zero", std::vector<double>(50, 0.0)}}};
  std::vector<double> time(50);
  for (int i = 0; i < 50; ++i) time[i] = 0.01 * i;
  const std::string svg = render_svg(flat, time);
  std::string why;
  CHECK(well_formed_xml(svg, why));
  CHECK(svg.find(">value [1]<") != std::string::npos);
  const std::regex point(R"([ML](\d+\.\d+) (\d+\.\d+))");
  std::set<std::string> ys;
  const auto path_start = svg.find("<path d=\"");
  REQUIRE(path_start != std::string::npos);
  const std::string path = svg.substr(path_start, svg.find('"', path_start + 9) - path_start);
  int points = 0;
  for (auto it = std::sregex_iterator(path.begin(), path.end(), point); it != std::sregex_iterator(); ++it) {
    ys.insert((*it)[2]);
    ++points;
  }
  CHECK(points == 50);
  REQUIRE(ys.size() == 1);
  // The zero grid line sits at the same height as the data.
  CHECK(svg.find("y1=\"" + *ys.begin() + "\" x2=") != std::string::npos);

  std::string bad_why;
  CHECK_FALSE(well_formed_xml("<svg><g></svg>", bad_why));
  CHECK_FALSE(well_formed_xml("<svg a=b/>", bad_why));
}

TEST_CASE("sweeps are sorted and agree with sequential trials") {
  ExperimentConfig cfg;
  cfg.episode_length = 4.0;
  const std::vector<double> forces{500, -200, 100, 300};
  const auto sweep = run_sweep(hold_pose_policy(), cfg, forces);
  REQUIRE(sweep.size() == 4);
  for (std::size_t i = 1; i < sweep.size(); ++i) CHECK(sweep[i - 1].force < sweep[i].force);
  for (const auto& s : sweep) {
    const TrialSummary one = push_outcome(hold_pose_policy(), cfg, s.force);
    CHECK(one.verdict == s.verdict);
    CHECK(one.max_com_excursion == s.max_com_excursion);
    CHECK(one.final_com_xd == s.final_com_xd);
  }
  CHECK(sweep_csv(sweep) == sweep_csv(run_sweep(hold_pose_policy(), cfg, forces)));
}

TEST_CASE("impulse capacity search") {
  ExperimentConfig cfg;
  CHECK(capture_point_budget(cfg, +1) == doctest::Approx(72.8).epsilon(0.3 / 72.8));
  CHECK(capture_point_budget(cfg, -1) == doctest::Approx(-42.6).epsilon(0.3 / 42.6));

  SUBCASE("a random policy cannot absorb any push") {
    cfg.capacity_max_impulse = 20.0;
    const CapacityReport r = impulse_capacity_search(random_policy(cfg.model, 3), cfg, +1);
    CHECK(r.capacity == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.budget == doctest::Approx(72.8).epsilon(0.3 / 72.8));
  }
  SUBCASE("pose holder: bisection tolerance, monotonicity and forward > backward") {
    const CapacityReport fwd = impulse_capacity_search(hold_pose_policy(), cfg, +1);
    const CapacityReport bwd = impulse_capacity_search(hold_pose_policy(), cfg, -1);
    MESSAGE("pose holder capacity: forward " << fwd.capacity << " N s, backward " << bwd.capacity << " N s");
    for (const auto* r : {&fwd, &bwd}) {
      CHECK(r->monotonic);
      CHECK(r->monotonicity.size() == 3);
      for (const auto& p : r->monotonicity) CHECK_FALSE(p.balanced);
      double lowest_fail = 1e9;
      for (const auto& p : r->bisection) {
        if (!p.balanced) lowest_fail = std::min(lowest_fail, p.impulse);
      }
      CHECK(lowest_fail - r->capacity <= cfg.capacity_tolerance + 1e-9);
      CHECK(push_outcome(hold_pose_policy(), cfg, r->direction * r->capacity / 0.1).verdict == Verdict::Balanced);
    }
    CHECK(fwd.capacity > bwd.capacity);
    CHECK(capacity_text(fwd).find("72.") != std::string::npos);
  }
}

TEST_CASE("standing evaluation is seeded and repeatable") {
  ExperimentConfig cfg;
  cfg.episode_length = 5.0;
  const auto a = evaluate_standing(hold_pose_policy(), cfg, {1, 2, 3});
  const auto b = evaluate_standing(hold_pose_policy(), cfg, {1, 2, 3});
  REQUIRE(a.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a[i].seed == i + 1);
    CHECK(a[i].survived);
    CHECK(a[i].final_com_xd == b[i].final_com_xd);
  }
  CHECK(a[0].final_com_xd != a[1].final_com_xd);
}

TEST_CASE("balance environment contract") {
  ExperimentConfig cfg;
  cfg.episode_length = 1.0;
  cfg.train_push_probability = 0.0;
  BalanceEnv env(cfg);
  CHECK(env.observation_size() == 35);
  CHECK(env.action_lower() == ddpg::Vector(joint_lower(cfg.model)));
  CHECK(env.action_upper() == ddpg::Vector(joint_upper(cfg.model)));
  ddpg::Rng rng(1);
  const ddpg::Vector obs = env.reset(rng);
  CHECK(obs.size() == 35);
  CHECK(obs.allFinite());
  CHECK_FALSE(env.current_push().has_value());
  std::size_t steps = 0;
  ddpg::StepResult r;
  do {
    r = env.step(ddpg::Vector::Zero(4));
    ++steps;
    CHECK(r.reward > 9.0);
  } while (!r.terminal && !r.truncated);
  CHECK(r.truncated);
  CHECK_FALSE(r.terminal);
  CHECK(steps == 25);

  // Out-of-range targets act exactly like the bound they are clamped to.
  BalanceEnv twin(cfg);
  ddpg::Rng rng_a(9), rng_b(9);
  env.reset(rng_a);
  twin.reset(rng_b);
  bool fell = false;
  for (int k = 0; k < 25 && !fell; ++k) {
    const ddpg::StepResult a = env.step(ddpg::Vector::Constant(4, 10.0));
    const ddpg::StepResult b = twin.step(twin.action_upper());
    CHECK(a.observation == b.observation);
    CHECK(a.reward == b.reward);
    fell = a.terminal;
  }
  // Driving every joint to its upper limit topples the robot.
  CHECK(fell);

  cfg.train_push_probability = 1.0;
  BalanceEnv pushed(cfg);
  pushed.reset(rng);
  REQUIRE(pushed.current_push().has_value());
  CHECK(std::abs(pushed.current_push()->force) <= cfg.train_push_max_force);
}

TEST_CASE("train_balance keeps the best validated snapshot") {
  ExperimentConfig cfg;
  cfg.hyperparams.episodes = 4;
  cfg.hyperparams.max_steps = 10;
  cfg.hyperparams.batch_size = 8;
  cfg.hyperparams.hidden = 16;
  cfg.validate_every = 2;
  cfg.validation_seeds = {101};
  cfg.validation_forces = {200};
  cfg.episode_length = 3.0;
  const BalanceTrainingResult r = train_balance(cfg);
  CHECK(r.run.episodes_completed == 4);
  REQUIRE(r.validations.size() == 2);
  CHECK(r.validations[0].episodes == 2);
  CHECK(r.validations[1].episodes == 4);
  REQUIRE(r.best_score.has_value());
  for (const auto& v : r.validations) CHECK(v.total() <= r.best_score->total());
}

TEST_CASE("CLI exit codes and outputs") {
  const fs::path dir = scratch_dir("cli");
  const std::string out = " --out " + dir.string();
  {
    std::ofstream(dir / "bad.cfg") << "push.magnitud = 3\n";
    std::ofstream(dir / "short.cfg") << "episode.length = 3\n";
    std::ofstream(dir / "tiny.cfg") << "ddpg.episodes = 2\nddpg.max_steps = 5\nddpg.batch_size = 4\n"
                                    << "ddpg.hidden = 8\ntraining.validate_every = 0\nepisode.length = 3\n";
    std::ofstream(dir / "stiff.cfg") << "model.contact.stiffness = 1e13\nmodel.contact.damping = 0\n";
  }
  CHECK(run_cli("push --baseline --config " + (dir / "bad.cfg").string() + out) == 2);
  CHECK(run_cli("eval --checkpoint " + (dir / "none.bin").string() + out) == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("push --baseline --magnitude 300 --config " + (dir / "short.cfg").string() + out) == 0);
  CHECK(fs::exists(dir / "rollout.csv"));
  CHECK(run_cli("plot --input " + (dir / "rollout.csv").string() + out) == 0);
  CHECK(fs::exists(dir / "plots" / "d_capture_point.svg"));
  CHECK(run_cli("push --baseline --magnitude 300 --config " + (dir / "stiff.cfg").string() + out) == 3);
  CHECK(run_cli("train --config " + (dir / "tiny.cfg").string() + out) == 0);
  CHECK(fs::exists(dir / "checkpoint.bin"));
  CHECK(fs::exists(dir / "training_log.csv"));
  CHECK(run_cli("eval --seed 5 --checkpoint " + (dir / "checkpoint.bin").string() + " --config " +
                (dir / "short.cfg").string() + out) == 0);
  CHECK(fs::exists(dir / "eval.csv"));
  {
    std::ofstream f(dir / "checkpoint.bin", std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(200);
    f.put('\x7f');
  }
  CHECK(run_cli("eval --checkpoint " + (dir / "checkpoint.bin").string() + out) == 2);
  fs::remove_all(dir);
}
