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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "balance/experiment/rollout.hpp"

namespace balance::experiment {

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// First line of every rollout CSV.
inline constexpr const char* kRolloutSchema = "# schema=balance-rollout/1";

/// Column names of the rollout CSV, in order.
const std::vector<std::string>& rollout_columns();

/// Header plus one row per sample, 9 significant digits. Byte-stable for
/// identical logs.
std::string rollout_csv(const RolloutLog& log);
void emit_csv(const RolloutLog& log, const std::filesystem::path& path);
/// Parses a file produced by emit_csv. Throws IoError on schema mismatch.
RolloutLog parse_csv(const std::string& text);
RolloutLog read_csv(const std::filesystem::path& path);

struct Series {
  std::string label;
  std::vector<double> values;
};

struct Panel {
  std::string file_stem;  // e.g. "a_ankle_angle"
  std::string title;
  std::string y_label;
  std::vector<Series> series;
};

/// The six panels (a) to (f): ankle reference and measurement, link
/// pitches, pitch rates, capture point with COM x, COM height and ankle
/// torque with its ceiling.
std::vector<Panel> rollout_panels(const RolloutLog& log);

/// Standalone SVG line chart with axes, tick labels, units and a legend.
std::string render_svg(const Panel& panel, const std::vector<double>& time);

/// Writes one SVG file per panel into `dir` and returns the paths.
std::vector<std::filesystem::path> emit_plots(const RolloutLog& log, const std::filesystem::path& dir);

std::string sweep_csv(const std::vector<TrialSummary>& sweep);
std::string capacity_text(const CapacityReport& rep);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace balance::experiment
