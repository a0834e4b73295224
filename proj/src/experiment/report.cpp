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

#include "balance/experiment/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace balance::experiment {
namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  out += buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw IoError("malformed number '" + s + "'");
  return v;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

/// Round-number tick spacing covering [lo, hi] with about five ticks.
double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

const std::vector<std::string>& rollout_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c{"time",        "ankle_ref",    "ankle_angle",  "torso_pitch",   "pelvis_pitch",
                               "foot_pitch",  "torso_rate",   "pelvis_rate",  "foot_rate",     "capture_point_x",
                               "com_x",       "com_z",        "torque_ankle", "torque_knee",   "torque_hip",
                               "torque_waist", "heel_contact", "toe_contact", "ankle_torque_ceiling"};
    for (std::size_t k = 0; k < kNumObjectives; ++k) {
      c.push_back(std::string("reward_") + objective_name(static_cast<Objective>(k)));
    }
    c.emplace_back("reward_total");
    return c;
  }();
  return cols;
}

std::string rollout_csv(const RolloutLog& log) {
  std::string out = kRolloutSchema;
  out += '\n';
  const auto& cols = rollout_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  out += '\n';
  for (const auto& s : log.samples) {
    const double vals[] = {s.time,          s.ankle_reference, s.ankle_angle, s.torso_pitch, s.pelvis_pitch,
                           s.foot_pitch,    s.torso_rate,      s.pelvis_rate, s.foot_rate,   s.capture_point_x,
                           s.com_x,         s.com_z,           s.torque[0],   s.torque[1],   s.torque[2],
                           s.torque[3],     s.heel_contact ? 1.0 : 0.0, s.toe_contact ? 1.0 : 0.0,
                           s.ankle_torque_ceiling};
    bool first = true;
    for (double v : vals) {
      if (!first) out += ',';
      first = false;
      append_number(out, v);
    }
    for (double t : s.reward.terms) {
      out += ',';
      append_number(out, t);
    }
    out += ',';
    append_number(out, s.reward.total);
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << text;
  os.flush();
  if (!os) throw IoError("failed writing " + path.string());
}

void emit_csv(const RolloutLog& log, const std::filesystem::path& path) { write_text(path, rollout_csv(log)); }

RolloutLog parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kRolloutSchema) throw IoError("missing or unknown rollout schema line");
  if (!std::getline(in, line)) throw IoError("missing column header");
  const auto& cols = rollout_columns();
  if (split(line, ',') != cols) throw IoError("column header does not match the rollout schema");

  RolloutLog log;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const auto f = split(line, ',');
    if (f.size() != cols.size()) throw IoError("row " + std::to_string(row) + " has the wrong column count");
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) v[i] = to_double(f[i]);
    RolloutSample s;
    s.time = v[0];
    s.ankle_reference = v[1];
    s.ankle_angle = v[2];
    s.torso_pitch = v[3];
    s.pelvis_pitch = v[4];
    s.foot_pitch = v[5];
    s.torso_rate = v[6];
    s.pelvis_rate = v[7];
    s.foot_rate = v[8];
    s.capture_point_x = v[9];
    s.com_x = v[10];
    s.com_z = v[11];
    s.torque = JointVector(v[12], v[13], v[14], v[15]);
    s.heel_contact = v[16] != 0.0;
    s.toe_contact = v[17] != 0.0;
    s.ankle_torque_ceiling = v[18];
    for (std::size_t k = 0; k < kNumObjectives; ++k) s.reward.terms[k] = v[19 + k];
    s.reward.total = v[19 + kNumObjectives];
    log.samples.push_back(s);
  }
  if (log.samples.size() >= 2) log.dt = log.samples[1].time - log.samples[0].time;
  return log;
}

RolloutLog read_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_csv(ss.str());
}

std::vector<Panel> rollout_panels(const RolloutLog& log) {
  const auto column = [&](auto get) {
    std::vector<double> v;
    v.reserve(log.samples.size());
    for (const auto& s : log.samples) v.push_back(get(s));
    return v;
  };
  std::vector<Panel> p;
  p.push_back({"a_ankle_angle", "(a) Ankle joint angle", "angle [rad]",
               {{"reference", column([](const RolloutSample& s) { return s.ankle_reference; })},
                {"measured", column([](const RolloutSample& s) { return s.ankle_angle; })}}});
  p.push_back({"b_orientation", "(b) Torso, pelvis and foot pitch", "pitch [rad]",
               {{"torso", column([](const RolloutSample& s) { return s.torso_pitch; })},
                {"pelvis", column([](const RolloutSample& s) { return s.pelvis_pitch; })},
                {"foot", column([](const RolloutSample& s) { return s.foot_pitch; })}}});
  p.push_back({"c_pitch_rate", "(c) Torso, pelvis and foot pitch rate", "rate [rad/s]",
               {{"torso", column([](const RolloutSample& s) { return s.torso_rate; })},
                {"pelvis", column([](const RolloutSample& s) { return s.pelvis_rate; })},
                {"foot", column([](const RolloutSample& s) { return s.foot_rate; })}}});
  p.push_back({"d_capture_point", "(d) Capture point and COM", "x [m]",
               {{"capture point", column([](const RolloutSample& s) { return s.capture_point_x; })},
                {"COM x", column([](const RolloutSample& s) { return s.com_x; })}}});
  p.push_back({"e_com_height", "(e) COM height", "z [m]",
               {{"COM z", column([](const RolloutSample& s) { return s.com_z; })}}});
  p.push_back({"f_ankle_torque", "(f) Ankle joint torque", "torque [N m]",
               {{"ankle torque", column([](const RolloutSample& s) { return s.torque[0]; })},
                {"tilt ceiling", column([](const RolloutSample& s) {
                   if (!std::isfinite(s.ankle_torque_ceiling)) return s.ankle_torque_ceiling;
                   // Toe tilting needs plantar-flexing (negative) torque.
                   return s.toe_contact ? -s.ankle_torque_ceiling : s.ankle_torque_ceiling;
                 })}}});
  return p;
}

std::string render_svg(const Panel& panel, const std::vector<double>& time) {
  constexpr double W = 640, H = 400, L = 80, R = 20, T = 40, B = 60;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  double t0 = 0.0, t1 = 1.0;
  if (!time.empty()) {
    t0 = time.front();
    t1 = time.back();
  }
  if (!(t1 > t0)) t1 = t0 + 1.0;
  double y0 = std::numeric_limits<double>::infinity(), y1 = -y0;
  for (const auto& s : panel.series) {
    for (double v : s.values) {
      if (!std::isfinite(v)) continue;
      y0 = std::min(y0, v);
      y1 = std::max(y1, v);
    }
  }
  if (!std::isfinite(y0)) y0 = y1 = 0.0;
  if (y1 - y0 < 1e-9) {
    const double pad = std::max(1.0, std::abs(y0) * 0.1);
    y0 -= pad;
    y1 += pad;
  } else {
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
  }
  const auto sx = [&](double t) { return L + (t - t0) / (t1 - t0) * (W - L - R); };
  const auto sy = [&](double v) { return H - B - (v - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(2);
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
    << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape_xml(panel.title)
    << "</text>\n";

  const double ts = nice_step(t1 - t0);
  for (double t = std::ceil(t0 / ts) * ts; t <= t1 + 1e-9; t += ts) {
    o << "<line x1=\"" << sx(t) << "\" y1=\"" << T << "\" x2=\"" << sx(t) << "\" y2=\"" << H - B
      << "\" stroke=\"#e0e0e0\"/>\n"
      << "<text x=\"" << sx(t) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << fmt_tick(t)
      << "</text>\n";
  }
  const double vs = nice_step(y1 - y0);
  for (double v = std::ceil(y0 / vs) * vs; v <= y1 + 1e-12; v += vs) {
    o << "<line x1=\"" << L << "\" y1=\"" << sy(v) << "\" x2=\"" << W - R << "\" y2=\"" << sy(v)
      << "\" stroke=\"#e0e0e0\"/>\n"
      << "<text x=\"" << L - 6 << "\" y=\"" << sy(v) + 4 << "\" text-anchor=\"end\">" << fmt_tick(v) << "</text>\n";
  }
  o << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n"
    << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n"
    << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 18 << "\" text-anchor=\"middle\">time [s]</text>\n"
    << "<text transform=\"translate(20," << (T + H - B) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape_xml(panel.y_label) << "</text>\n";

  for (std::size_t k = 0; k < panel.series.size(); ++k) {
    const auto& s = panel.series[k];
    const char* color = colors[k % 4];
    // NaN samples break the line into separate segments.
    std::string d;
    bool pen_down = false;
    const std::size_t n = std::min(s.values.size(), time.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(s.values[i])) {
        pen_down = false;
        continue;
      }
      char buf[48];
      std::snprintf(buf, sizeof(buf), "%c%.2f %.2f ", pen_down ? 'L' : 'M', sx(time[i]), sy(s.values[i]));
      d += buf;
      pen_down = true;
    }
    if (!d.empty()) {
      d.pop_back();
      o << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    }
    const double ly = T + 14 + 18 * static_cast<double>(k);
    o << "<line x1=\"" << W - R - 150 << "\" y1=\"" << ly << "\" x2=\"" << W - R - 126 << "\" y2=\"" << ly
      << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
      << "<text x=\"" << W - R - 120 << "\" y=\"" << ly + 4 << "\">" << escape_xml(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::vector<std::filesystem::path> emit_plots(const RolloutLog& log, const std::filesystem::path& dir) {
  if (log.samples.empty()) throw IoError("cannot plot an empty rollout");
  std::vector<double> time;
  time.reserve(log.samples.size());
  for (const auto& s : log.samples) time.push_back(s.time);
  std::vector<std::filesystem::path> out;
  for (const auto& panel : rollout_panels(log)) {
    const auto path = dir / (panel.file_stem + ".svg");
    write_text(path, render_svg(panel, time));
    out.push_back(path);
  }
  return out;
}

std::string sweep_csv(const std::vector<TrialSummary>& sweep) {
  std::string out =
      "force,impulse,verdict,max_ankle_angle,min_ankle_angle,underactuation_time,toe_tilt_time,"
      "peak_underactuated_torque,peak_ceiling_ratio,final_com_xd,max_com_excursion\n";
  for (const auto& s : sweep) {
    append_number(out, s.force);
    out += ',';
    append_number(out, s.impulse);
    out += ',';
    out += s.blew_up ? "blew_up" : verdict_name(s.verdict);
    for (double v : {s.max_ankle_angle, s.min_ankle_angle, s.underactuation_time, s.toe_tilt_time,
                     s.peak_underactuated_torque, s.peak_ceiling_ratio, s.final_com_xd, s.max_com_excursion}) {
      out += ',';
      append_number(out, v);
    }
    out += '\n';
  }
  return out;
}

std::string capacity_text(const CapacityReport& rep) {
  std::ostringstream o;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "direction: %s\n", rep.direction > 0 ? "forward" : "backward");
  o << buf;
  std::snprintf(buf, sizeof(buf), "measured capacity: %.2f N s%s\n", rep.direction * rep.capacity,
                rep.capped ? " (search ceiling reached)" : "");
  o << buf;
  std::snprintf(buf, sizeof(buf), "capture-point budget: %.2f N s\n", rep.budget);
  o << buf;
  std::snprintf(buf, sizeof(buf), "ratio: %.3f\n", rep.ratio);
  o << buf;
  for (const auto& p : rep.bisection) {
    std::snprintf(buf, sizeof(buf), "probe %.3f N s: %s\n", rep.direction * p.impulse, p.balanced ? "balanced" : "fell");
    o << buf;
  }
  for (const auto& p : rep.monotonicity) {
    std::snprintf(buf, sizeof(buf), "monotonicity check %.3f N s: %s\n", rep.direction * p.impulse,
                  p.balanced ? "balanced" : "fell");
    o << buf;
  }
  o << "monotonic: " << (rep.monotonic ? "yes" : "no") << '\n';
  return o.str();
}

}  // namespace balance::experiment
