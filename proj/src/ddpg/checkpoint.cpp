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

#include "balance/ddpg/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace balance::ddpg {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

constexpr char kMagic[8] = {'B', 'L', 'C', 'K', 'P', 'T', '\0', '\0'};
constexpr std::uint64_t kMaxDim = 1u << 20;

std::uint64_t fnv1a(const char* data, std::size_t n) {
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 1099511628211ull;
  }
  return h;
}

class Writer {
 public:
  template <typename T>
  void put(T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out_.append(buf, sizeof(T));
  }
  void raw(const char* p, std::size_t n) { out_.append(p, n); }
  void layer(const DenseLayer& l) {
    put<std::uint64_t>(static_cast<std::uint64_t>(l.weights.rows()));
    put<std::uint64_t>(static_cast<std::uint64_t>(l.weights.cols()));
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r)
      for (Eigen::Index c = 0; c < l.weights.cols(); ++c) put<double>(l.weights(r, c));
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) put<double>(l.bias[r]);
  }
  std::string& bytes() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  Reader(const std::string& in, std::size_t end) : in_(in), end_(end) {}
  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > end_) throw CheckpointCorrupt("checkpoint truncated");
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  DenseLayer layer(Eigen::Index rows, Eigen::Index cols) {
    const auto r = get<std::uint64_t>();
    const auto c = get<std::uint64_t>();
    if (r != static_cast<std::uint64_t>(rows) || c != static_cast<std::uint64_t>(cols)) {
      throw CheckpointCorrupt("layer shape mismatch");
    }
    DenseLayer l(cols, rows);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) l.weights(i, j) = get<double>();
    for (Eigen::Index i = 0; i < rows; ++i) l.bias[i] = get<double>();
    return l;
  }
  std::size_t pos() const { return pos_; }

 private:
  const std::string& in_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

void write_stack(Writer& w, const LayerStack& s) {
  for (const auto& l : s) w.layer(l);
}

void read_stack(Reader& r, LayerStack& s) {
  for (auto& l : s) {
    l = r.layer(l.weights.rows(), l.weights.cols());
    if (!l.weights.allFinite() || !l.bias.allFinite()) throw CheckpointCorrupt("non-finite weight");
  }
}

}  // namespace

Checkpoint make_checkpoint(const Agent& agent, std::uint64_t seed, std::uint64_t episodes) {
  return Checkpoint{agent.params(), agent.hyperparams(), agent.action_lower(), agent.action_upper(), seed, episodes};
}

std::string serialize_checkpoint(const Checkpoint& c) {
  Writer w;
  w.raw(kMagic, sizeof(kMagic));
  w.put<std::uint32_t>(kCheckpointVersion);
  w.put<std::uint64_t>(c.seed);
  w.put<std::uint64_t>(c.episodes);

  const auto& h = c.hyperparams;
  w.put<double>(h.gamma);
  w.put<double>(h.tau);
  w.put<std::uint64_t>(h.batch_size);
  w.put<std::uint64_t>(h.buffer_capacity);
  w.put<double>(h.actor_lr);
  w.put<double>(h.critic_lr);
  w.put<std::uint32_t>(h.optimizer == OptimizerKind::Adam ? 1u : 0u);
  w.put<double>(h.noise_decay);
  w.put<double>(h.noise_sigma);
  w.put<double>(h.noise_final_scale);
  w.put<std::uint64_t>(h.max_steps);
  w.put<std::uint64_t>(h.episodes);
  w.put<std::uint64_t>(h.hidden);
  w.put<double>(h.final_layer_init);
  w.put<std::uint8_t>(h.invert_gradients ? 1 : 0);

  w.put<std::uint64_t>(static_cast<std::uint64_t>(c.params.actor.obs_size()));
  w.put<std::uint64_t>(static_cast<std::uint64_t>(c.action_lower.size()));
  for (Eigen::Index i = 0; i < c.action_lower.size(); ++i) w.put<double>(c.action_lower[i]);
  for (Eigen::Index i = 0; i < c.action_upper.size(); ++i) w.put<double>(c.action_upper[i]);

  write_stack(w, c.params.actor.layers());
  write_stack(w, c.params.critic.layers());
  write_stack(w, c.params.actor_target.layers());
  write_stack(w, c.params.critic_target.layers());

  const std::uint64_t hash = fnv1a(w.bytes().data(), w.bytes().size());
  w.put<std::uint64_t>(hash);
  return std::move(w.bytes());
}

Checkpoint deserialize_checkpoint(const std::string& bytes) {
  if (bytes.size() < sizeof(kMagic) + sizeof(std::uint64_t)) throw CheckpointCorrupt("checkpoint too short");
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) throw CheckpointCorrupt("bad checkpoint magic");
  const std::size_t body = bytes.size() - sizeof(std::uint64_t);
  std::uint64_t stored = 0;
  std::memcpy(&stored, bytes.data() + body, sizeof(stored));
  if (stored != fnv1a(bytes.data(), body)) throw CheckpointCorrupt("checkpoint checksum mismatch");

  Reader r(bytes, body);
  for (std::size_t i = 0; i < sizeof(kMagic); ++i) r.get<char>();
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion) throw CheckpointCorrupt("unsupported checkpoint version " + std::to_string(version));

  Checkpoint c;
  c.seed = r.get<std::uint64_t>();
  c.episodes = r.get<std::uint64_t>();
  auto& h = c.hyperparams;
  h.gamma = r.get<double>();
  h.tau = r.get<double>();
  h.batch_size = r.get<std::uint64_t>();
  h.buffer_capacity = r.get<std::uint64_t>();
  h.actor_lr = r.get<double>();
  h.critic_lr = r.get<double>();
  h.optimizer = r.get<std::uint32_t>() == 1u ? OptimizerKind::Adam : OptimizerKind::Sgd;
  h.noise_decay = r.get<double>();
  h.noise_sigma = r.get<double>();
  h.noise_final_scale = r.get<double>();
  h.max_steps = r.get<std::uint64_t>();
  h.episodes = r.get<std::uint64_t>();
  h.hidden = r.get<std::uint64_t>();
  h.final_layer_init = r.get<double>();
  h.invert_gradients = r.get<std::uint8_t>() != 0;
  try {
    h.validate();
  } catch (const std::invalid_argument& e) {
    throw CheckpointCorrupt(std::string("invalid hyperparameters: ") + e.what());
  }

  const auto obs = r.get<std::uint64_t>();
  const auto act = r.get<std::uint64_t>();
  if (obs == 0 || act == 0 || obs > kMaxDim || act > kMaxDim || h.hidden > kMaxDim) {
    throw CheckpointCorrupt("implausible network dimensions");
  }
  c.action_lower.resize(static_cast<Eigen::Index>(act));
  c.action_upper.resize(static_cast<Eigen::Index>(act));
  for (Eigen::Index i = 0; i < c.action_lower.size(); ++i) c.action_lower[i] = r.get<double>();
  for (Eigen::Index i = 0; i < c.action_upper.size(); ++i) c.action_upper[i] = r.get<double>();

  const auto o = static_cast<Eigen::Index>(obs), a = static_cast<Eigen::Index>(act);
  const auto hid = static_cast<Eigen::Index>(h.hidden);
  c.params.actor = Actor(o, a, hid);
  c.params.critic = Critic(o, a, hid);
  c.params.actor_target = Actor(o, a, hid);
  c.params.critic_target = Critic(o, a, hid);
  read_stack(r, c.params.actor.layers());
  read_stack(r, c.params.critic.layers());
  read_stack(r, c.params.actor_target.layers());
  read_stack(r, c.params.critic_target.layers());
  if (r.pos() != body) throw CheckpointCorrupt("trailing bytes in checkpoint");
  return c;
}

void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path) {
  const std::string bytes = serialize_checkpoint(c);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    os.flush();
    if (!os) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CheckpointCorrupt("cannot open checkpoint " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return deserialize_checkpoint(ss.str());
}

}  // namespace balance::ddpg
