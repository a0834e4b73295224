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

#include <Eigen/Core>
#include <array>
#include <cstddef>
#include <random>
#include <span>

namespace balance::ddpg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Fully connected layer y = W x + b. Batches are column-major: one sample
/// per column.
struct DenseLayer {
  Matrix weights;  // out x in
  Vector bias;     // out

  DenseLayer() = default;
  DenseLayer(Eigen::Index in, Eigen::Index out) : weights(Matrix::Zero(out, in)), bias(Vector::Zero(out)) {}

  Eigen::Index inputs() const { return weights.cols(); }
  Eigen::Index outputs() const { return weights.rows(); }
  Eigen::Index parameter_count() const { return weights.size() + bias.size(); }

  Matrix forward(const Matrix& x) const;
  void init_uniform(double bound, Rng& rng);
  void set_zero();
};

/// Three dense layers; parameters and their gradients share this shape.
using LayerStack = std::array<DenseLayer, 3>;

/// Parameter visitors used by optimizers, soft updates and serialization.
Eigen::Index parameter_count(const LayerStack& layers);
double& parameter_at(LayerStack& layers, Eigen::Index flat_index);

/// obs -> 100 ReLU -> 100 ReLU -> action (linear, unbounded).
class Actor {
 public:
  struct Cache {
    Matrix input, h1, h2;
  };

  Actor() = default;
  Actor(Eigen::Index obs_size, Eigen::Index action_size, Eigen::Index hidden = 100);

  void initialize(Rng& rng, double final_bound = 3e-3);

  Matrix forward(const Matrix& obs) const;
  Matrix forward(const Matrix& obs, Cache& cache) const;
  /// Accumulates dL/dparams into grads given dL/d(output).
  void backward(const Cache& cache, const Matrix& d_output, LayerStack& grads) const;

  LayerStack& layers() { return layers_; }
  const LayerStack& layers() const { return layers_; }
  Eigen::Index obs_size() const { return layers_[0].inputs(); }
  Eigen::Index action_size() const { return layers_[2].outputs(); }

 private:
  LayerStack layers_;
};

/// obs -> 100 ReLU; [h1, action] -> 100 ReLU -> scalar Q. The action
/// bypasses the first hidden layer.
class Critic {
 public:
  struct Cache {
    Matrix obs, joined, h2;
  };

  Critic() = default;
  Critic(Eigen::Index obs_size, Eigen::Index action_size, Eigen::Index hidden = 100);

  void initialize(Rng& rng, double final_bound = 3e-3);

  /// 1 x N row of Q values.
  Matrix forward(const Matrix& obs, const Matrix& action) const;
  Matrix forward(const Matrix& obs, const Matrix& action, Cache& cache) const;
  /// Accumulates dL/dparams into grads and returns dL/d(action).
  Matrix backward(const Cache& cache, const Matrix& d_q, LayerStack& grads) const;

  LayerStack& layers() { return layers_; }
  const LayerStack& layers() const { return layers_; }
  Eigen::Index obs_size() const { return layers_[0].inputs(); }
  Eigen::Index action_size() const { return layers_[1].inputs() - layers_[0].outputs(); }

 private:
  LayerStack layers_;
};

/// Zero-valued layers with the same shapes as the given stack.
LayerStack zeros_like(const LayerStack& layers);

/// target <- tau * source + (1 - tau) * target.
void soft_update(LayerStack& target, const LayerStack& source, double tau);

enum class OptimizerKind { Sgd, Adam };

/// Minimizing first-order optimizer over one layer stack.
class Optimizer {
 public:
  Optimizer() = default;
  Optimizer(OptimizerKind kind, double learning_rate, const LayerStack& shape);

  void step(LayerStack& params, const LayerStack& grads);
  OptimizerKind kind() const { return kind_; }

 private:
  OptimizerKind kind_ = OptimizerKind::Sgd;
  double lr_ = 1e-3;
  double beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  long steps_ = 0;
  LayerStack m_, v_;
};

}  // namespace balance::ddpg
