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

#include "balance/ddpg/network.hpp"

#include <cmath>
#include <stdexcept>

namespace balance::ddpg {
namespace {

Matrix relu(const Matrix& z) { return z.cwiseMax(0.0); }

/// d/dz relu applied to an upstream gradient, using the activation itself.
Matrix relu_backward(const Matrix& activation, const Matrix& upstream) {
  return (activation.array() > 0.0).cast<double>().cwiseProduct(upstream.array()).matrix();
}

void accumulate(DenseLayer& grad, const Matrix& d_out, const Matrix& input) {
  grad.weights.noalias() += d_out * input.transpose();
  grad.bias += d_out.rowwise().sum();
}

}  // namespace

Matrix DenseLayer::forward(const Matrix& x) const {
  Matrix y = weights * x;
  y.colwise() += bias;
  return y;
}

void DenseLayer::init_uniform(double bound, Rng& rng) {
  std::uniform_real_distribution<double> u(-bound, bound);
  for (Eigen::Index i = 0; i < weights.size(); ++i) weights.data()[i] = u(rng);
  for (Eigen::Index i = 0; i < bias.size(); ++i) bias[i] = u(rng);
}

void DenseLayer::set_zero() {
  weights.setZero();
  bias.setZero();
}

Eigen::Index parameter_count(const LayerStack& layers) {
  Eigen::Index n = 0;
  for (const auto& l : layers) n += l.parameter_count();
  return n;
}

double& parameter_at(LayerStack& layers, Eigen::Index flat) {
  for (auto& l : layers) {
    if (flat < l.weights.size()) return l.weights.data()[flat];
    flat -= l.weights.size();
    if (flat < l.bias.size()) return l.bias[flat];
    flat -= l.bias.size();
  }
  throw std::out_of_range("parameter index out of range");
}

Actor::Actor(Eigen::Index obs_size, Eigen::Index action_size, Eigen::Index hidden)
    : layers_{DenseLayer(obs_size, hidden), DenseLayer(hidden, hidden), DenseLayer(hidden, action_size)} {}

void Actor::initialize(Rng& rng, double final_bound) {
  layers_[0].init_uniform(1.0 / std::sqrt(static_cast<double>(layers_[0].inputs())), rng);
  layers_[1].init_uniform(1.0 / std::sqrt(static_cast<double>(layers_[1].inputs())), rng);
  layers_[2].init_uniform(final_bound, rng);
}

Matrix Actor::forward(const Matrix& obs) const {
  Cache c;
  return forward(obs, c);
}

Matrix Actor::forward(const Matrix& obs, Cache& c) const {
  c.input = obs;
  c.h1 = relu(layers_[0].forward(obs));
  c.h2 = relu(layers_[1].forward(c.h1));
  return layers_[2].forward(c.h2);
}

void Actor::backward(const Cache& c, const Matrix& d_out, LayerStack& grads) const {
  accumulate(grads[2], d_out, c.h2);
  const Matrix d2 = relu_backward(c.h2, layers_[2].weights.transpose() * d_out);
  accumulate(grads[1], d2, c.h1);
  const Matrix d1 = relu_backward(c.h1, layers_[1].weights.transpose() * d2);
  accumulate(grads[0], d1, c.input);
}

Critic::Critic(Eigen::Index obs_size, Eigen::Index action_size, Eigen::Index hidden)
    : layers_{DenseLayer(obs_size, hidden), DenseLayer(hidden + action_size, hidden), DenseLayer(hidden, 1)} {}

void Critic::initialize(Rng& rng, double final_bound) {
  layers_[0].init_uniform(1.0 / std::sqrt(static_cast<double>(layers_[0].inputs())), rng);
  layers_[1].init_uniform(1.0 / std::sqrt(static_cast<double>(layers_[1].inputs())), rng);
  layers_[2].init_uniform(final_bound, rng);
}

Matrix Critic::forward(const Matrix& obs, const Matrix& action) const {
  Cache c;
  return forward(obs, action, c);
}

Matrix Critic::forward(const Matrix& obs, const Matrix& action, Cache& c) const {
  const Eigen::Index hidden = layers_[0].outputs();
  c.obs = obs;
  c.joined.resize(hidden + action.rows(), obs.cols());
  c.joined.topRows(hidden) = relu(layers_[0].forward(obs));
  c.joined.bottomRows(action.rows()) = action;
  c.h2 = relu(layers_[1].forward(c.joined));
  return layers_[2].forward(c.h2);
}

Matrix Critic::backward(const Cache& c, const Matrix& d_q, LayerStack& grads) const {
  const Eigen::Index hidden = layers_[0].outputs();
  accumulate(grads[2], d_q, c.h2);
  const Matrix d2 = relu_backward(c.h2, layers_[2].weights.transpose() * d_q);
  accumulate(grads[1], d2, c.joined);
  const Matrix d_joined = layers_[1].weights.transpose() * d2;
  const Matrix d1 = relu_backward(c.joined.topRows(hidden), d_joined.topRows(hidden));
  accumulate(grads[0], d1, c.obs);
  return d_joined.bottomRows(d_joined.rows() - hidden);
}

LayerStack zeros_like(const LayerStack& layers) {
  LayerStack z;
  for (std::size_t i = 0; i < layers.size(); ++i) z[i] = DenseLayer(layers[i].inputs(), layers[i].outputs());
  return z;
}

void soft_update(LayerStack& target, const LayerStack& source, double tau) {
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i].weights.rows() != source[i].weights.rows() ||
        target[i].weights.cols() != source[i].weights.cols()) {
      throw std::invalid_argument("soft_update: shape mismatch");
    }
    target[i].weights = tau * source[i].weights + (1.0 - tau) * target[i].weights;
    target[i].bias = tau * source[i].bias + (1.0 - tau) * target[i].bias;
  }
}

Optimizer::Optimizer(OptimizerKind kind, double learning_rate, const LayerStack& shape)
    : kind_(kind), lr_(learning_rate), m_(zeros_like(shape)), v_(zeros_like(shape)) {}

void Optimizer::step(LayerStack& params, const LayerStack& grads) {
  if (kind_ == OptimizerKind::Sgd) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      params[i].weights -= lr_ * grads[i].weights;
      params[i].bias -= lr_ * grads[i].bias;
    }
    return;
  }
  ++steps_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(steps_));
  const auto update = [&](Matrix& p, const Matrix& g, Matrix& m, Matrix& v) {
    m = beta1_ * m + (1.0 - beta1_) * g;
    v = beta2_ * v + (1.0 - beta2_) * g.cwiseProduct(g);
    p.array() -= lr_ * (m.array() / c1) / ((v.array() / c2).sqrt() + eps_);
  };
  for (std::size_t i = 0; i < params.size(); ++i) {
    update(params[i].weights, grads[i].weights, m_[i].weights, v_[i].weights);
    Matrix pb = params[i].bias, gb = grads[i].bias, mb = m_[i].bias, vb = v_[i].bias;
    update(pb, gb, mb, vb);
    params[i].bias = pb;
    m_[i].bias = mb;
    v_[i].bias = vb;
  }
}

}  // namespace balance::ddpg
