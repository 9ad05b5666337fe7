// Copyright 2026 The fsqa Authors.
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

#include "fsqa/params.hpp"

#include <stdexcept>

#include "fsqa/ops.hpp"

namespace fsqa {

void ParamSet::set(const std::string& name, NodePtr node) {
  if (!node) throw std::invalid_argument("ParamSet::set: null node for " + name);
  items_[name] = std::move(node);
}

const NodePtr& ParamSet::at(const std::string& name) const {
  const auto it = items_.find(name);
  if (it == items_.end())
    throw std::out_of_range("ParamSet: no parameter named " + name);
  return it->second;
}

std::vector<std::string> ParamSet::names() const {
  std::vector<std::string> out;
  out.reserve(items_.size());
  for (const auto& [name, node] : items_) out.push_back(name);
  return out;
}

std::vector<NodePtr> ParamSet::nodes() const {
  std::vector<NodePtr> out;
  out.reserve(items_.size());
  for (const auto& [name, node] : items_) out.push_back(node);
  return out;
}

bool ParamSet::congruent_with(const ParamSet& o) const {
  if (items_.size() != o.items_.size()) return false;
  auto a = items_.begin();
  auto b = o.items_.begin();
  for (; a != items_.end(); ++a, ++b) {
    if (a->first != b->first) return false;
    if (a->second->value().shape() != b->second->value().shape()) return false;
  }
  return true;
}

ParamSet ParamSet::detached() const {
  ParamSet out;
  for (const auto& [name, node] : items_) out.set(name, leaf(node->value()));
  return out;
}

std::map<std::string, Tensor> ParamSet::values() const {
  std::map<std::string, Tensor> out;
  for (const auto& [name, node] : items_) out.emplace(name, node->value());
  return out;
}

ParamSet ParamSet::from_values(const std::map<std::string, Tensor>& values) {
  ParamSet out;
  for (const auto& [name, t] : values) out.set(name, leaf(t));
  return out;
}

std::map<std::string, Tensor> gradient_values(const NodePtr& loss,
                                              const ParamSet& params) {
  const std::vector<Tensor> grads = gradients(loss, params.nodes());
  std::map<std::string, Tensor> out;
  std::size_t i = 0;
  for (const auto& [name, node] : params) out.emplace(name, grads[i++]);
  return out;
}

ParamSet gradient_node_set(const NodePtr& loss, const ParamSet& params) {
  const std::vector<NodePtr> grads = gradient_nodes(loss, params.nodes());
  ParamSet out;
  std::size_t i = 0;
  for (const auto& [name, node] : params) out.set(name, grads[i++]);
  return out;
}

std::map<std::string, Tensor> grad_through_adaptation(const LossFn& inner_loss,
                                                      const LossFn& outer_loss,
                                                      const ParamSet& params,
                                                      int inner_steps,
                                                      double inner_lr) {
  if (inner_steps < 0)
    throw std::invalid_argument("grad_through_adaptation: inner_steps must be >= 0");

  ParamSet current = params;
  for (int step = 0; step < inner_steps; ++step) {
    const NodePtr loss = inner_loss(current);
    const ParamSet grads = gradient_node_set(loss, current);
    ParamSet next;
    for (const auto& [name, node] : current)
      next.set(name, sub(node, scale(grads.at(name), inner_lr)));
    current = std::move(next);
  }

  return gradient_values(outer_loss(current), params);
}

}  // namespace fsqa
