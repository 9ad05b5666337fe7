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

#ifndef FSQA_PARAMS_HPP_
#define FSQA_PARAMS_HPP_

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fsqa/graph.hpp"

namespace fsqa {

// Named collection of parameter nodes. Iteration order is lexicographic,
// hence deterministic. Values start out as leaves; adapted copies may hold
// non-leaf nodes (e.g. theta - eta * grad built as graph ops).
class ParamSet {
 public:
  using Map = std::map<std::string, NodePtr>;

  ParamSet() = default;

  void set(const std::string& name, NodePtr node);
  const NodePtr& at(const std::string& name) const;
  bool contains(const std::string& name) const { return items_.count(name) != 0; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  Map::const_iterator begin() const { return items_.begin(); }
  Map::const_iterator end() const { return items_.end(); }

  std::vector<std::string> names() const;
  std::vector<NodePtr> nodes() const;  // ordered as names()

  // Same names and same shapes.
  bool congruent_with(const ParamSet& o) const;

  // Fresh leaves carrying copies of the current values.
  ParamSet detached() const;

  std::map<std::string, Tensor> values() const;
  static ParamSet from_values(const std::map<std::string, Tensor>& values);

 private:
  Map items_;
};

// Gradients of a one-element loss with respect to every parameter.
// Parameters the loss does not reach get zero tensors of matching shape.
std::map<std::string, Tensor> gradient_values(const NodePtr& loss,
                                              const ParamSet& params);

// As above, but gradients stay in the graph (differentiable).
ParamSet gradient_node_set(const NodePtr& loss, const ParamSet& params);

using LossFn = std::function<NodePtr(const ParamSet&)>;

// Gradient of outer_loss(adapted(params)) with respect to params, where
// adapted() is `inner_steps` full SGD steps on inner_loss built as graph
// ops. Includes the second-order terms that flow through the inner
// gradients; with inner_lr == 0 this reduces to the plain gradient of the
// outer loss at params.
std::map<std::string, Tensor> grad_through_adaptation(const LossFn& inner_loss,
                                                      const LossFn& outer_loss,
                                                      const ParamSet& params,
                                                      int inner_steps,
                                                      double inner_lr);

}  // namespace fsqa

#endif  // FSQA_PARAMS_HPP_
