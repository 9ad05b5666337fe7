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

#ifndef FSQA_GRAPH_HPP_
#define FSQA_GRAPH_HPP_

#include <memory>
#include <vector>

#include "fsqa/tensor.hpp"

namespace fsqa {

enum class Op {
  Leaf,
  Add,
  Sub,
  Mul,
  Div,
  Scale,
  AddScalar,
  MatMul,
  Transpose,
  Exp,
  Log,
  Tanh,
  Relu,
  RowSums,
  ColSums,
  SumAll,
  BroadcastCol,
  BroadcastRow,
  BroadcastTo,
  Reshape,
  ConcatRows,
  SliceRows,
  GatherRows,
  ScatterRows,
};

const char* op_name(Op op);

class Node;
using NodePtr = std::shared_ptr<const Node>;

// One vertex of the computation DAG. Values are computed eagerly when the
// node is built; nodes are immutable afterwards and safe to share between
// graphs. Backward passes emit new nodes (see gradient_nodes), which is
// what makes gradients-of-gradients work.
class Node {
 public:
  Node(Op op, Tensor value, std::vector<NodePtr> inputs)
      : op_(op), value_(std::move(value)), inputs_(std::move(inputs)) {}

  Op op() const { return op_; }
  const Tensor& value() const { return value_; }
  const std::vector<NodePtr>& inputs() const { return inputs_; }

  // Op-specific attributes, set once by the builders in ops.hpp.
  double scalar = 0.0;              // Scale / AddScalar
  Index i0 = 0;                     // SliceRows begin; ScatterRows out rows;
                                    // BroadcastCol cols; BroadcastRow rows
  Index i1 = 0;                     // SliceRows count
  std::vector<Index> index_list;    // GatherRows / ScatterRows row ids
  Shape shape_attr;                 // Reshape / BroadcastTo target shape

 private:
  Op op_;
  Tensor value_;
  std::vector<NodePtr> inputs_;
};

// Reverse-mode differentiation. `loss` must hold exactly one element.
// Returns one gradient per entry of `wrt`, in order; parameters the loss
// does not depend on get zero tensors of matching shape. The returned
// gradients are ordinary graph nodes, so they can be differentiated again.
std::vector<NodePtr> gradient_nodes(const NodePtr& loss,
                                    const std::vector<NodePtr>& wrt);

// Same, but materializes the values and drops the backward graph.
std::vector<Tensor> gradients(const NodePtr& loss,
                              const std::vector<NodePtr>& wrt);

}  // namespace fsqa

#endif  // FSQA_GRAPH_HPP_
