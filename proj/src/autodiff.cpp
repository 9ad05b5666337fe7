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

#include "fsqa/ops.hpp"

#include <cmath>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace fsqa {

const char* op_name(Op op) {
  switch (op) {
    case Op::Leaf: return "Leaf";
    case Op::Add: return "Add";
    case Op::Sub: return "Sub";
    case Op::Mul: return "Mul";
    case Op::Div: return "Div";
    case Op::Scale: return "Scale";
    case Op::AddScalar: return "AddScalar";
    case Op::MatMul: return "MatMul";
    case Op::Transpose: return "Transpose";
    case Op::Exp: return "Exp";
    case Op::Log: return "Log";
    case Op::Tanh: return "Tanh";
    case Op::Relu: return "Relu";
    case Op::RowSums: return "RowSums";
    case Op::ColSums: return "ColSums";
    case Op::SumAll: return "SumAll";
    case Op::BroadcastCol: return "BroadcastCol";
    case Op::BroadcastRow: return "BroadcastRow";
    case Op::BroadcastTo: return "BroadcastTo";
    case Op::Reshape: return "Reshape";
    case Op::ConcatRows: return "ConcatRows";
    case Op::SliceRows: return "SliceRows";
    case Op::GatherRows: return "GatherRows";
    case Op::ScatterRows: return "ScatterRows";
  }
  return "?";
}

namespace {

std::shared_ptr<Node> make_node(Op op, Tensor value, std::vector<NodePtr> inputs) {
  value.throw_if_not_finite(op_name(op));
  return std::make_shared<Node>(op, std::move(value), std::move(inputs));
}

void require(bool ok, const char* what) {
  if (!ok) throw ShapeError(what);
}

void require_same_shape(const NodePtr& a, const NodePtr& b, const char* op) {
  if (!a->value().same_shape(b->value()))
    throw ShapeError(std::string(op) + ": shape mismatch " +
                     shape_to_string(a->value().shape()) + " vs " +
                     shape_to_string(b->value().shape()));
}

}  // namespace

NodePtr leaf(Tensor value) {
  value.throw_if_not_finite("Leaf");
  return std::make_shared<Node>(Op::Leaf, std::move(value), std::vector<NodePtr>{});
}

NodePtr constant(Tensor value) { return leaf(std::move(value)); }

NodePtr add(const NodePtr& a, const NodePtr& b) {
  require_same_shape(a, b, "add");
  Tensor out = a->value();
  out.array() += b->value().array();
  return make_node(Op::Add, std::move(out), {a, b});
}

NodePtr sub(const NodePtr& a, const NodePtr& b) {
  require_same_shape(a, b, "sub");
  Tensor out = a->value();
  out.array() -= b->value().array();
  return make_node(Op::Sub, std::move(out), {a, b});
}

NodePtr mul(const NodePtr& a, const NodePtr& b) {
  require_same_shape(a, b, "mul");
  Tensor out = a->value();
  out.array() *= b->value().array();
  return make_node(Op::Mul, std::move(out), {a, b});
}

NodePtr div(const NodePtr& a, const NodePtr& b) {
  require_same_shape(a, b, "div");
  Tensor out = a->value();
  out.array() /= b->value().array();
  return make_node(Op::Div, std::move(out), {a, b});
}

NodePtr scale(const NodePtr& a, double c) {
  Tensor out = a->value();
  out.array() *= c;
  auto n = std::make_shared<Node>(Op::Scale, std::move(out), std::vector<NodePtr>{a});
  n->scalar = c;
  n->value().throw_if_not_finite("Scale");
  return n;
}

NodePtr add_scalar(const NodePtr& a, double c) {
  Tensor out = a->value();
  out.array() += c;
  auto n = std::make_shared<Node>(Op::AddScalar, std::move(out), std::vector<NodePtr>{a});
  n->scalar = c;
  n->value().throw_if_not_finite("AddScalar");
  return n;
}

NodePtr neg(const NodePtr& a) { return scale(a, -1.0); }

NodePtr matmul(const NodePtr& a, const NodePtr& b) {
  require(a->value().rank() == 2 && b->value().rank() == 2, "matmul: rank-2 operands required");
  if (a->value().cols() != b->value().rows())
    throw ShapeError("matmul: inner dimensions differ " +
                     shape_to_string(a->value().shape()) + " x " +
                     shape_to_string(b->value().shape()));
  Tensor out(Shape{a->value().rows(), b->value().cols()});
  out.mat().noalias() = a->value().mat() * b->value().mat();
  return make_node(Op::MatMul, std::move(out), {a, b});
}

NodePtr transpose(const NodePtr& a) {
  require(a->value().rank() == 2, "transpose: rank-2 operand required");
  Tensor out(Shape{a->value().cols(), a->value().rows()});
  out.mat() = a->value().mat().transpose();
  return make_node(Op::Transpose, std::move(out), {a});
}

NodePtr exp(const NodePtr& a) {
  Tensor out = a->value();
  out.array() = out.array().exp();
  return make_node(Op::Exp, std::move(out), {a});
}

NodePtr log(const NodePtr& a) {
  Tensor out = a->value();
  out.array() = out.array().log();
  return make_node(Op::Log, std::move(out), {a});
}

NodePtr tanh(const NodePtr& a) {
  Tensor out = a->value();
  out.array() = out.array().tanh();
  return make_node(Op::Tanh, std::move(out), {a});
}

NodePtr relu(const NodePtr& a) {
  Tensor out = a->value();
  out.array() = out.array().max(0.0);
  return make_node(Op::Relu, std::move(out), {a});
}

NodePtr row_sums(const NodePtr& a) {
  require(a->value().rank() == 2, "row_sums: rank-2 operand required");
  Tensor out(Shape{a->value().rows(), 1});
  out.mat() = a->value().mat().rowwise().sum();
  return make_node(Op::RowSums, std::move(out), {a});
}

NodePtr col_sums(const NodePtr& a) {
  require(a->value().rank() == 2, "col_sums: rank-2 operand required");
  Tensor out(Shape{1, a->value().cols()});
  out.mat() = a->value().mat().colwise().sum();
  return make_node(Op::ColSums, std::move(out), {a});
}

NodePtr sum_all(const NodePtr& a) {
  Tensor out = Tensor::scalar(a->value().array().sum());
  return make_node(Op::SumAll, std::move(out), {a});
}

NodePtr broadcast_col(const NodePtr& v, Index cols) {
  require(v->value().rank() == 2 && v->value().cols() == 1,
          "broadcast_col: R x 1 operand required");
  require(cols >= 1, "broadcast_col: cols must be >= 1");
  Tensor out(Shape{v->value().rows(), cols});
  out.mat() = v->value().mat().replicate(1, cols);
  auto n = make_node(Op::BroadcastCol, std::move(out), {v});
  n->i0 = cols;
  return n;
}

NodePtr broadcast_row(const NodePtr& v, Index rows) {
  require(v->value().rank() == 2 && v->value().rows() == 1,
          "broadcast_row: 1 x C operand required");
  require(rows >= 1, "broadcast_row: rows must be >= 1");
  Tensor out(Shape{rows, v->value().cols()});
  out.mat() = v->value().mat().replicate(rows, 1);
  auto n = make_node(Op::BroadcastRow, std::move(out), {v});
  n->i0 = rows;
  return n;
}

NodePtr broadcast_to(const NodePtr& s, Shape shape) {
  require(s->value().numel() == 1, "broadcast_to: one-element operand required");
  Tensor out = Tensor::full(shape, s->value().item());
  auto n = make_node(Op::BroadcastTo, std::move(out), {s});
  n->shape_attr = std::move(shape);
  return n;
}

NodePtr reshape(const NodePtr& a, Shape shape) {
  Tensor out = a->value().reshaped(shape);
  auto n = make_node(Op::Reshape, std::move(out), {a});
  n->shape_attr = std::move(shape);
  return n;
}

NodePtr concat_rows(const std::vector<NodePtr>& parts) {
  require(!parts.empty(), "concat_rows: no parts");
  const Index cols = parts[0]->value().cols();
  Index rows = 0;
  for (const auto& p : parts) {
    require(p->value().rank() == 2, "concat_rows: rank-2 parts required");
    if (p->value().cols() != cols)
      throw ShapeError("concat_rows: column count mismatch");
    rows += p->value().rows();
  }
  Tensor out(Shape{rows, cols});
  Index at = 0;
  for (const auto& p : parts) {
    const Index r = p->value().rows();
    out.mat().middleRows(at, r) = p->value().mat();
    at += r;
  }
  return make_node(Op::ConcatRows, std::move(out), parts);
}

NodePtr slice_rows(const NodePtr& a, Index begin, Index count) {
  require(a->value().rank() == 2, "slice_rows: rank-2 operand required");
  require(begin >= 0 && count >= 1 && begin + count <= a->value().rows(),
          "slice_rows: range out of bounds");
  Tensor out(Shape{count, a->value().cols()});
  out.mat() = a->value().mat().middleRows(begin, count);
  auto n = make_node(Op::SliceRows, std::move(out), {a});
  n->i0 = begin;
  n->i1 = count;
  return n;
}

NodePtr gather_rows(const NodePtr& table, std::vector<Index> ids) {
  require(table->value().rank() == 2, "gather_rows: rank-2 table required");
  require(!ids.empty(), "gather_rows: empty id list");
  const Index rows = table->value().rows();
  for (Index id : ids)
    require(id >= 0 && id < rows, "gather_rows: id out of range");
  Tensor out(Shape{static_cast<Index>(ids.size()), table->value().cols()});
  for (Index i = 0; i < out.rows(); ++i)
    out.mat().row(i) = table->value().mat().row(ids[static_cast<std::size_t>(i)]);
  auto n = make_node(Op::GatherRows, std::move(out), {table});
  n->index_list = std::move(ids);
  return n;
}

NodePtr scatter_rows(const NodePtr& src, std::vector<Index> ids, Index rows_out) {
  require(src->value().rank() == 2, "scatter_rows: rank-2 source required");
  require(static_cast<Index>(ids.size()) == src->value().rows(),
          "scatter_rows: id count must equal source rows");
  for (Index id : ids)
    require(id >= 0 && id < rows_out, "scatter_rows: id out of range");
  Tensor out = Tensor::zeros(Shape{rows_out, src->value().cols()});
  for (Index i = 0; i < src->value().rows(); ++i)
    out.mat().row(ids[static_cast<std::size_t>(i)]) += src->value().mat().row(i);
  auto n = make_node(Op::ScatterRows, std::move(out), {src});
  n->index_list = std::move(ids);
  n->i0 = rows_out;
  return n;
}

// ---- backward -----------------------------------------------------------

namespace {

// Per-op vector-Jacobian products, expressed with the ops above so the
// backward pass is itself differentiable.
std::vector<NodePtr> vjp(const NodePtr& n, const NodePtr& g) {
  const auto& in = n->inputs();
  switch (n->op()) {
    case Op::Leaf:
      return {};
    case Op::Add:
      return {g, g};
    case Op::Sub:
      return {g, neg(g)};
    case Op::Mul:
      return {mul(g, in[1]), mul(g, in[0])};
    case Op::Div:
      // d/da (a/b) = 1/b ; d/db (a/b) = -(a/b)/b
      return {div(g, in[1]), neg(div(mul(g, n), in[1]))};
    case Op::Scale:
      return {scale(g, n->scalar)};
    case Op::AddScalar:
      return {g};
    case Op::MatMul:
      return {matmul(g, transpose(in[1])), matmul(transpose(in[0]), g)};
    case Op::Transpose:
      return {transpose(g)};
    case Op::Exp:
      return {mul(g, n)};
    case Op::Log:
      return {div(g, in[0])};
    case Op::Tanh:
      // 1 - tanh(x)^2, reusing the forward node
      return {mul(g, add_scalar(neg(mul(n, n)), 1.0))};
    case Op::Relu: {
      Tensor mask = in[0]->value();
      mask.array() = (mask.array() > 0.0).cast<double>();
      return {mul(g, constant(std::move(mask)))};
    }
    case Op::RowSums:
      return {broadcast_col(g, in[0]->value().cols())};
    case Op::ColSums:
      return {broadcast_row(g, in[0]->value().rows())};
    case Op::SumAll:
      return {broadcast_to(g, in[0]->value().shape())};
    case Op::BroadcastCol:
      return {row_sums(g)};
    case Op::BroadcastRow:
      return {col_sums(g)};
    case Op::BroadcastTo:
      return {sum_all(g)};
    case Op::Reshape:
      return {reshape(g, in[0]->value().shape())};
    case Op::ConcatRows: {
      std::vector<NodePtr> out;
      out.reserve(in.size());
      Index at = 0;
      for (const auto& p : in) {
        out.push_back(slice_rows(g, at, p->value().rows()));
        at += p->value().rows();
      }
      return out;
    }
    case Op::SliceRows: {
      std::vector<Index> ids(static_cast<std::size_t>(n->i1));
      for (Index i = 0; i < n->i1; ++i)
        ids[static_cast<std::size_t>(i)] = n->i0 + i;
      return {scatter_rows(g, std::move(ids), in[0]->value().rows())};
    }
    case Op::GatherRows:
      return {scatter_rows(g, n->index_list, in[0]->value().rows())};
    case Op::ScatterRows:
      return {gather_rows(g, n->index_list)};
  }
  throw std::logic_error("vjp: unhandled op");
}

// Inputs-before-consumers ordering of every node reachable from root.
// Owning pointers: backward nodes may capture forward nodes as inputs.
std::vector<NodePtr> topo_order(const NodePtr& root) {
  std::vector<NodePtr> order;
  std::unordered_set<const Node*> visited;
  // (node, next input index to visit)
  std::vector<std::pair<NodePtr, std::size_t>> stack;
  stack.emplace_back(root, 0);
  visited.insert(root.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->inputs().size()) {
      const NodePtr& child = node->inputs()[next];
      ++next;
      if (visited.insert(child.get()).second) stack.emplace_back(child, 0);
    } else {
      order.push_back(std::move(node));
      stack.pop_back();
    }
  }
  return order;
}

}  // namespace

std::vector<NodePtr> gradient_nodes(const NodePtr& loss,
                                    const std::vector<NodePtr>& wrt) {
  if (!loss) throw std::invalid_argument("gradient_nodes: null loss");
  if (loss->value().numel() != 1)
    throw ShapeError("gradient_nodes: loss must hold exactly one element, got " +
                     shape_to_string(loss->value().shape()));

  const std::vector<NodePtr> order = topo_order(loss);
  std::unordered_map<const Node*, NodePtr> adjoint;
  adjoint.reserve(order.size());
  adjoint[loss.get()] = constant(Tensor::full(loss->value().shape(), 1.0));

  // Consumers come last in `order`, so a reverse sweep sees every node's
  // full adjoint before propagating it to the node's inputs.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodePtr& node = *it;
    if (node->op() == Op::Leaf) continue;
    const auto found = adjoint.find(node.get());
    if (found == adjoint.end()) continue;
    std::vector<NodePtr> input_grads = vjp(node, found->second);
    for (std::size_t i = 0; i < input_grads.size(); ++i) {
      const Node* input = node->inputs()[i].get();
      auto [slot, inserted] = adjoint.try_emplace(input, input_grads[i]);
      if (!inserted) slot->second = add(slot->second, input_grads[i]);
    }
  }

  std::vector<NodePtr> out;
  out.reserve(wrt.size());
  for (const auto& w : wrt) {
    if (!w) throw std::invalid_argument("gradient_nodes: null wrt entry");
    const auto found = adjoint.find(w.get());
    if (found != adjoint.end()) {
      out.push_back(found->second);
    } else {
      out.push_back(constant(Tensor::zeros(w->value().shape())));
    }
  }
  return out;
}

std::vector<Tensor> gradients(const NodePtr& loss, const std::vector<NodePtr>& wrt) {
  std::vector<NodePtr> nodes = gradient_nodes(loss, wrt);
  std::vector<Tensor> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) out.push_back(n->value());
  return out;
}

// ---- composites ----------------------------------------------------------

NodePtr row_softmax(const NodePtr& x) {
  require(x->value().rank() == 2, "row_softmax: rank-2 operand required");
  const Index cols = x->value().cols();
  // Row maxima enter as constants; the result is identical for any constant
  // shift, so derivatives of all orders are unaffected.
  Tensor m(Shape{x->value().rows(), 1});
  m.mat() = x->value().mat().rowwise().maxCoeff();
  NodePtr shifted = sub(x, broadcast_col(constant(std::move(m)), cols));
  NodePtr e = exp(shifted);
  return div(e, broadcast_col(row_sums(e), cols));
}

NodePtr softmax(const NodePtr& x) {
  require(x->value().rank() == 1, "softmax: rank-1 operand required");
  const Index n = x->value().numel();
  return reshape(row_softmax(reshape(x, Shape{1, n})), Shape{n});
}

NodePtr logsumexp_rows(const NodePtr& x) {
  require(x->value().rank() == 2, "logsumexp_rows: rank-2 operand required");
  const Index cols = x->value().cols();
  Tensor m(Shape{x->value().rows(), 1});
  m.mat() = x->value().mat().rowwise().maxCoeff();
  NodePtr mc = constant(std::move(m));
  NodePtr e = exp(sub(x, broadcast_col(mc, cols)));
  return add(log(row_sums(e)), mc);
}

NodePtr cross_entropy_mean(const NodePtr& logits, const std::vector<Index>& targets) {
  require(logits->value().rank() == 2, "cross_entropy_mean: rank-2 logits required");
  const Index rows = logits->value().rows();
  const Index cols = logits->value().cols();
  require(static_cast<Index>(targets.size()) == rows,
          "cross_entropy_mean: one target per row required");
  Tensor onehot = Tensor::zeros(Shape{rows, cols});
  for (Index i = 0; i < rows; ++i) {
    const Index t = targets[static_cast<std::size_t>(i)];
    require(t >= 0 && t < cols, "cross_entropy_mean: target out of range");
    onehot.at(i, t) = 1.0;
  }
  NodePtr picked = row_sums(mul(logits, constant(std::move(onehot))));
  NodePtr losses = sub(logsumexp_rows(logits), picked);
  return scale(sum_all(losses), 1.0 / static_cast<double>(rows));
}

NodePtr cross_entropy(const NodePtr& logits, Index target) {
  require(logits->value().rank() == 1, "cross_entropy: rank-1 logits required");
  return cross_entropy_mean(reshape(logits, Shape{1, logits->value().numel()}),
                            {target});
}

NodePtr mean_rows(const NodePtr& x) {
  require(x->value().rank() == 2, "mean_rows: rank-2 operand required");
  return scale(col_sums(x), 1.0 / static_cast<double>(x->value().rows()));
}

NodePtr mean_pool(const NodePtr& x) {
  return reshape(mean_rows(x), Shape{x->value().cols()});
}

NodePtr stack_scalars(const std::vector<NodePtr>& scalars) {
  require(!scalars.empty(), "stack_scalars: no inputs");
  std::vector<NodePtr> rows;
  rows.reserve(scalars.size());
  for (const auto& s : scalars) {
    require(s->value().numel() == 1, "stack_scalars: operands must hold one element");
    rows.push_back(reshape(s, Shape{1, 1}));
  }
  return reshape(concat_rows(rows), Shape{static_cast<Index>(scalars.size())});
}

AttentionOut scaled_dot_attention(const NodePtr& x, const NodePtr& wq,
                                  const NodePtr& wk, const NodePtr& wv) {
  require(x->value().rank() == 2, "scaled_dot_attention: rank-2 sequence required");
  const Index d = x->value().cols();
  require(wq->value().rank() == 2 && wq->value().rows() == d,
          "scaled_dot_attention: Wq shape mismatch");
  NodePtr q = matmul(x, wq);
  NodePtr k = matmul(x, wk);
  NodePtr v = matmul(x, wv);
  NodePtr scores =
      scale(matmul(q, transpose(k)), 1.0 / std::sqrt(static_cast<double>(d)));
  NodePtr weights = row_softmax(scores);
  return AttentionOut{matmul(weights, v), weights};
}

}  // namespace fsqa
