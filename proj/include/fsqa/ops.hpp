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

#ifndef FSQA_OPS_HPP_
#define FSQA_OPS_HPP_

#include <vector>

#include "fsqa/graph.hpp"

namespace fsqa {

// ---- graph entry points -------------------------------------------------

// Trainable leaf (differentiation target).
NodePtr leaf(Tensor value);
// Non-trainable input; same node kind, just never passed to gradient_nodes.
NodePtr constant(Tensor value);

// ---- primitive ops (each has a VJP built from these same ops) -----------

NodePtr add(const NodePtr& a, const NodePtr& b);
NodePtr sub(const NodePtr& a, const NodePtr& b);
NodePtr mul(const NodePtr& a, const NodePtr& b);  // elementwise
NodePtr div(const NodePtr& a, const NodePtr& b);  // elementwise
NodePtr scale(const NodePtr& a, double c);
NodePtr add_scalar(const NodePtr& a, double c);
NodePtr neg(const NodePtr& a);

NodePtr matmul(const NodePtr& a, const NodePtr& b);  // rank-2 only
NodePtr transpose(const NodePtr& a);

NodePtr exp(const NodePtr& a);
NodePtr log(const NodePtr& a);
NodePtr tanh(const NodePtr& a);
NodePtr relu(const NodePtr& a);

NodePtr row_sums(const NodePtr& a);                  // R x C -> R x 1
NodePtr col_sums(const NodePtr& a);                  // R x C -> 1 x C
NodePtr sum_all(const NodePtr& a);                   // any -> rank 0
NodePtr broadcast_col(const NodePtr& v, Index cols); // R x 1 -> R x C
NodePtr broadcast_row(const NodePtr& v, Index rows); // 1 x C -> R x C
NodePtr broadcast_to(const NodePtr& s, Shape shape); // rank 0 -> shape
NodePtr reshape(const NodePtr& a, Shape shape);

NodePtr concat_rows(const std::vector<NodePtr>& parts);
NodePtr slice_rows(const NodePtr& a, Index begin, Index count);
NodePtr gather_rows(const NodePtr& table, std::vector<Index> ids);
NodePtr scatter_rows(const NodePtr& src, std::vector<Index> ids, Index rows_out);

// ---- composites (no VJP of their own; differentiate through the parts) --

// Numerically stable row-wise softmax; rows sum to 1.
NodePtr row_softmax(const NodePtr& x);
// Softmax over a rank-1 vector.
NodePtr softmax(const NodePtr& x);
// Row-wise log(sum(exp(.))), R x C -> R x 1, max-shifted for stability.
NodePtr logsumexp_rows(const NodePtr& x);

// Mean cross-entropy of row-wise logits against integer targets.
NodePtr cross_entropy_mean(const NodePtr& logits, const std::vector<Index>& targets);
// Cross-entropy of a single rank-1 logit vector.
NodePtr cross_entropy(const NodePtr& logits, Index target);

NodePtr mean_rows(const NodePtr& x);  // T x d -> 1 x d
NodePtr mean_pool(const NodePtr& x);  // T x d -> rank-1 d

// Rank-0 scalars stacked into a rank-1 vector.
NodePtr stack_scalars(const std::vector<NodePtr>& scalars);

struct AttentionOut {
  NodePtr output;   // T x d
  NodePtr weights;  // T x T, rows sum to 1
};

// Single-head scaled dot-product self-attention over a T x d sequence.
AttentionOut scaled_dot_attention(const NodePtr& x, const NodePtr& wq,
                                  const NodePtr& wk, const NodePtr& wv);

}  // namespace fsqa

#endif  // FSQA_OPS_HPP_
