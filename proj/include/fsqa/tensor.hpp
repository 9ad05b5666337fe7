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

#ifndef FSQA_TENSOR_HPP_
#define FSQA_TENSOR_HPP_

#include <Eigen/Core>

#include <initializer_list>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsqa {

using Index = Eigen::Index;
using Shape = std::vector<Index>;

struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string shape_to_string(const Shape& s) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << "]";
  return os.str();
}

// Dense tensor of rank 0..2, row-major, backed by a flat Eigen array.
// Scalar defaults to double throughout the project; float instantiations
// are available where precision can be traded for speed.
template <typename Scalar>
class TensorT {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  using RowMatrix =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using MatrixMap = Eigen::Map<RowMatrix>;
  using ConstMatrixMap = Eigen::Map<const RowMatrix>;

  TensorT() : shape_{}, data_(1) { data_[0] = Scalar(0); }

  explicit TensorT(Shape shape) : shape_(std::move(shape)) {
    check_rank(shape_);
    data_ = Array::Zero(count(shape_));
  }

  static TensorT zeros(Shape shape) { return TensorT(std::move(shape)); }

  static TensorT full(Shape shape, Scalar v) {
    TensorT t(std::move(shape));
    t.data_.setConstant(v);
    return t;
  }

  static TensorT scalar(Scalar v) {
    TensorT t;
    t.data_[0] = v;
    return t;
  }

  static TensorT vector(std::initializer_list<Scalar> v) {
    TensorT t(Shape{static_cast<Index>(v.size())});
    Index i = 0;
    for (Scalar x : v) t.data_[i++] = x;
    return t;
  }

  static TensorT vector(const std::vector<Scalar>& v) {
    TensorT t(Shape{static_cast<Index>(v.size())});
    for (Index i = 0; i < t.numel(); ++i) t.data_[i] = v[i];
    return t;
  }

  static TensorT matrix(std::initializer_list<std::initializer_list<Scalar>> m) {
    const Index rows = static_cast<Index>(m.size());
    const Index cols = rows ? static_cast<Index>(m.begin()->size()) : 0;
    TensorT t(Shape{rows, cols});
    Index i = 0;
    for (const auto& row : m) {
      if (static_cast<Index>(row.size()) != cols)
        throw ShapeError("TensorT::matrix: ragged rows");
      for (Scalar x : row) t.data_[i++] = x;
    }
    return t;
  }

  const Shape& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  Index numel() const { return data_.size(); }

  Index rows() const {
    if (rank() != 2) throw ShapeError("rows(): tensor is not rank 2");
    return shape_[0];
  }
  Index cols() const {
    if (rank() != 2) throw ShapeError("cols(): tensor is not rank 2");
    return shape_[1];
  }
  Index dim(int i) const { return shape_.at(static_cast<std::size_t>(i)); }

  Scalar& operator[](Index i) { return data_[i]; }
  Scalar operator[](Index i) const { return data_[i]; }

  Scalar& at(Index r, Index c) {
    if (rank() != 2) throw ShapeError("at(r,c): tensor is not rank 2");
    return data_[r * shape_[1] + c];
  }
  Scalar at(Index r, Index c) const {
    return const_cast<TensorT*>(this)->at(r, c);
  }

  // Value of a one-element tensor of any rank.
  Scalar item() const {
    if (numel() != 1) throw ShapeError("item(): tensor has more than one element");
    return data_[0];
  }

  Array& array() { return data_; }
  const Array& array() const { return data_; }

  // Rank-2 view; shares storage.
  MatrixMap mat() {
    if (rank() != 2) throw ShapeError("mat(): tensor is not rank 2");
    return MatrixMap(data_.data(), shape_[0], shape_[1]);
  }
  ConstMatrixMap mat() const {
    if (rank() != 2) throw ShapeError("mat(): tensor is not rank 2");
    return ConstMatrixMap(data_.data(), shape_[0], shape_[1]);
  }

  bool same_shape(const TensorT& o) const { return shape_ == o.shape_; }

  bool all_finite() const { return data_.isFinite().all(); }

  void throw_if_not_finite(const char* context) const {
    if (!all_finite())
      throw NumericError(std::string("non-finite value in ") + context);
  }

  TensorT reshaped(Shape shape) const {
    check_rank(shape);
    if (count(shape) != numel())
      throw ShapeError("reshaped: element count mismatch " +
                       shape_to_string(shape_) + " -> " + shape_to_string(shape));
    TensorT t = *this;
    t.shape_ = std::move(shape);
    return t;
  }

  friend bool operator==(const TensorT& a, const TensorT& b) {
    return a.shape_ == b.shape_ && (a.data_ == b.data_).all();
  }

  static Index count(const Shape& s) {
    Index n = 1;
    for (Index d : s) {
      if (d < 0) throw ShapeError("negative dimension");
      n *= d;
    }
    return n;
  }

 private:
  static void check_rank(const Shape& s) {
    if (s.size() > 2) throw ShapeError("tensors of rank > 2 are not supported");
  }

  Shape shape_;
  Array data_;
};

using Tensor = TensorT<double>;

}  // namespace fsqa

#endif  // FSQA_TENSOR_HPP_
