// Copyright 2026 The ssagen Authors.
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

#ifndef SSA_AUTODIFF_HPP_
#define SSA_AUTODIFF_HPP_

// Reverse-mode automatic differentiation over dense double matrices.
//
// A Graph records each operation eagerly: values are computed immediately
// and, when recording, a closure that propagates the output gradient to the
// inputs is stored. Backward() runs the closures in reverse creation order
// and accumulates parameter gradients into a ParameterSet.

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ssa::ad {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// A named trainable tensor with its gradient buffer.
struct Tensor {
  std::string name;
  Matrix value;
  Matrix grad;
  int id = -1;
};

// Owns tensors with stable addresses and dense ids.
class ParameterSet {
 public:
  ParameterSet() = default;
  ParameterSet(const ParameterSet& other);
  ParameterSet& operator=(const ParameterSet& other);
  ParameterSet(ParameterSet&&) = default;
  ParameterSet& operator=(ParameterSet&&) = default;

  Tensor& Add(std::string name, int rows, int cols);

  int size() const { return static_cast<int>(tensors_.size()); }
  Tensor& at(int id) { return *tensors_[id]; }
  const Tensor& at(int id) const { return *tensors_[id]; }
  Tensor* Find(const std::string& name);
  const Tensor* Find(const std::string& name) const;

  void ZeroGrad();
  int64_t NumScalars() const;
  bool AllFinite() const;

  auto begin() { return tensors_.begin(); }
  auto end() { return tensors_.end(); }
  auto begin() const { return tensors_.cbegin(); }
  auto end() const { return tensors_.cend(); }

 private:
  std::vector<std::unique_ptr<Tensor>> tensors_;
};

struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

struct RowRef {
  const Tensor* table;
  int row;
};

class Graph {
 public:
  explicit Graph(bool record = true) : record_(record) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  bool recording() const { return record_; }

  Var Constant(Matrix value);
  Var Param(const Tensor& tensor);
  // Row i of the result is row refs[i].row of refs[i].table.
  Var GatherRows(std::span<const RowRef> refs);
  Var Gather(const Tensor& table, std::span<const int> rows);

  Var MatMul(Var a, Var b);
  Var MatMulTransB(Var a, Var b);
  Var Add(Var a, Var b);
  Var AddRowBroadcast(Var a, Var row);
  Var Scale(Var a, double s);
  Var Gelu(Var a);
  Var LayerNorm(Var x, Var gain, Var bias, double eps = 1e-5);
  // Scaled dot-product attention split over `heads` column blocks. With
  // `causal`, query i only sees keys 0..i.
  Var Attention(Var q, Var k, Var v, int heads, bool causal);
  // alpha * a + (1 - alpha) * b with alpha a 1x1 node.
  Var ScalarMix(Var alpha, Var a, Var b);
  Var ConcatRows(Var a, Var b);
  Var Dropout(Var a, double rate, std::mt19937_64* rng);
  // Sum over rows of -log softmax(logits.row(r))[targets[r]].
  Var SoftmaxCrossEntropy(Var logits, std::span<const int> targets);

  const Matrix& value(Var v) const;
  double scalar(Var v) const { return value(v)(0, 0); }

  // Seeds d(loss)/d(loss) = 1 and accumulates into params' grad buffers.
  void Backward(Var loss, ParameterSet* params);

  int num_nodes() const { return static_cast<int>(nodes_.size()); }

 private:
  struct Node {
    Matrix value;
    const Matrix* external = nullptr;
    Matrix grad;
    int tensor_id = -1;
    std::function<void(Graph&, const Matrix&)> backward;
  };

  Var Push(Matrix value, std::function<void(Graph&, const Matrix&)> backward);
  Matrix& GradOf(int id);
  void Accumulate(int id, const Matrix& g);
  const Matrix& ValueOf(int id) const;

  bool record_;
  std::vector<Node> nodes_;
  ParameterSet* sink_ = nullptr;
};

}  // namespace ssa::ad

#endif  // SSA_AUTODIFF_HPP_
