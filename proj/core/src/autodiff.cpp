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

#include "ssa/autodiff.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace ssa::ad {
namespace {

constexpr double kGeluC = 0.7978845608028654;  // sqrt(2 / pi)

void CheckSameShape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
  }
}

}  // namespace

ParameterSet::ParameterSet(const ParameterSet& other) {
  tensors_.reserve(other.tensors_.size());
  for (const auto& t : other.tensors_) {
    tensors_.push_back(std::make_unique<Tensor>(*t));
  }
}

ParameterSet& ParameterSet::operator=(const ParameterSet& other) {
  if (this != &other) {
    ParameterSet copy(other);
    *this = std::move(copy);
  }
  return *this;
}

Tensor& ParameterSet::Add(std::string name, int rows, int cols) {
  auto t = std::make_unique<Tensor>();
  t->name = std::move(name);
  t->value = Matrix::Zero(rows, cols);
  t->grad = Matrix::Zero(rows, cols);
  t->id = static_cast<int>(tensors_.size());
  tensors_.push_back(std::move(t));
  return *tensors_.back();
}

Tensor* ParameterSet::Find(const std::string& name) {
  for (auto& t : tensors_) {
    if (t->name == name) return t.get();
  }
  return nullptr;
}

const Tensor* ParameterSet::Find(const std::string& name) const {
  for (const auto& t : tensors_) {
    if (t->name == name) return t.get();
  }
  return nullptr;
}

void ParameterSet::ZeroGrad() {
  for (auto& t : tensors_) t->grad.setZero(t->value.rows(), t->value.cols());
}

int64_t ParameterSet::NumScalars() const {
  int64_t n = 0;
  for (const auto& t : tensors_) n += t->value.size();
  return n;
}

bool ParameterSet::AllFinite() const {
  for (const auto& t : tensors_) {
    if (!t->value.allFinite()) return false;
  }
  return true;
}

Var Graph::Push(Matrix value,
                std::function<void(Graph&, const Matrix&)> backward) {
  Node node;
  node.value = std::move(value);
  if (record_) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

const Matrix& Graph::ValueOf(int id) const {
  const Node& n = nodes_[id];
  return n.external ? *n.external : n.value;
}

const Matrix& Graph::value(Var v) const { return ValueOf(v.id); }

Matrix& Graph::GradOf(int id) {
  Node& n = nodes_[id];
  if (n.grad.size() == 0) {
    const Matrix& v = ValueOf(id);
    n.grad = Matrix::Zero(v.rows(), v.cols());
  }
  return n.grad;
}

void Graph::Accumulate(int id, const Matrix& g) { GradOf(id) += g; }

Var Graph::Constant(Matrix value) { return Push(std::move(value), nullptr); }

Var Graph::Param(const Tensor& tensor) {
  Node node;
  node.external = &tensor.value;
  node.tensor_id = tensor.id;
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Graph::GatherRows(std::span<const RowRef> refs) {
  if (refs.empty()) throw std::invalid_argument("GatherRows: no rows");
  const auto cols = refs.front().table->value.cols();
  Matrix out(static_cast<Eigen::Index>(refs.size()), cols);
  for (size_t r = 0; r < refs.size(); ++r) {
    const Matrix& table = refs[r].table->value;
    if (table.cols() != cols || refs[r].row < 0 ||
        refs[r].row >= table.rows()) {
      throw std::out_of_range("GatherRows: bad row reference");
    }
    out.row(static_cast<Eigen::Index>(r)) = table.row(refs[r].row);
  }
  std::vector<RowRef> saved;
  if (record_) saved.assign(refs.begin(), refs.end());
  return Push(std::move(out), [saved = std::move(saved)](Graph& g,
                                                         const Matrix& grad) {
    for (size_t r = 0; r < saved.size(); ++r) {
      g.sink_->at(saved[r].table->id).grad.row(saved[r].row) +=
          grad.row(static_cast<Eigen::Index>(r));
    }
  });
}

Var Graph::Gather(const Tensor& table, std::span<const int> rows) {
  std::vector<RowRef> refs;
  refs.reserve(rows.size());
  for (int r : rows) refs.push_back({&table, r});
  return GatherRows(refs);
}

Var Graph::MatMul(Var a, Var b) {
  if (value(a).cols() != value(b).rows()) {
    throw std::invalid_argument("MatMul: inner dimensions differ");
  }
  Matrix out = value(a) * value(b);
  return Push(std::move(out), [a, b](Graph& g, const Matrix& grad) {
    g.Accumulate(a.id, grad * g.ValueOf(b.id).transpose());
    g.Accumulate(b.id, g.ValueOf(a.id).transpose() * grad);
  });
}

Var Graph::MatMulTransB(Var a, Var b) {
  if (value(a).cols() != value(b).cols()) {
    throw std::invalid_argument("MatMulTransB: inner dimensions differ");
  }
  Matrix out = value(a) * value(b).transpose();
  return Push(std::move(out), [a, b](Graph& g, const Matrix& grad) {
    g.Accumulate(a.id, grad * g.ValueOf(b.id));
    g.Accumulate(b.id, grad.transpose() * g.ValueOf(a.id));
  });
}

Var Graph::Add(Var a, Var b) {
  CheckSameShape(value(a), value(b), "Add");
  Matrix out = value(a) + value(b);
  return Push(std::move(out), [a, b](Graph& g, const Matrix& grad) {
    g.Accumulate(a.id, grad);
    g.Accumulate(b.id, grad);
  });
}

Var Graph::AddRowBroadcast(Var a, Var row) {
  if (value(row).rows() != 1 || value(row).cols() != value(a).cols()) {
    throw std::invalid_argument("AddRowBroadcast: bad bias shape");
  }
  Matrix out = value(a).rowwise() + value(row).row(0);
  return Push(std::move(out), [a, row](Graph& g, const Matrix& grad) {
    g.Accumulate(a.id, grad);
    g.Accumulate(row.id, grad.colwise().sum());
  });
}

Var Graph::Scale(Var a, double s) {
  Matrix out = value(a) * s;
  return Push(std::move(out), [a, s](Graph& g, const Matrix& grad) {
    g.Accumulate(a.id, grad * s);
  });
}

Var Graph::Gelu(Var a) {
  const Matrix& x = value(a);
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = x.data()[i];
    out.data()[i] =
        0.5 * v * (1.0 + std::tanh(kGeluC * (v + 0.044715 * v * v * v)));
  }
  return Push(std::move(out), [a](Graph& g, const Matrix& grad) {
    const Matrix& xv = g.ValueOf(a.id);
    Matrix dx(xv.rows(), xv.cols());
    for (Eigen::Index i = 0; i < xv.size(); ++i) {
      const double v = xv.data()[i];
      const double u = kGeluC * (v + 0.044715 * v * v * v);
      const double th = std::tanh(u);
      const double du = kGeluC * (1.0 + 3.0 * 0.044715 * v * v);
      dx.data()[i] = grad.data()[i] *
                     (0.5 * (1.0 + th) + 0.5 * v * (1.0 - th * th) * du);
    }
    g.Accumulate(a.id, dx);
  });
}

Var Graph::LayerNorm(Var x, Var gain, Var bias, double eps) {
  const Matrix& xv = value(x);
  const Eigen::Index d = xv.cols();
  if (value(gain).cols() != d || value(bias).cols() != d) {
    throw std::invalid_argument("LayerNorm: bad gain/bias shape");
  }
  Matrix xhat(xv.rows(), d);
  Vector inv_std(xv.rows());
  for (Eigen::Index r = 0; r < xv.rows(); ++r) {
    const double mu = xv.row(r).mean();
    const double var = (xv.row(r).array() - mu).square().mean();
    inv_std(r) = 1.0 / std::sqrt(var + eps);
    xhat.row(r) = (xv.row(r).array() - mu) * inv_std(r);
  }
  Matrix out = (xhat.array().rowwise() * value(gain).row(0).array())
                   .rowwise() +
               value(bias).row(0).array();
  return Push(std::move(out), [x, gain, bias, xhat = std::move(xhat),
                               inv_std = std::move(inv_std)](
                                  Graph& g, const Matrix& grad) {
    const auto& gv = g.ValueOf(gain.id);
    g.Accumulate(bias.id, grad.colwise().sum());
    g.Accumulate(gain.id, (grad.array() * xhat.array()).colwise().sum());
    const Matrix dxhat = grad.array().rowwise() * gv.row(0).array();
    Matrix dx(dxhat.rows(), dxhat.cols());
    for (Eigen::Index r = 0; r < dxhat.rows(); ++r) {
      const double m1 = dxhat.row(r).mean();
      const double m2 = (dxhat.row(r).array() * xhat.row(r).array()).mean();
      dx.row(r) = inv_std(r) *
                  (dxhat.row(r).array() - m1 - xhat.row(r).array() * m2);
    }
    g.Accumulate(x.id, dx);
  });
}

Var Graph::Attention(Var q, Var k, Var v, int heads, bool causal) {
  const Matrix& qv = value(q);
  const Matrix& kv = value(k);
  const Matrix& vv = value(v);
  const Eigen::Index d = qv.cols();
  if (heads < 1 || d % heads != 0 || kv.cols() != d || vv.cols() != d ||
      kv.rows() != vv.rows()) {
    throw std::invalid_argument("Attention: bad shapes");
  }
  const Eigen::Index dh = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  const Eigen::Index m = qv.rows();
  const Eigen::Index n = kv.rows();
  if (causal && n < m) throw std::invalid_argument("Attention: causal m > n");

  std::vector<Matrix> probs(heads);
  Matrix out(m, d);
  for (int h = 0; h < heads; ++h) {
    Matrix s = qv.middleCols(h * dh, dh) * kv.middleCols(h * dh, dh).transpose();
    s *= scale;
    for (Eigen::Index i = 0; i < m; ++i) {
      const Eigen::Index visible = causal ? i + 1 : n;
      const double mx = s.row(i).head(visible).maxCoeff();
      double z = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        const double e = j < visible ? std::exp(s(i, j) - mx) : 0.0;
        s(i, j) = e;
        z += e;
      }
      s.row(i) /= z;
    }
    out.middleCols(h * dh, dh) = s * vv.middleCols(h * dh, dh);
    probs[h] = std::move(s);
  }
  return Push(std::move(out), [q, k, v, heads, dh, scale,
                               probs = std::move(probs)](Graph& g,
                                                         const Matrix& grad) {
    const Matrix& qv = g.ValueOf(q.id);
    const Matrix& kv = g.ValueOf(k.id);
    const Matrix& vv = g.ValueOf(v.id);
    Matrix dq = Matrix::Zero(qv.rows(), qv.cols());
    Matrix dk = Matrix::Zero(kv.rows(), kv.cols());
    Matrix dv = Matrix::Zero(vv.rows(), vv.cols());
    for (int h = 0; h < heads; ++h) {
      const Matrix& p = probs[h];
      const auto go = grad.middleCols(h * dh, dh);
      dv.middleCols(h * dh, dh) = p.transpose() * go;
      const Matrix dp = go * vv.middleCols(h * dh, dh).transpose();
      const Vector row_dot = (dp.array() * p.array()).rowwise().sum();
      const Matrix ds =
          (p.array() * (dp.array().colwise() - row_dot.array())) * scale;
      dq.middleCols(h * dh, dh) = ds * kv.middleCols(h * dh, dh);
      dk.middleCols(h * dh, dh) = ds.transpose() * qv.middleCols(h * dh, dh);
    }
    g.Accumulate(q.id, dq);
    g.Accumulate(k.id, dk);
    g.Accumulate(v.id, dv);
  });
}

Var Graph::ScalarMix(Var alpha, Var a, Var b) {
  CheckSameShape(value(a), value(b), "ScalarMix");
  const double al = scalar(alpha);
  Matrix out = al * value(a) + (1.0 - al) * value(b);
  return Push(std::move(out), [alpha, a, b](Graph& g, const Matrix& grad) {
    const double al = g.ValueOf(alpha.id)(0, 0);
    const Matrix diff = g.ValueOf(a.id) - g.ValueOf(b.id);
    Matrix da(1, 1);
    da(0, 0) = (grad.array() * diff.array()).sum();
    g.Accumulate(alpha.id, da);
    g.Accumulate(a.id, grad * al);
    g.Accumulate(b.id, grad * (1.0 - al));
  });
}

Var Graph::ConcatRows(Var a, Var b) {
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (av.cols() != bv.cols()) {
    throw std::invalid_argument("ConcatRows: column counts differ");
  }
  Matrix out(av.rows() + bv.rows(), av.cols());
  out << av, bv;
  const Eigen::Index ra = av.rows();
  return Push(std::move(out), [a, b, ra](Graph& g, const Matrix& grad) {
    g.Accumulate(a.id, grad.topRows(ra));
    g.Accumulate(b.id, grad.bottomRows(grad.rows() - ra));
  });
}

Var Graph::Dropout(Var a, double rate, std::mt19937_64* rng) {
  if (rate <= 0.0 || rng == nullptr) return a;
  const Matrix& x = value(a);
  Matrix mask(x.rows(), x.cols());
  const double keep_scale = 1.0 / (1.0 - rate);
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    // 53 random bits mapped to [0, 1).
    const double u = static_cast<double>((*rng)() >> 11) * 0x1.0p-53;
    mask.data()[i] = u < rate ? 0.0 : keep_scale;
  }
  Matrix out = x.cwiseProduct(mask);
  return Push(std::move(out), [a, mask = std::move(mask)](Graph& g,
                                                          const Matrix& grad) {
    g.Accumulate(a.id, grad.cwiseProduct(mask));
  });
}

Var Graph::SoftmaxCrossEntropy(Var logits, std::span<const int> targets) {
  const Matrix& z = value(logits);
  if (static_cast<Eigen::Index>(targets.size()) != z.rows()) {
    throw std::invalid_argument("SoftmaxCrossEntropy: target count");
  }
  Matrix probs(z.rows(), z.cols());
  double loss = 0.0;
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    const int t = targets[r];
    if (t < 0 || t >= z.cols()) {
      throw std::out_of_range("SoftmaxCrossEntropy: target out of range");
    }
    const double mx = z.row(r).maxCoeff();
    probs.row(r) = (z.row(r).array() - mx).exp();
    const double sum = probs.row(r).sum();
    probs.row(r) /= sum;
    loss += std::log(sum) + mx - z(r, t);
  }
  Matrix out(1, 1);
  out(0, 0) = loss;
  std::vector<int> saved;
  if (record_) saved.assign(targets.begin(), targets.end());
  return Push(std::move(out), [logits, probs = std::move(probs),
                               saved = std::move(saved)](Graph& g,
                                                         const Matrix& grad) {
    Matrix d = probs;
    for (size_t r = 0; r < saved.size(); ++r) d(r, saved[r]) -= 1.0;
    g.Accumulate(logits.id, d * grad(0, 0));
  });
}

void Graph::Backward(Var loss, ParameterSet* params) {
  if (!record_) throw std::logic_error("Backward on a non-recording graph");
  if (value(loss).size() != 1) {
    throw std::invalid_argument("Backward: loss must be a scalar");
  }
  sink_ = params;
  for (Node& n : nodes_) n.grad.resize(0, 0);
  GradOf(loss.id).setConstant(1.0);
  for (int i = loss.id; i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.grad.size() == 0) continue;
    if (n.tensor_id >= 0) {
      params->at(n.tensor_id).grad += n.grad;
    } else if (n.backward) {
      n.backward(*this, n.grad);
    }
  }
  sink_ = nullptr;
}

}  // namespace ssa::ad
