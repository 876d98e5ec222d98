// SPDX-License-Identifier: Apache-2.0

#include "ssc/autodiff.hpp"

#include <cmath>
#include <stdexcept>

namespace ssc::ad {

const Mat& Var::value() const {
  if (!tape_) {
    throw std::logic_error("Var::value on default-constructed Var");
  }
  return tape_->val(id_);
}

const Mat& Var::grad() const {
  if (!tape_) {
    throw std::logic_error("Var::grad on default-constructed Var");
  }
  const auto& node = tape_->nodes_[static_cast<std::size_t>(id_)];
  if (node.grad.size() == 0) {
    throw std::logic_error("Var::grad before backward reached this node");
  }
  return node.grad;
}

bool Var::has_grad() const {
  if (!tape_) {
    return false;
  }
  return tape_->nodes_[static_cast<std::size_t>(id_)].grad.size() != 0;
}

Var Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

void Tape::check_same_tape(Var v) const {
  if (v.tape() != this) {
    throw std::logic_error("Var belongs to a different tape");
  }
}

Mat& Tape::grad_buffer(int id) {
  Node& n = nodes_[static_cast<std::size_t>(id)];
  if (n.grad.size() == 0) {
    const Mat& v = val(id);
    n.grad = Mat::Zero(v.rows(), v.cols());
  }
  return n.grad;
}

Var Tape::constant(Mat value) {
  Node n;
  n.op = Op::kConstant;
  n.value = std::move(value);
  n.needs_grad = false;
  return push(std::move(n));
}

Var Tape::scalar_constant(double value) {
  Mat m(1, 1);
  m(0, 0) = value;
  return constant(std::move(m));
}

Var Tape::param(const Mat& value) {
  Node n;
  n.op = Op::kParam;
  n.external = &value;
  n.needs_grad = true;
  return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
  check_same_tape(a);
  check_same_tape(b);
  if (a.value().rows() != b.value().rows() || a.value().cols() != b.value().cols()) {
    throw std::invalid_argument("add: shape mismatch");
  }
  Node n;
  n.op = Op::kAdd;
  n.a = a.id();
  n.b = b.id();
  n.needs_grad = nodes_[a.id()].needs_grad || nodes_[b.id()].needs_grad;
  n.value = val(a.id()) + val(b.id());
  return push(std::move(n));
}

Var Tape::sub(Var a, Var b) {
  check_same_tape(a);
  check_same_tape(b);
  if (a.value().rows() != b.value().rows() || a.value().cols() != b.value().cols()) {
    throw std::invalid_argument("sub: shape mismatch");
  }
  Node n;
  n.op = Op::kSub;
  n.a = a.id();
  n.b = b.id();
  n.needs_grad = nodes_[a.id()].needs_grad || nodes_[b.id()].needs_grad;
  n.value = val(a.id()) - val(b.id());
  return push(std::move(n));
}

Var Tape::mul(Var a, Var b) {
  check_same_tape(a);
  check_same_tape(b);
  if (a.value().rows() != b.value().rows() || a.value().cols() != b.value().cols()) {
    throw std::invalid_argument("mul: shape mismatch");
  }
  Node n;
  n.op = Op::kMul;
  n.a = a.id();
  n.b = b.id();
  n.needs_grad = nodes_[a.id()].needs_grad || nodes_[b.id()].needs_grad;
  n.value = val(a.id()).cwiseProduct(val(b.id()));
  return push(std::move(n));
}

Var Tape::scale(Var a, double factor) {
  check_same_tape(a);
  Node n;
  n.op = Op::kScale;
  n.a = a.id();
  n.d0 = factor;
  n.needs_grad = nodes_[a.id()].needs_grad;
  n.value = val(a.id()) * factor;
  return push(std::move(n));
}

Var Tape::matmul(Var a, Var b, bool transpose_a, bool transpose_b) {
  check_same_tape(a);
  check_same_tape(b);
  const Mat& va = val(a.id());
  const Mat& vb = val(b.id());
  Eigen::Index inner_a = transpose_a ? va.rows() : va.cols();
  Eigen::Index inner_b = transpose_b ? vb.cols() : vb.rows();
  if (inner_a != inner_b) {
    throw std::invalid_argument("matmul: inner dimension mismatch");
  }
  Node n;
  n.op = Op::kMatmul;
  n.a = a.id();
  n.b = b.id();
  n.i0 = transpose_a ? 1 : 0;
  n.i1 = transpose_b ? 1 : 0;
  n.needs_grad = nodes_[a.id()].needs_grad || nodes_[b.id()].needs_grad;
  if (!transpose_a && !transpose_b) {
    n.value.noalias() = va * vb;
  } else if (transpose_a && !transpose_b) {
    n.value.noalias() = va.transpose() * vb;
  } else if (!transpose_a && transpose_b) {
    n.value.noalias() = va * vb.transpose();
  } else {
    n.value.noalias() = va.transpose() * vb.transpose();
  }
  return push(std::move(n));
}

Var Tape::add_col_broadcast(Var m, Var u) {
  check_same_tape(m);
  check_same_tape(u);
  const Mat& vm = val(m.id());
  const Mat& vu = val(u.id());
  if (vu.cols() != 1 || vu.rows() != vm.rows()) {
    throw std::invalid_argument("add_col_broadcast: u must be (rows(m) x 1)");
  }
  Node n;
  n.op = Op::kAddColBroadcast;
  n.a = m.id();
  n.b = u.id();
  n.needs_grad = nodes_[m.id()].needs_grad || nodes_[u.id()].needs_grad;
  n.value = vm.colwise() + vu.col(0);
  return push(std::move(n));
}

Var Tape::concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) {
    throw std::invalid_argument("concat_cols: empty input");
  }
  Eigen::Index rows = val(parts[0].id()).rows();
  Eigen::Index cols = 0;
  Node n;
  n.op = Op::kConcatCols;
  for (Var p : parts) {
    check_same_tape(p);
    const Mat& v = val(p.id());
    if (v.rows() != rows) {
      throw std::invalid_argument("concat_cols: row count mismatch");
    }
    cols += v.cols();
    n.list.push_back(p.id());
    n.needs_grad = n.needs_grad || nodes_[p.id()].needs_grad;
  }
  n.value.resize(rows, cols);
  Eigen::Index at = 0;
  for (int id : n.list) {
    const Mat& v = val(id);
    n.value.middleCols(at, v.cols()) = v;
    at += v.cols();
  }
  return push(std::move(n));
}

Var Tape::concat_rows(const std::vector<Var>& parts) {
  if (parts.empty()) {
    throw std::invalid_argument("concat_rows: empty input");
  }
  Eigen::Index cols = val(parts[0].id()).cols();
  Eigen::Index rows = 0;
  Node n;
  n.op = Op::kConcatRows;
  for (Var p : parts) {
    check_same_tape(p);
    const Mat& v = val(p.id());
    if (v.cols() != cols) {
      throw std::invalid_argument("concat_rows: column count mismatch");
    }
    rows += v.rows();
    n.list.push_back(p.id());
    n.needs_grad = n.needs_grad || nodes_[p.id()].needs_grad;
  }
  n.value.resize(rows, cols);
  Eigen::Index at = 0;
  for (int id : n.list) {
    const Mat& v = val(id);
    n.value.middleRows(at, v.rows()) = v;
    at += v.rows();
  }
  return push(std::move(n));
}

Var Tape::slice_rows(Var a, int start, int len) {
  check_same_tape(a);
  const Mat& v = val(a.id());
  if (start < 0 || len < 0 || start + len > v.rows()) {
    throw std::invalid_argument("slice_rows: range out of bounds");
  }
  Node n;
  n.op = Op::kSliceRows;
  n.a = a.id();
  n.i0 = start;
  n.i1 = len;
  n.needs_grad = nodes_[a.id()].needs_grad;
  n.value = v.middleRows(start, len);
  return push(std::move(n));
}

Var Tape::pick_row_as_col(Var a, int row) {
  check_same_tape(a);
  const Mat& v = val(a.id());
  if (row < 0 || row >= v.rows()) {
    throw std::invalid_argument("pick_row_as_col: row out of bounds");
  }
  Node n;
  n.op = Op::kPickRowAsCol;
  n.a = a.id();
  n.i0 = row;
  n.needs_grad = nodes_[a.id()].needs_grad;
  n.value = v.row(row).transpose();
  return push(std::move(n));
}

Var Tape::sigmoid(Var a) {
  check_same_tape(a);
  Node n;
  n.op = Op::kSigmoid;
  n.a = a.id();
  n.needs_grad = nodes_[a.id()].needs_grad;
  n.value = val(a.id()).unaryExpr([](double x) {
    return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  });
  return push(std::move(n));
}

Var Tape::tanh(Var a) {
  check_same_tape(a);
  Node n;
  n.op = Op::kTanh;
  n.a = a.id();
  n.needs_grad = nodes_[a.id()].needs_grad;
  n.value = val(a.id()).array().tanh().matrix();
  return push(std::move(n));
}

Var Tape::softmax_col(Var a) {
  check_same_tape(a);
  const Mat& v = val(a.id());
  if (v.cols() != 1) {
    throw std::invalid_argument("softmax_col: input must be a column vector");
  }
  Node n;
  n.op = Op::kSoftmaxCol;
  n.a = a.id();
  n.needs_grad = nodes_[a.id()].needs_grad;
  double max = v.maxCoeff();
  Mat e = (v.array() - max).exp().matrix();
  n.value = e / e.sum();
  return push(std::move(n));
}

Var Tape::log_softmax_col(Var a) {
  check_same_tape(a);
  const Mat& v = val(a.id());
  if (v.cols() != 1) {
    throw std::invalid_argument("log_softmax_col: input must be a column vector");
  }
  Node n;
  n.op = Op::kLogSoftmaxCol;
  n.a = a.id();
  n.needs_grad = nodes_[a.id()].needs_grad;
  double max = v.maxCoeff();
  double lse = max + std::log((v.array() - max).exp().sum());
  n.value = v.array() - lse;
  return push(std::move(n));
}

Var Tape::pick(Var a, int index) {
  check_same_tape(a);
  const Mat& v = val(a.id());
  if (v.cols() != 1 || index < 0 || index >= v.rows()) {
    throw std::invalid_argument("pick: index out of bounds");
  }
  Node n;
  n.op = Op::kPick;
  n.a = a.id();
  n.i0 = index;
  n.needs_grad = nodes_[a.id()].needs_grad;
  n.value.resize(1, 1);
  n.value(0, 0) = v(index, 0);
  return push(std::move(n));
}

Var Tape::sum(Var a) {
  check_same_tape(a);
  Node n;
  n.op = Op::kSum;
  n.a = a.id();
  n.needs_grad = nodes_[a.id()].needs_grad;
  n.value.resize(1, 1);
  n.value(0, 0) = val(a.id()).sum();
  return push(std::move(n));
}

Var Tape::sum_squares(Var a) {
  check_same_tape(a);
  Node n;
  n.op = Op::kSumSquares;
  n.a = a.id();
  n.needs_grad = nodes_[a.id()].needs_grad;
  n.value.resize(1, 1);
  n.value(0, 0) = val(a.id()).squaredNorm();
  return push(std::move(n));
}

Var Tape::bce_with_logits_sum(Var logits, Mat targets) {
  check_same_tape(logits);
  const Mat& l = val(logits.id());
  if (l.rows() != targets.rows() || l.cols() != targets.cols()) {
    throw std::invalid_argument("bce_with_logits_sum: shape mismatch");
  }
  Node n;
  n.op = Op::kBceWithLogitsSum;
  n.a = logits.id();
  n.needs_grad = nodes_[logits.id()].needs_grad;
  n.aux = std::move(targets);
  double total = 0.0;
  for (Eigen::Index c = 0; c < l.cols(); ++c) {
    for (Eigen::Index r = 0; r < l.rows(); ++r) {
      double x = l(r, c);
      double t = n.aux(r, c);
      total += std::max(x, 0.0) - x * t + std::log1p(std::exp(-std::abs(x)));
    }
  }
  n.value.resize(1, 1);
  n.value(0, 0) = total;
  return push(std::move(n));
}

Var Tape::add_list(const std::vector<Var>& terms) {
  if (terms.empty()) {
    throw std::invalid_argument("add_list: empty input");
  }
  const Mat& first = val(terms[0].id());
  Node n;
  n.op = Op::kAddList;
  n.value = Mat::Zero(first.rows(), first.cols());
  for (Var t : terms) {
    check_same_tape(t);
    const Mat& v = val(t.id());
    if (v.rows() != first.rows() || v.cols() != first.cols()) {
      throw std::invalid_argument("add_list: shape mismatch");
    }
    n.list.push_back(t.id());
    n.needs_grad = n.needs_grad || nodes_[t.id()].needs_grad;
    n.value += v;
  }
  return push(std::move(n));
}

void Tape::backward(Var loss) {
  check_same_tape(loss);
  const Mat& lv = val(loss.id());
  if (lv.rows() != 1 || lv.cols() != 1) {
    throw std::invalid_argument("backward: loss must be scalar");
  }
  grad_buffer(loss.id())(0, 0) += 1.0;
  for (int id = loss.id(); id >= 0; --id) {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    // Nodes whose gradient was never touched are not ancestors of the loss.
    if (!n.needs_grad || n.grad.size() == 0) {
      continue;
    }
    backward_node(id);
  }
}

void Tape::backward_node(int id) {
  Node& n = nodes_[static_cast<std::size_t>(id)];
  const Mat& g = n.grad;
  auto needs = [&](int in) { return nodes_[static_cast<std::size_t>(in)].needs_grad; };
  switch (n.op) {
    case Op::kConstant:
    case Op::kParam:
      break;
    case Op::kAdd:
      if (needs(n.a)) grad_buffer(n.a) += g;
      if (needs(n.b)) grad_buffer(n.b) += g;
      break;
    case Op::kSub:
      if (needs(n.a)) grad_buffer(n.a) += g;
      if (needs(n.b)) grad_buffer(n.b) -= g;
      break;
    case Op::kMul:
      if (needs(n.a)) grad_buffer(n.a) += g.cwiseProduct(val(n.b));
      if (needs(n.b)) grad_buffer(n.b) += g.cwiseProduct(val(n.a));
      break;
    case Op::kScale:
      if (needs(n.a)) grad_buffer(n.a) += g * n.d0;
      break;
    case Op::kMatmul: {
      const Mat& a = val(n.a);
      const Mat& b = val(n.b);
      bool ta = n.i0 != 0;
      bool tb = n.i1 != 0;
      if (!ta && !tb) {
        if (needs(n.a)) grad_buffer(n.a).noalias() += g * b.transpose();
        if (needs(n.b)) grad_buffer(n.b).noalias() += a.transpose() * g;
      } else if (ta && !tb) {
        if (needs(n.a)) grad_buffer(n.a).noalias() += b * g.transpose();
        if (needs(n.b)) grad_buffer(n.b).noalias() += a * g;
      } else if (!ta && tb) {
        if (needs(n.a)) grad_buffer(n.a).noalias() += g * b;
        if (needs(n.b)) grad_buffer(n.b).noalias() += g.transpose() * a;
      } else {
        if (needs(n.a)) grad_buffer(n.a).noalias() += b.transpose() * g.transpose();
        if (needs(n.b)) grad_buffer(n.b).noalias() += g.transpose() * a.transpose();
      }
      break;
    }
    case Op::kAddColBroadcast:
      if (needs(n.a)) grad_buffer(n.a) += g;
      if (needs(n.b)) grad_buffer(n.b) += g.rowwise().sum();
      break;
    case Op::kConcatCols: {
      Eigen::Index at = 0;
      for (int in : n.list) {
        Eigen::Index c = val(in).cols();
        if (needs(in)) grad_buffer(in) += g.middleCols(at, c);
        at += c;
      }
      break;
    }
    case Op::kConcatRows: {
      Eigen::Index at = 0;
      for (int in : n.list) {
        Eigen::Index r = val(in).rows();
        if (needs(in)) grad_buffer(in) += g.middleRows(at, r);
        at += r;
      }
      break;
    }
    case Op::kSliceRows:
      if (needs(n.a)) grad_buffer(n.a).middleRows(n.i0, n.i1) += g;
      break;
    case Op::kPickRowAsCol:
      if (needs(n.a)) grad_buffer(n.a).row(n.i0) += g.transpose();
      break;
    case Op::kSigmoid:
      if (needs(n.a)) {
        grad_buffer(n.a) += g.cwiseProduct(
            n.value.cwiseProduct((1.0 - n.value.array()).matrix()));
      }
      break;
    case Op::kTanh:
      if (needs(n.a)) {
        grad_buffer(n.a) += g.cwiseProduct((1.0 - n.value.array().square()).matrix());
      }
      break;
    case Op::kSoftmaxCol:
      if (needs(n.a)) {
        double dot = (n.value.array() * g.array()).sum();
        grad_buffer(n.a) += n.value.cwiseProduct((g.array() - dot).matrix());
      }
      break;
    case Op::kLogSoftmaxCol:
      if (needs(n.a)) {
        double gsum = g.sum();
        grad_buffer(n.a) += g - n.value.array().exp().matrix() * gsum;
      }
      break;
    case Op::kPick:
      if (needs(n.a)) grad_buffer(n.a)(n.i0, 0) += g(0, 0);
      break;
    case Op::kSum:
      if (needs(n.a)) {
        grad_buffer(n.a).array() += g(0, 0);
      }
      break;
    case Op::kSumSquares:
      if (needs(n.a)) grad_buffer(n.a) += 2.0 * g(0, 0) * val(n.a);
      break;
    case Op::kBceWithLogitsSum:
      if (needs(n.a)) {
        const Mat& l = val(n.a);
        Mat sig = l.unaryExpr([](double x) {
          return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
        });
        grad_buffer(n.a) += g(0, 0) * (sig - n.aux);
      }
      break;
    case Op::kAddList:
      for (int in : n.list) {
        if (needs(in)) grad_buffer(in) += g;
      }
      break;
  }
}

void Tape::reset() { nodes_.clear(); }

}  // namespace ssc::ad
