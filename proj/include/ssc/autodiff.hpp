// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "ssc/types.hpp"

namespace ssc::ad {

class Tape;

// Handle to a tape node. Valid while the owning tape lives and has not been
// reset. Copying is cheap; the matrix data stays on the tape.
class Var {
 public:
  Var() = default;

  const Mat& value() const;
  const Mat& grad() const;
  // True once backward has accumulated into this node.
  bool has_grad() const;
  double scalar() const { return value()(0, 0); }
  int rows() const { return static_cast<int>(value().rows()); }
  int cols() const { return static_cast<int>(value().cols()); }
  int id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }
  Tape* tape() const { return tape_; }

 private:
  friend class Tape;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  int id_ = -1;
};

// Eager reverse-mode tape. Node values are computed at construction; calling
// backward() on a scalar node accumulates gradients into every parameter leaf
// that is an ancestor of it. Creation order is a valid topological order, so
// the backward sweep is a single reverse pass.
//
// A tape is single-threaded; concurrent forward passes each use their own
// tape over shared (const) parameter matrices.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Leaf without gradient. The matrix is copied onto the tape.
  Var constant(Mat value);
  Var scalar_constant(double value);
  // Leaf with gradient; `value` must outlive the tape's use of it.
  Var param(const Mat& value);

  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);  // elementwise
  Var scale(Var a, double factor);
  Var matmul(Var a, Var b, bool transpose_a = false, bool transpose_b = false);
  // m (r x c) plus u (r x 1) broadcast across columns.
  Var add_col_broadcast(Var m, Var u);
  Var concat_cols(const std::vector<Var>& parts);
  Var concat_rows(const std::vector<Var>& parts);
  Var slice_rows(Var a, int start, int len);
  // Row `row` of a, returned as a column vector.
  Var pick_row_as_col(Var a, int row);
  Var sigmoid(Var a);
  Var tanh(Var a);
  // Column-vector softmax / log-softmax (input n x 1), max-shifted.
  Var softmax_col(Var a);
  Var log_softmax_col(Var a);
  // Entry `index` of a column vector as a 1x1 node.
  Var pick(Var a, int index);
  Var sum(Var a);
  Var sum_squares(Var a);
  // Sum over entries of max(l,0) - l*t + log(1+exp(-|l|)), the numerically
  // stable form of the binary cross-entropy between sigmoid(l) and t.
  Var bce_with_logits_sum(Var logits, Mat targets);
  Var add_list(const std::vector<Var>& terms);

  // Seeds d(loss)/d(loss) = 1 and sweeps the tape in reverse creation order.
  // `loss` must be 1x1. May be called once per tape use.
  void backward(Var loss);

  // Drops all nodes; previously issued Vars become invalid.
  void reset();

  std::size_t size() const { return nodes_.size(); }

 private:
  friend class Var;

  enum class Op : std::uint8_t {
    kConstant,
    kParam,
    kAdd,
    kSub,
    kMul,
    kScale,
    kMatmul,
    kAddColBroadcast,
    kConcatCols,
    kConcatRows,
    kSliceRows,
    kPickRowAsCol,
    kSigmoid,
    kTanh,
    kSoftmaxCol,
    kLogSoftmaxCol,
    kPick,
    kSum,
    kSumSquares,
    kBceWithLogitsSum,
    kAddList,
  };

  struct Node {
    Op op;
    int a = -1;
    int b = -1;
    int i0 = 0;
    int i1 = 0;
    double d0 = 0.0;
    bool needs_grad = false;
    const Mat* external = nullptr;  // kParam value
    std::vector<int> list;          // kConcatCols/kConcatRows/kAddList inputs
    Mat value;                      // unused for kParam
    Mat aux;                        // kBceWithLogitsSum targets
    Mat grad;                       // lazily sized during backward
  };

  const Mat& val(int id) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    return n.op == Op::kParam ? *n.external : n.value;
  }
  Mat& grad_buffer(int id);
  Var push(Node node);
  void check_same_tape(Var v) const;
  void backward_node(int id);

  std::vector<Node> nodes_;
};

}  // namespace ssc::ad
