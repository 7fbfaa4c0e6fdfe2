// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Reverse-mode automatic differentiation over dense double-precision arrays.
// Graphs are built functionally: every operation returns a new Tensor whose
// node holds the forward value and a closure that scatters gradients to its
// parents. Operations on inputs that do not require gradients produce
// detached constant nodes, so frozen-parameter inference never grows a graph.
//
// A graph and its tensors are confined to one thread. Constant/leaf nodes may
// be shared read-only across threads; concurrent backward passes must use
// backward_into() with per-thread gradient sinks.
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace maskaid::ad {

using Shape = std::vector<int64_t>;

int64_t numel_of(const Shape& s);
std::string shape_str(const Shape& s);

namespace detail {

struct Node {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;  // allocated lazily during backward
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  // Reads this node's grad and accumulates local-gradient contributions into
  // the parents (or into the active gradient sink for leaf parameters).
  std::function<void(Node&)> backprop;

  bool is_leaf() const { return parents.empty(); }
  void ensure_grad() {
    if (grad.size() != value.size()) grad.assign(value.size(), 0.0);
  }
};

}  // namespace detail

class Tensor {
 public:
  Tensor() = default;

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const;
  int64_t numel() const;
  int64_t dim(int i) const;
  int rank() const;
  const std::vector<double>& values() const;
  double scalar_value() const;  // requires numel() == 1
  bool requires_grad() const;

  // Gradient of the most recent backward pass(es). Throws StateError when no
  // gradient has been accumulated.
  const std::vector<double>& grad() const;
  bool has_grad() const;
  void zero_grad();

  // Overwrites the values of a leaf tensor in place (optimizer updates).
  void leaf_assign(const std::vector<double>& values);

  detail::Node* node() const { return node_.get(); }
  std::shared_ptr<detail::Node> node_ptr() const { return node_; }

  static Tensor wrap(std::shared_ptr<detail::Node> n);

 private:
  std::shared_ptr<detail::Node> node_;
};

// ---- creation --------------------------------------------------------------

Tensor constant(Shape shape, std::vector<double> values);
Tensor constant_scalar(double v);
Tensor zeros(Shape shape);
Tensor full(Shape shape, double v);
Tensor parameter(Shape shape, std::vector<double> values);  // grad-tracked leaf

// Hook for modules that define their own differentiable operations (iSTFT).
// The backprop closure receives the result node; parents are retained by it.
Tensor make_op(Shape out_shape, std::vector<double> out_values,
               std::vector<Tensor> parents,
               std::function<void(detail::Node&)> backprop);

// Gradient accumulation helper for custom backprop closures: adds `contrib`
// into `parent`'s gradient (respecting the active per-thread sink, if any).
void accumulate_grad(detail::Node* parent, const std::vector<double>& contrib);

// ---- elementwise -----------------------------------------------------------

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor div(const Tensor& a, const Tensor& b);  // throws DomainError on b == 0
Tensor minimum(const Tensor& a, const Tensor& b);  // ties route grad to a

Tensor neg(const Tensor& a);
Tensor abs(const Tensor& a);                       // subgradient 0 at x == 0
Tensor abs_floored(const Tensor& a, double eps);   // max(|x|, eps)
Tensor log(const Tensor& a);    // throws DomainError on non-positive input
Tensor log1p(const Tensor& a);
Tensor exp(const Tensor& a);
Tensor sqrt(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor sin(const Tensor& a);
Tensor cos(const Tensor& a);
Tensor pow_scalar(const Tensor& a, double p);
Tensor max_scalar(const Tensor& a, double c);  // ties take the constant branch
Tensor relu(const Tensor& a);                  // max_scalar(a, 0)
Tensor add_scalar(const Tensor& a, double c);
Tensor mul_scalar(const Tensor& a, double c);

// ---- shape -----------------------------------------------------------------

Tensor broadcast_to(const Tensor& a, const Shape& shape);
Tensor slice_rows(const Tensor& a, int64_t r0, int64_t r1);
Tensor stack_rows(const std::vector<Tensor>& rows);  // N x [M] -> [N, M]

// ---- linear algebra / signal -----------------------------------------------

Tensor matmul(const Tensor& a, const Tensor& b);  // [m,k] x [k,n]

// Causal same-length FIR convolution with zero padding:
// out[t] = sum_k kernel[k] * signal[t-k]. Differentiable in both arguments.
Tensor fir_convolve(const Tensor& signal, const Tensor& kernel);

// ---- reductions ------------------------------------------------------------

Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);
Tensor max_all(const Tensor& a);  // grad to the first element attaining max
Tensor l2norm(const Tensor& a);
Tensor sum_axis(const Tensor& a, int axis);

// ---- backward --------------------------------------------------------------

// Reverse pass from a scalar loss. Leaf gradients accumulate across calls;
// intermediate gradients are reset at the start of each pass.
void backward(const Tensor& loss);

// As backward(), but leaf gradients are written into `sink` (keyed by node)
// instead of the shared leaf grad buffers. Safe for concurrent use on graphs
// that share leaf/constant nodes.
using GradSink = std::unordered_map<const detail::Node*, std::vector<double>>;
void backward_into(const Tensor& loss, GradSink& sink);

// Leaf registry. A tape owns the trainable parameters of one training
// context; operation records live on the graph itself.
class Tape {
 public:
  Tensor parameter(Shape shape, std::vector<double> values);
  void add_parameter(const Tensor& t);
  const std::vector<Tensor>& parameters() const { return params_; }
  void zero_grad();
  void backward(const Tensor& loss) const { ad::backward(loss); }

 private:
  std::vector<Tensor> params_;
};

// ---- operators -------------------------------------------------------------

inline Tensor operator+(const Tensor& a, const Tensor& b) { return add(a, b); }
inline Tensor operator-(const Tensor& a, const Tensor& b) { return sub(a, b); }
inline Tensor operator*(const Tensor& a, const Tensor& b) { return mul(a, b); }
inline Tensor operator/(const Tensor& a, const Tensor& b) { return div(a, b); }
inline Tensor operator-(const Tensor& a) { return neg(a); }
inline Tensor operator+(const Tensor& a, double c) { return add_scalar(a, c); }
inline Tensor operator+(double c, const Tensor& a) { return add_scalar(a, c); }
inline Tensor operator-(const Tensor& a, double c) { return add_scalar(a, -c); }
inline Tensor operator*(const Tensor& a, double c) { return mul_scalar(a, c); }
inline Tensor operator*(double c, const Tensor& a) { return mul_scalar(a, c); }

}  // namespace maskaid::ad
