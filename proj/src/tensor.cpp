// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#include "maskaid/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "maskaid/errors.hpp"
#include "maskaid/fftutil.hpp"

namespace maskaid::ad {

namespace {

thread_local GradSink* g_active_sink = nullptr;

std::shared_ptr<detail::Node> new_node(Shape shape, std::vector<double> values) {
  auto n = std::make_shared<detail::Node>();
  n->shape = std::move(shape);
  n->value = std::move(values);
  return n;
}

bool any_requires_grad(const std::vector<Tensor>& ts) {
  for (const auto& t : ts)
    if (t.requires_grad()) return true;
  return false;
}

// Right-aligned broadcast descriptor. Strides are in elements; 0 marks a
// broadcast dimension.
struct Bcast {
  Shape out;
  std::vector<int64_t> sa, sb;
  int64_t n = 0;
  bool same = false;
};

std::vector<int64_t> contiguous_strides(const Shape& s) {
  std::vector<int64_t> st(s.size(), 1);
  for (int i = static_cast<int>(s.size()) - 2; i >= 0; --i)
    st[i] = st[i + 1] * s[i + 1];
  return st;
}

Bcast make_bcast(const Shape& a, const Shape& b, const char* op) {
  Bcast bc;
  if (a == b) {
    bc.out = a;
    bc.n = numel_of(a);
    bc.same = true;
    return bc;
  }
  const int ra = static_cast<int>(a.size()), rb = static_cast<int>(b.size());
  const int r = std::max(ra, rb);
  bc.out.resize(r);
  for (int i = 0; i < r; ++i) {
    const int64_t da = (i < r - ra) ? 1 : a[i - (r - ra)];
    const int64_t db = (i < r - rb) ? 1 : b[i - (r - rb)];
    if (da != db && da != 1 && db != 1)
      throw ShapeError(std::string(op) + ": shapes " + shape_str(a) + " and " +
                       shape_str(b) + " are not broadcast-compatible");
    bc.out[i] = std::max(da, db);
  }
  const auto ca = contiguous_strides(a), cb = contiguous_strides(b);
  bc.sa.assign(r, 0);
  bc.sb.assign(r, 0);
  for (int i = 0; i < r; ++i) {
    if (i >= r - ra && a[i - (r - ra)] != 1) bc.sa[i] = ca[i - (r - ra)];
    if (i >= r - rb && b[i - (r - rb)] != 1) bc.sb[i] = cb[i - (r - rb)];
  }
  bc.n = numel_of(bc.out);
  return bc;
}

// Calls f(flat_out, flat_a, flat_b) over all output elements.
template <class F>
void bcast_foreach(const Bcast& bc, F&& f) {
  if (bc.same) {
    for (int64_t i = 0; i < bc.n; ++i) f(i, i, i);
    return;
  }
  const int r = static_cast<int>(bc.out.size());
  std::vector<int64_t> c(r, 0);
  int64_t ia = 0, ib = 0;
  for (int64_t i = 0; i < bc.n; ++i) {
    f(i, ia, ib);
    for (int d = r - 1; d >= 0; --d) {
      ++c[d];
      ia += bc.sa[d];
      ib += bc.sb[d];
      if (c[d] < bc.out[d]) break;
      c[d] = 0;
      ia -= bc.sa[d] * bc.out[d];
      ib -= bc.sb[d] * bc.out[d];
    }
  }
}

// Generic elementwise binary op. Fwd: f(a, b); local gradients dfa/dfb are
// evaluated on the saved parent values during the backward pass.
template <class FwdF, class DfaF, class DfbF>
Tensor ew_binary(const Tensor& a, const Tensor& b, const char* name, FwdF f,
                 DfaF dfa, DfbF dfb) {
  if (!a.defined() || !b.defined()) throw StateError("undefined tensor operand");
  Bcast bc = make_bcast(a.shape(), b.shape(), name);
  std::vector<double> out(static_cast<size_t>(bc.n));
  const double* va = a.values().data();
  const double* vb = b.values().data();
  bcast_foreach(bc, [&](int64_t i, int64_t ia, int64_t ib) {
    out[static_cast<size_t>(i)] = f(va[ia], vb[ib]);
  });

  auto node = new_node(bc.out, std::move(out));
  if (a.requires_grad() || b.requires_grad()) {
    node->requires_grad = true;
    node->parents = {a.node_ptr(), b.node_ptr()};
    detail::Node* na = a.node();
    detail::Node* nb = b.node();
    node->backprop = [na, nb, bc, dfa, dfb](detail::Node& self) {
      if (self.grad.empty()) return;
      const double* g = self.grad.data();
      const double* pa = na->value.data();
      const double* pb = nb->value.data();
      if (na->requires_grad) {
        std::vector<double> ca(na->value.size(), 0.0);
        bcast_foreach(bc, [&](int64_t i, int64_t ia, int64_t ib) {
          ca[static_cast<size_t>(ia)] += g[i] * dfa(pa[ia], pb[ib]);
        });
        accumulate_grad(na, ca);
      }
      if (nb->requires_grad) {
        std::vector<double> cb(nb->value.size(), 0.0);
        bcast_foreach(bc, [&](int64_t i, int64_t ia, int64_t ib) {
          cb[static_cast<size_t>(ib)] += g[i] * dfb(pa[ia], pb[ib]);
        });
        accumulate_grad(nb, cb);
      }
    };
  }
  return Tensor::wrap(node);
}

// Generic elementwise unary op; derivative sees (x, out).
template <class FwdF, class DerF>
Tensor ew_unary(const Tensor& a, const char* name, FwdF f, DerF der) {
  if (!a.defined()) throw StateError("undefined tensor operand");
  (void)name;
  const auto& va = a.values();
  std::vector<double> out(va.size());
  for (size_t i = 0; i < va.size(); ++i) out[i] = f(va[i]);

  auto node = new_node(a.shape(), std::move(out));
  if (a.requires_grad()) {
    node->requires_grad = true;
    node->parents = {a.node_ptr()};
    detail::Node* na = a.node();
    node->backprop = [na, der](detail::Node& self) {
      if (self.grad.empty()) return;
      const double* g = self.grad.data();
      const double* x = na->value.data();
      const double* y = self.value.data();
      std::vector<double> c(na->value.size());
      for (size_t i = 0; i < c.size(); ++i) c[i] = g[i] * der(x[i], y[i]);
      accumulate_grad(na, c);
    };
  }
  return Tensor::wrap(node);
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

int64_t numel_of(const Shape& s) {
  int64_t n = 1;
  for (int64_t d : s) n *= d;
  return n;
}

std::string shape_str(const Shape& s) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << ")";
  return os.str();
}

// ---- Tensor ----------------------------------------------------------------

const Shape& Tensor::shape() const {
  if (!node_) throw StateError("shape() on undefined tensor");
  return node_->shape;
}

int64_t Tensor::numel() const { return numel_of(shape()); }

int64_t Tensor::dim(int i) const {
  const auto& s = shape();
  if (i < 0 || i >= static_cast<int>(s.size()))
    throw ShapeError("dim index out of range");
  return s[i];
}

int Tensor::rank() const { return static_cast<int>(shape().size()); }

const std::vector<double>& Tensor::values() const {
  if (!node_) throw StateError("values() on undefined tensor");
  return node_->value;
}

double Tensor::scalar_value() const {
  if (numel() != 1) throw ShapeError("scalar_value() on non-scalar tensor");
  return values()[0];
}

bool Tensor::requires_grad() const { return node_ && node_->requires_grad; }

const std::vector<double>& Tensor::grad() const {
  if (!node_ || node_->grad.empty())
    throw StateError("no gradient accumulated on this tensor");
  return node_->grad;
}

bool Tensor::has_grad() const { return node_ && !node_->grad.empty(); }

void Tensor::zero_grad() {
  if (node_) node_->grad.clear();
}

void Tensor::leaf_assign(const std::vector<double>& values) {
  if (!node_ || !node_->is_leaf())
    throw StateError("leaf_assign() on a non-leaf tensor");
  if (values.size() != node_->value.size())
    throw ShapeError("leaf_assign(): size mismatch");
  node_->value = values;
}

Tensor Tensor::wrap(std::shared_ptr<detail::Node> n) {
  Tensor t;
  t.node_ = std::move(n);
  return t;
}

// ---- creation --------------------------------------------------------------

Tensor constant(Shape shape, std::vector<double> values) {
  if (numel_of(shape) != static_cast<int64_t>(values.size()))
    throw ShapeError("constant(): value count does not match shape " +
                     shape_str(shape));
  return Tensor::wrap(new_node(std::move(shape), std::move(values)));
}

Tensor constant_scalar(double v) { return constant({1}, {v}); }

Tensor zeros(Shape shape) {
  const auto n = numel_of(shape);
  return constant(std::move(shape), std::vector<double>(n, 0.0));
}

Tensor full(Shape shape, double v) {
  const auto n = numel_of(shape);
  return constant(std::move(shape), std::vector<double>(n, v));
}

Tensor parameter(Shape shape, std::vector<double> values) {
  Tensor t = constant(std::move(shape), std::move(values));
  t.node()->requires_grad = true;
  return t;
}

Tensor make_op(Shape out_shape, std::vector<double> out_values,
               std::vector<Tensor> parents,
               std::function<void(detail::Node&)> backprop) {
  if (numel_of(out_shape) != static_cast<int64_t>(out_values.size()))
    throw ShapeError("make_op(): value count does not match shape");
  auto node = new_node(std::move(out_shape), std::move(out_values));
  if (any_requires_grad(parents)) {
    node->requires_grad = true;
    for (auto& p : parents) node->parents.push_back(p.node_ptr());
    node->backprop = std::move(backprop);
  }
  return Tensor::wrap(node);
}

void accumulate_grad(detail::Node* parent, const std::vector<double>& contrib) {
  if (!parent->requires_grad) return;
  if (g_active_sink && parent->is_leaf()) {
    auto& slot = (*g_active_sink)[parent];
    if (slot.empty()) slot.assign(parent->value.size(), 0.0);
    for (size_t i = 0; i < contrib.size(); ++i) slot[i] += contrib[i];
    return;
  }
  parent->ensure_grad();
  for (size_t i = 0; i < contrib.size(); ++i) parent->grad[i] += contrib[i];
}

// ---- elementwise -----------------------------------------------------------

Tensor add(const Tensor& a, const Tensor& b) {
  return ew_binary(
      a, b, "add", [](double x, double y) { return x + y; },
      [](double, double) { return 1.0; }, [](double, double) { return 1.0; });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  return ew_binary(
      a, b, "sub", [](double x, double y) { return x - y; },
      [](double, double) { return 1.0; }, [](double, double) { return -1.0; });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  return ew_binary(
      a, b, "mul", [](double x, double y) { return x * y; },
      [](double, double y) { return y; }, [](double x, double) { return x; });
}

Tensor div(const Tensor& a, const Tensor& b) {
  for (double v : b.values())
    if (v == 0.0) throw DomainError("div: division by zero");
  return ew_binary(
      a, b, "div", [](double x, double y) { return x / y; },
      [](double, double y) { return 1.0 / y; },
      [](double x, double y) { return -x / (y * y); });
}

Tensor minimum(const Tensor& a, const Tensor& b) {
  // Gradient follows the branch attaining the minimum; ties route to a.
  return ew_binary(
      a, b, "minimum", [](double x, double y) { return x <= y ? x : y; },
      [](double x, double y) { return x <= y ? 1.0 : 0.0; },
      [](double x, double y) { return x <= y ? 0.0 : 1.0; });
}

Tensor neg(const Tensor& a) {
  return ew_unary(
      a, "neg", [](double x) { return -x; },
      [](double, double) { return -1.0; });
}

Tensor abs(const Tensor& a) {
  return ew_unary(
      a, "abs", [](double x) { return std::fabs(x); },
      [](double x, double) { return sign_of(x); });
}

Tensor abs_floored(const Tensor& a, double eps) {
  // max(|x|, eps): the tie and sub-floor region take the constant branch.
  return ew_unary(
      a, "abs_floored",
      [eps](double x) { return std::max(std::fabs(x), eps); },
      [eps](double x, double) { return std::fabs(x) > eps ? sign_of(x) : 0.0; });
}

Tensor log(const Tensor& a) {
  for (double v : a.values())
    if (!(v > 0.0)) throw DomainError("log: non-positive input");
  return ew_unary(
      a, "log", [](double x) { return std::log(x); },
      [](double x, double) { return 1.0 / x; });
}

Tensor log1p(const Tensor& a) {
  for (double v : a.values())
    if (!(v > -1.0)) throw DomainError("log1p: input <= -1");
  return ew_unary(
      a, "log1p", [](double x) { return std::log1p(x); },
      [](double x, double) { return 1.0 / (1.0 + x); });
}

Tensor exp(const Tensor& a) {
  return ew_unary(
      a, "exp", [](double x) { return std::exp(x); },
      [](double, double y) { return y; });
}

Tensor sqrt(const Tensor& a) {
  for (double v : a.values())
    if (v < 0.0) throw DomainError("sqrt: negative input");
  return ew_unary(
      a, "sqrt", [](double x) { return std::sqrt(x); },
      [](double, double y) { return y > 0.0 ? 0.5 / y : 0.0; });
}

Tensor tanh(const Tensor& a) {
  return ew_unary(
      a, "tanh", [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Tensor sigmoid(const Tensor& a) {
  return ew_unary(
      a, "sigmoid", [](double x) { return 1.0 / (1.0 + std::exp(-x)); },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor sin(const Tensor& a) {
  return ew_unary(
      a, "sin", [](double x) { return std::sin(x); },
      [](double x, double) { return std::cos(x); });
}

Tensor cos(const Tensor& a) {
  return ew_unary(
      a, "cos", [](double x) { return std::cos(x); },
      [](double x, double) { return -std::sin(x); });
}

Tensor pow_scalar(const Tensor& a, double p) {
  if (p != std::floor(p)) {
    for (double v : a.values())
      if (v < 0.0)
        throw DomainError("pow_scalar: negative base with non-integer exponent");
  }
  return ew_unary(
      a, "pow_scalar", [p](double x) { return std::pow(x, p); },
      [p](double x, double) {
        if (x == 0.0) return 0.0;  // subgradient convention at the origin
        return p * std::pow(x, p - 1.0);
      });
}

Tensor max_scalar(const Tensor& a, double c) {
  return ew_unary(
      a, "max_scalar", [c](double x) { return x > c ? x : c; },
      [c](double x, double) { return x > c ? 1.0 : 0.0; });
}

Tensor relu(const Tensor& a) { return max_scalar(a, 0.0); }

Tensor add_scalar(const Tensor& a, double c) {
  return ew_unary(
      a, "add_scalar", [c](double x) { return x + c; },
      [](double, double) { return 1.0; });
}

Tensor mul_scalar(const Tensor& a, double c) {
  return ew_unary(
      a, "mul_scalar", [c](double x) { return x * c; },
      [c](double, double) { return c; });
}

// ---- shape -----------------------------------------------------------------

Tensor broadcast_to(const Tensor& a, const Shape& shape) {
  Bcast bc = make_bcast(a.shape(), shape, "broadcast_to");
  if (bc.out != shape)
    throw ShapeError("broadcast_to: cannot broadcast " + shape_str(a.shape()) +
                     " to " + shape_str(shape));
  std::vector<double> out(static_cast<size_t>(bc.n));
  const double* va = a.values().data();
  bcast_foreach(bc, [&](int64_t i, int64_t ia, int64_t) {
    out[static_cast<size_t>(i)] = va[ia];
  });
  auto node = new_node(shape, std::move(out));
  if (a.requires_grad()) {
    node->requires_grad = true;
    node->parents = {a.node_ptr()};
    detail::Node* na = a.node();
    node->backprop = [na, bc](detail::Node& self) {
      if (self.grad.empty()) return;
      std::vector<double> c(na->value.size(), 0.0);
      const double* g = self.grad.data();
      bcast_foreach(bc, [&](int64_t i, int64_t ia, int64_t) {
        c[static_cast<size_t>(ia)] += g[i];
      });
      accumulate_grad(na, c);
    };
  }
  return Tensor::wrap(node);
}

Tensor slice_rows(const Tensor& a, int64_t r0, int64_t r1) {
  const auto& s = a.shape();
  if (s.empty()) throw ShapeError("slice_rows: rank-0 tensor");
  if (r0 < 0 || r1 > s[0] || r0 >= r1)
    throw ShapeError("slice_rows: bad row range");
  int64_t row = 1;
  for (size_t i = 1; i < s.size(); ++i) row *= s[i];
  Shape os = s;
  os[0] = r1 - r0;
  std::vector<double> out(a.values().begin() + r0 * row,
                          a.values().begin() + r1 * row);
  auto node = new_node(os, std::move(out));
  if (a.requires_grad()) {
    node->requires_grad = true;
    node->parents = {a.node_ptr()};
    detail::Node* na = a.node();
    node->backprop = [na, r0, row](detail::Node& self) {
      if (self.grad.empty()) return;
      std::vector<double> c(na->value.size(), 0.0);
      for (size_t i = 0; i < self.grad.size(); ++i)
        c[static_cast<size_t>(r0 * row) + i] = self.grad[i];
      accumulate_grad(na, c);
    };
  }
  return Tensor::wrap(node);
}

Tensor stack_rows(const std::vector<Tensor>& rows) {
  if (rows.empty()) throw ShapeError("stack_rows: empty input");
  const int64_t m = rows[0].numel();
  for (const auto& r : rows) {
    if (r.rank() != 1 || r.numel() != m)
      throw ShapeError("stack_rows: rows must be 1-D with equal length");
  }
  const int64_t n = static_cast<int64_t>(rows.size());
  std::vector<double> out;
  out.reserve(static_cast<size_t>(n * m));
  for (const auto& r : rows)
    out.insert(out.end(), r.values().begin(), r.values().end());

  auto node = new_node({n, m}, std::move(out));
  if (any_requires_grad(rows)) {
    node->requires_grad = true;
    std::vector<detail::Node*> raw;
    for (const auto& r : rows) {
      node->parents.push_back(r.node_ptr());
      raw.push_back(r.node());
    }
    node->backprop = [raw, m](detail::Node& self) {
      if (self.grad.empty()) return;
      for (size_t r = 0; r < raw.size(); ++r) {
        if (!raw[r]->requires_grad) continue;
        std::vector<double> c(self.grad.begin() + static_cast<int64_t>(r) * m,
                              self.grad.begin() + static_cast<int64_t>(r + 1) * m);
        accumulate_grad(raw[r], c);
      }
    };
  }
  return Tensor::wrap(node);
}

// ---- matmul ----------------------------------------------------------------

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2)
    throw ShapeError("matmul: both operands must be rank 2");
  const int64_t m = a.dim(0), k = a.dim(1), k2 = b.dim(0), n = b.dim(1);
  if (k != k2)
    throw ShapeError("matmul: inner dimensions disagree, " +
                     shape_str(a.shape()) + " x " + shape_str(b.shape()));
  std::vector<double> out(static_cast<size_t>(m * n), 0.0);
  const double* va = a.values().data();
  const double* vb = b.values().data();
  for (int64_t i = 0; i < m; ++i)
    for (int64_t p = 0; p < k; ++p) {
      const double aip = va[i * k + p];
      if (aip == 0.0) continue;
      const double* brow = vb + p * n;
      double* orow = out.data() + i * n;
      for (int64_t j = 0; j < n; ++j) orow[j] += aip * brow[j];
    }

  auto node = new_node({m, n}, std::move(out));
  if (a.requires_grad() || b.requires_grad()) {
    node->requires_grad = true;
    node->parents = {a.node_ptr(), b.node_ptr()};
    detail::Node* na = a.node();
    detail::Node* nb = b.node();
    node->backprop = [na, nb, m, k, n](detail::Node& self) {
      if (self.grad.empty()) return;
      const double* g = self.grad.data();
      if (na->requires_grad) {
        std::vector<double> ca(static_cast<size_t>(m * k), 0.0);
        const double* vb = nb->value.data();
        for (int64_t i = 0; i < m; ++i)
          for (int64_t j = 0; j < n; ++j) {
            const double gij = g[i * n + j];
            if (gij == 0.0) continue;
            for (int64_t p = 0; p < k; ++p) ca[i * k + p] += gij * vb[p * n + j];
          }
        accumulate_grad(na, ca);
      }
      if (nb->requires_grad) {
        std::vector<double> cb(static_cast<size_t>(k * n), 0.0);
        const double* va = na->value.data();
        for (int64_t i = 0; i < m; ++i)
          for (int64_t p = 0; p < k; ++p) {
            const double aip = va[i * k + p];
            if (aip == 0.0) continue;
            const double* grow = g + i * n;
            double* crow = cb.data() + p * n;
            for (int64_t j = 0; j < n; ++j) crow[j] += aip * grow[j];
          }
        accumulate_grad(nb, cb);
      }
    };
  }
  return Tensor::wrap(node);
}

// ---- FIR convolution -------------------------------------------------------

Tensor fir_convolve(const Tensor& signal, const Tensor& kernel) {
  if (signal.rank() != 1 || kernel.rank() != 1)
    throw ShapeError("fir_convolve: signal and kernel must be 1-D");
  const int64_t n = signal.numel(), k = kernel.numel();
  if (k == 0) throw ShapeError("fir_convolve: empty kernel");
  if (k > n) throw ShapeError("fir_convolve: kernel longer than signal");

  std::vector<double> out(static_cast<size_t>(n));
  fftutil::convolve_same(signal.values().data(), static_cast<size_t>(n),
                         kernel.values().data(), static_cast<size_t>(k),
                         out.data());

  auto node = new_node({n}, std::move(out));
  if (signal.requires_grad() || kernel.requires_grad()) {
    node->requires_grad = true;
    node->parents = {signal.node_ptr(), kernel.node_ptr()};
    detail::Node* ns = signal.node();
    detail::Node* nk = kernel.node();
    node->backprop = [ns, nk, n, k](detail::Node& self) {
      if (self.grad.empty()) return;
      const std::vector<double>& g = self.grad;
      if (ns->requires_grad) {
        // d/dsig[u] = sum_j ker[j] * g[u + j]: correlation of g with kernel.
        std::vector<double> rk(nk->value.rbegin(), nk->value.rend());
        std::vector<double> full = fftutil::convolve_full(g, rk);
        std::vector<double> c(static_cast<size_t>(n));
        for (int64_t u = 0; u < n; ++u)
          c[static_cast<size_t>(u)] = full[static_cast<size_t>(u + k - 1)];
        accumulate_grad(ns, c);
      }
      if (nk->requires_grad) {
        // d/dker[j] = sum_t g[t] * sig[t - j]: correlation of g with signal.
        std::vector<double> rs(ns->value.rbegin(), ns->value.rend());
        std::vector<double> full = fftutil::convolve_full(g, rs);
        std::vector<double> c(static_cast<size_t>(k));
        for (int64_t j = 0; j < k; ++j)
          c[static_cast<size_t>(j)] = full[static_cast<size_t>(n - 1 + j)];
        accumulate_grad(nk, c);
      }
    };
  }
  return Tensor::wrap(node);
}

// ---- reductions ------------------------------------------------------------

Tensor sum(const Tensor& a) {
  double s = 0.0;
  for (double v : a.values()) s += v;
  auto node = new_node({1}, {s});
  if (a.requires_grad()) {
    node->requires_grad = true;
    node->parents = {a.node_ptr()};
    detail::Node* na = a.node();
    node->backprop = [na](detail::Node& self) {
      if (self.grad.empty()) return;
      accumulate_grad(na, std::vector<double>(na->value.size(), self.grad[0]));
    };
  }
  return Tensor::wrap(node);
}

Tensor mean(const Tensor& a) {
  const int64_t n = a.numel();
  if (n == 0) throw ShapeError("mean: empty tensor");
  return mul_scalar(sum(a), 1.0 / static_cast<double>(n));
}

Tensor max_all(const Tensor& a) {
  const auto& v = a.values();
  if (v.empty()) throw ShapeError("max_all: empty tensor");
  size_t arg = 0;
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[arg]) arg = i;
  auto node = new_node({1}, {v[arg]});
  if (a.requires_grad()) {
    node->requires_grad = true;
    node->parents = {a.node_ptr()};
    detail::Node* na = a.node();
    node->backprop = [na, arg](detail::Node& self) {
      if (self.grad.empty()) return;
      std::vector<double> c(na->value.size(), 0.0);
      c[arg] = self.grad[0];
      accumulate_grad(na, c);
    };
  }
  return Tensor::wrap(node);
}

Tensor l2norm(const Tensor& a) {
  double s = 0.0;
  for (double v : a.values()) s += v * v;
  const double nrm = std::sqrt(s);
  auto node = new_node({1}, {nrm});
  if (a.requires_grad()) {
    node->requires_grad = true;
    node->parents = {a.node_ptr()};
    detail::Node* na = a.node();
    node->backprop = [na, nrm](detail::Node& self) {
      if (self.grad.empty()) return;
      const double denom = nrm > 0.0 ? nrm : 1.0;
      std::vector<double> c(na->value.size());
      for (size_t i = 0; i < c.size(); ++i)
        c[i] = self.grad[0] * na->value[i] / denom;
      accumulate_grad(na, c);
    };
  }
  return Tensor::wrap(node);
}

Tensor sum_axis(const Tensor& a, int axis) {
  const auto& s = a.shape();
  if (axis < 0 || axis >= static_cast<int>(s.size()))
    throw ShapeError("sum_axis: invalid axis " + std::to_string(axis) +
                     " for shape " + shape_str(s));
  int64_t outer = 1, inner = 1;
  for (int i = 0; i < axis; ++i) outer *= s[i];
  for (size_t i = axis + 1; i < s.size(); ++i) inner *= s[i];
  const int64_t ax = s[axis];
  Shape os;
  for (int i = 0; i < static_cast<int>(s.size()); ++i)
    if (i != axis) os.push_back(s[i]);
  if (os.empty()) os = {1};

  std::vector<double> out(static_cast<size_t>(outer * inner), 0.0);
  const double* v = a.values().data();
  for (int64_t o = 0; o < outer; ++o)
    for (int64_t x = 0; x < ax; ++x)
      for (int64_t i = 0; i < inner; ++i)
        out[o * inner + i] += v[(o * ax + x) * inner + i];

  auto node = new_node(os, std::move(out));
  if (a.requires_grad()) {
    node->requires_grad = true;
    node->parents = {a.node_ptr()};
    detail::Node* na = a.node();
    node->backprop = [na, outer, ax, inner](detail::Node& self) {
      if (self.grad.empty()) return;
      std::vector<double> c(na->value.size());
      for (int64_t o = 0; o < outer; ++o)
        for (int64_t x = 0; x < ax; ++x)
          for (int64_t i = 0; i < inner; ++i)
            c[(o * ax + x) * inner + i] = self.grad[o * inner + i];
      accumulate_grad(na, c);
    };
  }
  return Tensor::wrap(node);
}

// ---- backward --------------------------------------------------------------

namespace {

void run_backward(const Tensor& loss, GradSink* sink) {
  if (!loss.defined()) throw StateError("backward() on undefined tensor");
  if (loss.numel() != 1) throw ShapeError("backward(): loss must be scalar");
  if (!std::isfinite(loss.scalar_value()))
    throw DomainError("backward(): loss is not finite");
  if (!loss.requires_grad()) return;  // nothing reaches any leaf

  // Iterative post-order DFS yields a topological order of the subgraph.
  std::vector<detail::Node*> order;
  std::unordered_set<detail::Node*> visited;
  std::vector<std::pair<detail::Node*, size_t>> stack;
  stack.emplace_back(loss.node(), 0);
  visited.insert(loss.node());
  while (!stack.empty()) {
    auto& [node, idx] = stack.back();
    if (idx < node->parents.size()) {
      detail::Node* p = node->parents[idx++].get();
      if (p->requires_grad && !visited.count(p)) {
        visited.insert(p);
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  // Reset intermediate grads; leaf grads accumulate across backward calls.
  for (detail::Node* n : order) {
    if (!n->is_leaf()) n->grad.assign(n->value.size(), 0.0);
  }
  detail::Node* ln = loss.node();
  if (ln->is_leaf()) {
    if (!sink) {
      ln->ensure_grad();
      ln->grad[0] += 1.0;
    } else {
      auto& slot = (*sink)[ln];
      if (slot.empty()) slot.assign(1, 0.0);
      slot[0] += 1.0;
    }
    return;
  }
  ln->grad[0] = 1.0;

  GradSink* prev = g_active_sink;
  g_active_sink = sink;
  try {
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      detail::Node* n = *it;
      if (n->backprop && !n->grad.empty()) n->backprop(*n);
    }
  } catch (...) {
    g_active_sink = prev;
    throw;
  }
  g_active_sink = prev;
}

}  // namespace

void backward(const Tensor& loss) { run_backward(loss, nullptr); }

void backward_into(const Tensor& loss, GradSink& sink) {
  run_backward(loss, &sink);
}

// ---- Tape ------------------------------------------------------------------

Tensor Tape::parameter(Shape shape, std::vector<double> values) {
  Tensor t = ad::parameter(std::move(shape), std::move(values));
  params_.push_back(t);
  return t;
}

void Tape::add_parameter(const Tensor& t) {
  if (!t.defined() || !t.node()->is_leaf() || !t.requires_grad())
    throw StateError("Tape::add_parameter: not a grad-tracked leaf");
  params_.push_back(t);
}

void Tape::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

}  // namespace maskaid::ad
