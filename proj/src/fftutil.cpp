// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#include "maskaid/fftutil.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace maskaid::fftutil {

namespace {

// One cached plan pair per transform size. Plans are created against
// fftw_malloc'd scratch buffers and executed via the new-array interface on
// per-thread buffers with the same (maximal) alignment.
struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

std::mutex g_plan_mutex;
std::unordered_map<std::size_t, PlanPair>& plan_map() {
  static std::unordered_map<std::size_t, PlanPair> m;
  return m;
}

PlanPair get_plans(std::size_t n) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto& m = plan_map();
  auto it = m.find(n);
  if (it != m.end()) return it->second;

  double* re = fftw_alloc_real(n);
  fftw_complex* cx = fftw_alloc_complex(n / 2 + 1);
  PlanPair p;
  p.fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), re, cx, FFTW_ESTIMATE);
  p.bwd = fftw_plan_dft_c2r_1d(static_cast<int>(n), cx, re, FFTW_ESTIMATE);
  fftw_free(re);
  fftw_free(cx);
  if (!p.fwd || !p.bwd) throw std::runtime_error("fftw plan creation failed");
  m.emplace(n, p);
  return p;
}

// Thread-local aligned scratch, grown on demand.
struct Scratch {
  double* re = nullptr;
  fftw_complex* cx = nullptr;
  std::size_t re_cap = 0, cx_cap = 0;
  ~Scratch() {
    if (re) fftw_free(re);
    if (cx) fftw_free(cx);
  }
  void ensure(std::size_t n) {
    if (re_cap < n) {
      if (re) fftw_free(re);
      re = fftw_alloc_real(n);
      re_cap = n;
    }
    const std::size_t nc = n / 2 + 1;
    if (cx_cap < nc) {
      if (cx) fftw_free(cx);
      cx = fftw_alloc_complex(nc);
      cx_cap = nc;
    }
  }
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void rfft(const std::vector<double>& in, std::vector<std::complex<double>>& out) {
  const std::size_t n = in.size();
  if (!is_pow2(n)) throw std::runtime_error("rfft: size must be a power of two");
  PlanPair p = get_plans(n);
  Scratch& s = scratch();
  s.ensure(n);
  std::memcpy(s.re, in.data(), n * sizeof(double));
  fftw_execute_dft_r2c(p.fwd, s.re, s.cx);
  out.resize(n / 2 + 1);
  std::memcpy(out.data(), s.cx, (n / 2 + 1) * sizeof(fftw_complex));
}

void irfft(const std::vector<std::complex<double>>& in, std::vector<double>& out,
           std::size_t n) {
  if (!is_pow2(n)) throw std::runtime_error("irfft: size must be a power of two");
  if (in.size() != n / 2 + 1) throw std::runtime_error("irfft: bad spectrum size");
  PlanPair p = get_plans(n);
  Scratch& s = scratch();
  s.ensure(n);
  std::memcpy(s.cx, in.data(), (n / 2 + 1) * sizeof(fftw_complex));
  fftw_execute_dft_c2r(p.bwd, s.cx, s.re);
  out.resize(n);
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = s.re[i] * inv;
}

std::vector<double> convolve_full(const std::vector<double>& a,
                                  const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;

  // Direct form for small products; FFT overlap otherwise.
  if (a.size() * b.size() <= 1 << 14) {
    std::vector<double> out(out_len, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double ai = a[i];
      if (ai == 0.0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b[j];
    }
    return out;
  }

  const std::size_t n = next_pow2(out_len);
  std::vector<double> pa(n, 0.0), pb(n, 0.0);
  std::memcpy(pa.data(), a.data(), a.size() * sizeof(double));
  std::memcpy(pb.data(), b.data(), b.size() * sizeof(double));
  std::vector<std::complex<double>> fa, fb;
  rfft(pa, fa);
  rfft(pb, fb);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
  std::vector<double> full;
  irfft(fa, full, n);
  full.resize(out_len);
  return full;
}

void convolve_same(const double* sig, std::size_t n, const double* ker,
                   std::size_t k, double* out) {
  if (k == 0 || n == 0) throw std::runtime_error("convolve_same: empty input");
  if (n * k <= 1 << 16) {
    for (std::size_t t = 0; t < n; ++t) {
      double acc = 0.0;
      const std::size_t kmax = (t + 1 < k) ? t + 1 : k;
      for (std::size_t j = 0; j < kmax; ++j) acc += ker[j] * sig[t - j];
      out[t] = acc;
    }
    return;
  }
  std::vector<double> a(sig, sig + n), b(ker, ker + k);
  std::vector<double> full = convolve_full(a, b);
  std::memcpy(out, full.data(), n * sizeof(double));
}

}  // namespace maskaid::fftutil
