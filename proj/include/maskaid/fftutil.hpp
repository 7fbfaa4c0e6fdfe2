// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace maskaid::fftutil {

// Real-input FFT of size n (power of two). Forward is unnormalized
// (X[k] = sum_j x[j] e^{-2*pi*i*j*k/n}); inverse includes the 1/n factor so
// irfft(rfft(x)) == x. Backed by FFTW with an internal plan cache; safe to
// call concurrently from multiple threads.
void rfft(const std::vector<double>& in, std::vector<std::complex<double>>& out);
void irfft(const std::vector<std::complex<double>>& in, std::vector<double>& out,
           std::size_t n);

std::size_t next_pow2(std::size_t n);

// Full linear convolution, output length a.size() + b.size() - 1.
std::vector<double> convolve_full(const std::vector<double>& a,
                                  const std::vector<double>& b);

// Causal same-length convolution with zero padding:
// out[t] = sum_k ker[k] * sig[t - k].
void convolve_same(const double* sig, std::size_t n, const double* ker,
                   std::size_t k, double* out);

}  // namespace maskaid::fftutil
