// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Differentiable auditory front-end: outer/middle-ear FIR, dual-resonance
// nonlinear (DRNL) cochlear filterbank, half-wave IHC transduction with
// listener-specific gain, and instantaneous log compression. All filters are
// realized as 512-tap FIR kernels so the whole cascade is expressible as tape
// operations.
#pragma once

#include <complex>
#include <string>
#include <vector>

#include "maskaid/audiogram.hpp"
#include "maskaid/signal.hpp"
#include "maskaid/tensor.hpp"

namespace maskaid {

inline constexpr int kNumDrnlChannels = 31;
inline constexpr int kFirTaps = 512;
// |g| floor inside the broken-stick nonlinearity.
inline constexpr double kBrokenStickEps = 1e-30;
// Log-compression knee: v = log(1 + u / u0).
inline constexpr double kCompressionU0 = 1e-5;

// ---- auditory frequency scale ------------------------------------------------

double erb_number(double f_hz);
double erb_number_inverse(double erb);
// n center frequencies uniformly spaced on the ERB-number scale.
std::vector<double> erb_spaced_frequencies(int n, double f_lo, double f_hi);

// ---- filter specifications ---------------------------------------------------

struct GammatoneSpec {
  double cf = 0.0;
  double bw = 0.0;
  int order = 1;
};

// Cascade of identical second-order Butterworth low-pass sections.
struct LowpassSpec {
  double cutoff = 0.0;
  int cascades = 1;
};

// Continuous-time frequency responses (unnormalized gammatone; unity-DC
// low-pass). These are the analytic references the FIR kernels must match.
std::complex<double> gammatone_response(const GammatoneSpec& s, double f_hz);
std::complex<double> lowpass_response(const LowpassSpec& s, double f_hz);

// 512-tap FIR kernels sampled from the analytic responses on the DFT grid.
// Gammatone kernels are normalized to unit magnitude response at cf; low-pass
// kernels to unit DC gain.
std::vector<double> design_gammatone_fir(const GammatoneSpec& s, double fs,
                                         int ntaps = kFirTaps);
std::vector<double> design_lowpass_fir(const LowpassSpec& s, double fs,
                                       int ntaps = kFirTaps);

// DTFT of a kernel at one frequency.
std::complex<double> kernel_response(const std::vector<double>& taps, double f_hz,
                                     double fs);

// ---- DRNL --------------------------------------------------------------------

struct DrnlChannelParams {
  double cf = 0.0;
  double lin_gain = 0.0;
  GammatoneSpec lin_gt;
  LowpassSpec lin_lp;
  GammatoneSpec nlin_gt1;
  double a = 0.0, b = 0.0, c = 0.0;  // broken-stick shape
  GammatoneSpec nlin_gt2;
  LowpassSpec nlin_lp;
  double ohc_loss_max_db = 0.0;
};

class DrnlBank {
 public:
  static DrnlBank load(const std::string& path, double fs = kSampleRate);
  static DrnlBank load_default();

  int num_channels() const { return static_cast<int>(channels_.size()); }
  const DrnlChannelParams& channel(int i) const { return channels_[i]; }
  std::vector<double> center_frequencies() const;
  double fs() const { return fs_; }

  // Designed kernels (unit conventions as above).
  const std::vector<double>& lin_gt_kernel(int i) const { return lin_gt_[i]; }
  const std::vector<double>& lin_lp_kernel(int i) const { return lin_lp_[i]; }
  const std::vector<double>& nlin_gt1_kernel(int i) const { return nlin_gt1_[i]; }
  const std::vector<double>& nlin_gt2_kernel(int i) const { return nlin_gt2_[i]; }
  const std::vector<double>& nlin_lp_kernel(int i) const { return nlin_lp_[i]; }

 private:
  double fs_ = kSampleRate;
  std::vector<DrnlChannelParams> channels_;
  std::vector<std::vector<double>> lin_gt_, lin_lp_, nlin_gt1_, nlin_gt2_, nlin_lp_;
};

// Per-channel OHC/IHC hearing-loss split derived from an audiogram via the
// 2/3 - 1/3 rule with the per-channel OHC cap.
struct ListenerProfile {
  std::vector<double> ohc_loss_db, ihc_loss_db;
  std::vector<double> ohc_linear, ihc_gain;  // 10^(-dB/20)

  static ListenerProfile normal_hearing(int num_channels);
  static ListenerProfile from_audiogram(const Audiogram& a, const DrnlBank& bank);
};

// ---- full model ----------------------------------------------------------------

class AuditoryModel {
 public:
  AuditoryModel(DrnlBank bank, std::vector<double> ome_taps);
  static AuditoryModel load_default();

  int num_channels() const { return bank_.num_channels(); }
  const DrnlBank& bank() const { return bank_; }
  const std::vector<double>& ome_taps() const { return ome_taps_; }

  // Stage cascade: outer/middle ear -> DRNL -> IHC -> compression, stacked
  // over channels into a (num_channels, len) tensor.
  ad::Tensor run(const ad::Tensor& x, const ListenerProfile& p) const;
  ad::Tensor run_nh(const ad::Tensor& x) const;
  std::vector<double> run_plain(const std::vector<double>& x,
                                const ListenerProfile& p) const;  // row-major

  // Individual stages (also used by tests and the data generator).
  ad::Tensor outer_middle_ear(const ad::Tensor& x) const;
  ad::Tensor drnl_channel(const ad::Tensor& x, int ch, double ohc_linear) const;
  ad::Tensor drnl_linear_path(const ad::Tensor& x, int ch) const;
  ad::Tensor drnl_nonlinear_path(const ad::Tensor& x, int ch,
                                 double ohc_linear) const;
  static ad::Tensor ihc_stage(const ad::Tensor& x, double ihc_gain);
  static ad::Tensor compress(const ad::Tensor& u);

 private:
  DrnlBank bank_;
  std::vector<double> ome_taps_;
  ad::Tensor ome_k_;
  std::vector<ad::Tensor> lin_gt_gain_k_, lin_lp_k_, gt1_k_, gt2_k_, nlp_k_;
};

std::vector<double> load_ome_kernel(const std::string& path);

}  // namespace maskaid
