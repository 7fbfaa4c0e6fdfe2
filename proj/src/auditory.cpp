// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#include "maskaid/auditory.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "maskaid/datapaths.hpp"
#include "maskaid/errors.hpp"
#include "maskaid/fftutil.hpp"

namespace maskaid {

// ---- ERB scale ---------------------------------------------------------------

double erb_number(double f_hz) {
  return 21.4 * std::log10(1.0 + 0.00437 * f_hz);
}

double erb_number_inverse(double erb) {
  return (std::pow(10.0, erb / 21.4) - 1.0) / 0.00437;
}

std::vector<double> erb_spaced_frequencies(int n, double f_lo, double f_hi) {
  if (n < 2 || f_lo <= 0 || f_hi <= f_lo)
    throw ValidationError("erb_spaced_frequencies: bad grid request");
  const double e0 = erb_number(f_lo), e1 = erb_number(f_hi);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double e = e0 + (e1 - e0) * i / (n - 1);
    out[i] = erb_number_inverse(e);
  }
  out.front() = f_lo;
  out.back() = f_hi;
  return out;
}

// ---- analytic responses --------------------------------------------------------

std::complex<double> gammatone_response(const GammatoneSpec& s, double f_hz) {
  // CTFT of t^(n-1) e^(-2 pi bw t) cos(2 pi cf t) u(t), constant factors
  // dropped (kernels are renormalized at cf).
  const std::complex<double> j(0.0, 1.0);
  const double sp = 2.0 * M_PI * s.bw;
  const std::complex<double> zm = sp + j * 2.0 * M_PI * (f_hz - s.cf);
  const std::complex<double> zp = sp + j * 2.0 * M_PI * (f_hz + s.cf);
  return 0.5 * (std::pow(zm, -s.order) + std::pow(zp, -s.order));
}

std::complex<double> lowpass_response(const LowpassSpec& s, double f_hz) {
  const std::complex<double> j(0.0, 1.0);
  const double wc = 2.0 * M_PI * s.cutoff;
  const std::complex<double> jw = j * 2.0 * M_PI * f_hz;
  const std::complex<double> h2 = (wc * wc) / (jw * jw + std::sqrt(2.0) * wc * jw + wc * wc);
  std::complex<double> h(1.0, 0.0);
  for (int i = 0; i < s.cascades; ++i) h *= h2;
  return h;
}

std::complex<double> kernel_response(const std::vector<double>& taps, double f_hz,
                                     double fs) {
  const std::complex<double> j(0.0, 1.0);
  std::complex<double> acc(0.0, 0.0);
  const double w = 2.0 * M_PI * f_hz / fs;
  for (std::size_t m = 0; m < taps.size(); ++m)
    acc += taps[m] * std::exp(-j * (w * static_cast<double>(m)));
  return acc;
}

namespace {

// Samples an analytic response on the DFT grid and inverts. Equivalent to
// evaluating the analytic impulse response at the tap instants with the
// truncated tail folded back, which keeps the kernel's DFT magnitude exactly
// on the analytic curve at the grid frequencies.
std::vector<double> sample_response_to_taps(
    const std::function<std::complex<double>(double)>& resp, double fs, int ntaps) {
  const std::size_t n = static_cast<std::size_t>(ntaps);
  if (fftutil::next_pow2(n) != n)
    throw ValidationError("kernel design requires power-of-two tap count");
  std::vector<std::complex<double>> spec(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k)
    spec[k] = resp(static_cast<double>(k) * fs / static_cast<double>(n));
  spec[0].imag(0.0);
  spec[n / 2].imag(0.0);
  std::vector<double> taps;
  fftutil::irfft(spec, taps, n);
  return taps;
}

}  // namespace

std::vector<double> design_gammatone_fir(const GammatoneSpec& s, double fs,
                                         int ntaps) {
  if (s.cf <= 0 || s.bw <= 0 || s.order < 1)
    throw ValidationError("design_gammatone_fir: bad specification");
  auto taps = sample_response_to_taps(
      [&](double f) { return gammatone_response(s, f); }, fs, ntaps);
  const double peak = std::abs(kernel_response(taps, s.cf, fs));
  for (double& t : taps) t /= peak;
  return taps;
}

std::vector<double> design_lowpass_fir(const LowpassSpec& s, double fs, int ntaps) {
  if (s.cutoff <= 0 || s.cascades < 1)
    throw ValidationError("design_lowpass_fir: bad specification");
  auto taps = sample_response_to_taps(
      [&](double f) { return lowpass_response(s, f); }, fs, ntaps);
  double dc = 0.0;
  for (double t : taps) dc += t;
  for (double& t : taps) t /= dc;
  return taps;
}

// ---- DrnlBank ------------------------------------------------------------------

DrnlBank DrnlBank::load(const std::string& path, double fs) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open DRNL parameter file: " + path);
  DrnlBank bank;
  bank.fs_ = fs;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    int idx;
    DrnlChannelParams p;
    ss >> idx >> p.cf >> p.lin_gain >> p.lin_gt.cf >> p.lin_gt.bw >>
        p.lin_gt.order >> p.lin_lp.cutoff >> p.lin_lp.cascades >>
        p.nlin_gt1.cf >> p.nlin_gt1.bw >> p.nlin_gt1.order >> p.a >> p.b >>
        p.c >> p.nlin_gt2.cf >> p.nlin_gt2.bw >> p.nlin_gt2.order >>
        p.nlin_lp.cutoff >> p.nlin_lp.cascades >> p.ohc_loss_max_db;
    if (!ss) throw FormatError("malformed DRNL row in " + path + ": " + line);
    if (p.a <= 0 || p.b <= 0 || !(p.c > 0 && p.c < 1))
      throw FormatError("DRNL broken-stick parameters out of range in " + path);
    bank.channels_.push_back(p);
  }
  if (bank.channels_.size() != kNumDrnlChannels)
    throw FormatError("expected " + std::to_string(kNumDrnlChannels) +
                      " DRNL channels in " + path);
  for (std::size_t i = 1; i < bank.channels_.size(); ++i)
    if (bank.channels_[i].cf <= bank.channels_[i - 1].cf)
      throw FormatError("DRNL center frequencies must be strictly increasing");

  for (const auto& p : bank.channels_) {
    bank.lin_gt_.push_back(design_gammatone_fir(p.lin_gt, fs));
    bank.lin_lp_.push_back(design_lowpass_fir(p.lin_lp, fs));
    bank.nlin_gt1_.push_back(design_gammatone_fir(p.nlin_gt1, fs));
    bank.nlin_gt2_.push_back(design_gammatone_fir(p.nlin_gt2, fs));
    bank.nlin_lp_.push_back(design_lowpass_fir(p.nlin_lp, fs));
  }
  return bank;
}

DrnlBank DrnlBank::load_default() {
  return load(data_file("drnl_params.tsv"));
}

std::vector<double> DrnlBank::center_frequencies() const {
  std::vector<double> out;
  out.reserve(channels_.size());
  for (const auto& p : channels_) out.push_back(p.cf);
  return out;
}

// ---- ListenerProfile -----------------------------------------------------------

ListenerProfile ListenerProfile::normal_hearing(int num_channels) {
  ListenerProfile p;
  p.ohc_loss_db.assign(num_channels, 0.0);
  p.ihc_loss_db.assign(num_channels, 0.0);
  p.ohc_linear.assign(num_channels, 1.0);
  p.ihc_gain.assign(num_channels, 1.0);
  return p;
}

ListenerProfile ListenerProfile::from_audiogram(const Audiogram& a,
                                                const DrnlBank& bank) {
  a.validate();
  const std::vector<double> interp =
      interpolate_thresholds(a, bank.center_frequencies());
  ListenerProfile p;
  const int n = bank.num_channels();
  p.ohc_loss_db.resize(n);
  p.ihc_loss_db.resize(n);
  p.ohc_linear.resize(n);
  p.ihc_gain.resize(n);
  for (int i = 0; i < n; ++i) {
    const double cap = bank.channel(i).ohc_loss_max_db;
    p.ohc_loss_db[i] = std::min(2.0 / 3.0 * interp[i], cap);
    p.ihc_loss_db[i] = interp[i] - p.ohc_loss_db[i];
    p.ohc_linear[i] = std::pow(10.0, -p.ohc_loss_db[i] / 20.0);
    p.ihc_gain[i] = std::pow(10.0, -p.ihc_loss_db[i] / 20.0);
  }
  return p;
}

// ---- AuditoryModel -------------------------------------------------------------

AuditoryModel::AuditoryModel(DrnlBank bank, std::vector<double> ome_taps)
    : bank_(std::move(bank)), ome_taps_(std::move(ome_taps)) {
  if (ome_taps_.size() != kFirTaps)
    throw ConfigError("outer/middle-ear kernel must have " +
                      std::to_string(kFirTaps) + " taps");
  ome_k_ = ad::constant({static_cast<int64_t>(ome_taps_.size())}, ome_taps_);
  for (int i = 0; i < bank_.num_channels(); ++i) {
    // Linear-path gain is folded into its gammatone kernel.
    std::vector<double> lk = bank_.lin_gt_kernel(i);
    for (double& v : lk) v *= bank_.channel(i).lin_gain;
    lin_gt_gain_k_.push_back(ad::constant({kFirTaps}, std::move(lk)));
    lin_lp_k_.push_back(ad::constant({kFirTaps}, bank_.lin_lp_kernel(i)));
    gt1_k_.push_back(ad::constant({kFirTaps}, bank_.nlin_gt1_kernel(i)));
    gt2_k_.push_back(ad::constant({kFirTaps}, bank_.nlin_gt2_kernel(i)));
    nlp_k_.push_back(ad::constant({kFirTaps}, bank_.nlin_lp_kernel(i)));
  }
}

AuditoryModel AuditoryModel::load_default() {
  return AuditoryModel(DrnlBank::load_default(),
                       load_ome_kernel(data_file("ome_fir_16k.tsv")));
}

ad::Tensor AuditoryModel::outer_middle_ear(const ad::Tensor& x) const {
  return ad::fir_convolve(x, ome_k_);
}

ad::Tensor AuditoryModel::drnl_linear_path(const ad::Tensor& x, int ch) const {
  return ad::fir_convolve(ad::fir_convolve(x, lin_gt_gain_k_[ch]), lin_lp_k_[ch]);
}

ad::Tensor AuditoryModel::drnl_nonlinear_path(const ad::Tensor& x, int ch,
                                              double ohc_linear) const {
  if (!(ohc_linear > 0.0 && ohc_linear <= 1.0))
    throw ValidationError("drnl: ohc_linear must be in (0, 1]");
  const DrnlChannelParams& p = bank_.channel(ch);
  ad::Tensor g = ad::fir_convolve(x, gt1_k_[ch]);
  // Broken stick: sgn(g) * min(a * Delta_OHC * |g|, b * |g|^c), with |g|
  // floored so the kink stays differentiable.
  ad::Tensor absg = ad::abs_floored(g, kBrokenStickEps);
  ad::Tensor branch_a = ad::mul_scalar(absg, p.a * ohc_linear);
  ad::Tensor branch_b = ad::mul_scalar(ad::pow_scalar(absg, p.c), p.b);
  ad::Tensor h = ad::mul(ad::div(g, absg), ad::minimum(branch_a, branch_b));
  return ad::fir_convolve(ad::fir_convolve(h, gt2_k_[ch]), nlp_k_[ch]);
}

ad::Tensor AuditoryModel::drnl_channel(const ad::Tensor& x, int ch,
                                       double ohc_linear) const {
  return ad::add(drnl_linear_path(x, ch), drnl_nonlinear_path(x, ch, ohc_linear));
}

ad::Tensor AuditoryModel::ihc_stage(const ad::Tensor& x, double ihc_gain) {
  if (!(ihc_gain > 0.0 && ihc_gain <= 1.0))
    throw ValidationError("ihc_stage: gain must be in (0, 1]");
  ad::Tensor r = ad::relu(x);
  return ihc_gain == 1.0 ? r : ad::mul_scalar(r, ihc_gain);
}

ad::Tensor AuditoryModel::compress(const ad::Tensor& u) {
  for (double v : u.values())
    if (v < 0.0) throw DomainError("compress: negative input");
  return ad::log1p(ad::mul_scalar(u, 1.0 / kCompressionU0));
}

ad::Tensor AuditoryModel::run(const ad::Tensor& x, const ListenerProfile& p) const {
  const int n = bank_.num_channels();
  if (static_cast<int>(p.ohc_linear.size()) != n)
    throw ValidationError("listener profile does not match the filterbank");
  ad::Tensor stapes = outer_middle_ear(x);
  std::vector<ad::Tensor> rows;
  rows.reserve(n);
  for (int ch = 0; ch < n; ++ch) {
    ad::Tensor y = drnl_channel(stapes, ch, p.ohc_linear[ch]);
    ad::Tensor u = ihc_stage(y, p.ihc_gain[ch]);
    rows.push_back(compress(u));
  }
  return ad::stack_rows(rows);
}

ad::Tensor AuditoryModel::run_nh(const ad::Tensor& x) const {
  return run(x, ListenerProfile::normal_hearing(bank_.num_channels()));
}

std::vector<double> AuditoryModel::run_plain(const std::vector<double>& x,
                                             const ListenerProfile& p) const {
  ad::Tensor t = ad::constant({static_cast<int64_t>(x.size())}, x);
  return run(t, p).values();
}

std::vector<double> load_ome_kernel(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open outer/middle-ear kernel file: " + path);
  std::vector<double> taps;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    taps.push_back(std::stod(line));
  }
  if (taps.size() != kFirTaps)
    throw FormatError("outer/middle-ear kernel in " + path + " has " +
                      std::to_string(taps.size()) + " taps, expected " +
                      std::to_string(kFirTaps));
  return taps;
}

}  // namespace maskaid
