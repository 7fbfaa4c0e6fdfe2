// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#include "maskaid/losses.hpp"

#include <cmath>

#include "maskaid/errors.hpp"

namespace maskaid {

std::string loss_kind_name(LossKind k) {
  switch (k) {
    case LossKind::NR: return "NR";
    case LossKind::HLC: return "HLC";
    case LossKind::NRHLC: return "NRHLC";
    case LossKind::CNRHLC: return "CNRHLC";
    case LossKind::SDR: return "SDR";
  }
  throw StateError("unknown loss kind");
}

LossKind loss_kind_from_name(const std::string& s) {
  if (s == "NR") return LossKind::NR;
  if (s == "HLC") return LossKind::HLC;
  if (s == "NRHLC") return LossKind::NRHLC;
  if (s == "CNRHLC") return LossKind::CNRHLC;
  if (s == "SDR") return LossKind::SDR;
  throw ValidationError("unknown loss kind: " + s);
}

std::string elem_loss_name(ElemLoss e) {
  return e == ElemLoss::MAE ? "MAE" : "MSE";
}

ElemLoss elem_loss_from_name(const std::string& s) {
  if (s == "MAE") return ElemLoss::MAE;
  if (s == "MSE") return ElemLoss::MSE;
  throw ValidationError("unknown elementwise loss: " + s);
}

double cnrhlc_closed_form(double l_nr, double l_hlc, double u_nr, double u_hlc) {
  return l_nr * std::exp(-u_nr) + u_nr + l_hlc * std::exp(-u_hlc) + u_hlc;
}

ad::Tensor elementwise_loss(ElemLoss kind, const ad::Tensor& a, const ad::Tensor& b) {
  if (a.shape() != b.shape())
    throw ShapeError("elementwise_loss: shape mismatch " + ad::shape_str(a.shape()) +
                     " vs " + ad::shape_str(b.shape()));
  ad::Tensor d = ad::sub(a, b);
  if (kind == ElemLoss::MAE) return ad::mean(ad::abs(d));
  return ad::mean(ad::mul(d, d));
}

namespace {

ad::Tensor as_constant(const std::vector<double>& x) {
  return ad::constant({static_cast<int64_t>(x.size())}, x);
}

}  // namespace

ad::Tensor loss_nr(const AuditoryModel& m, ElemLoss e, const ad::Tensor& yhat_nr,
                   const std::vector<double>& y) {
  return loss_nr_with_target(m, e, yhat_nr, m.run_nh(as_constant(y)));
}

ad::Tensor loss_nr_with_target(const AuditoryModel& m, ElemLoss e,
                               const ad::Tensor& yhat_nr, const ad::Tensor& target) {
  return elementwise_loss(e, m.run_nh(yhat_nr), target);
}

ad::Tensor loss_hlc(const AuditoryModel& m, ElemLoss e, const ad::Tensor& yhat_hlc,
                    const std::vector<double>& x, const ListenerProfile& p) {
  return loss_hlc_with_target(m, e, yhat_hlc, m.run_nh(as_constant(x)), p);
}

ad::Tensor loss_hlc_with_target(const AuditoryModel& m, ElemLoss e,
                                const ad::Tensor& yhat_hlc, const ad::Tensor& target,
                                const ListenerProfile& p) {
  return elementwise_loss(e, m.run(yhat_hlc, p), target);
}

ad::Tensor loss_nrhlc(const AuditoryModel& m, ElemLoss e, const ad::Tensor& yhat,
                      const std::vector<double>& y, const ListenerProfile& p) {
  return elementwise_loss(e, m.run(yhat, p), m.run_nh(as_constant(y)));
}

ad::Tensor loss_cnrhlc(const ad::Tensor& l_nr, const ad::Tensor& l_hlc,
                       const ad::Tensor& u_nr, const ad::Tensor& u_hlc) {
  ad::Tensor term_nr = ad::add(ad::mul(l_nr, ad::exp(ad::neg(u_nr))), u_nr);
  ad::Tensor term_hlc = ad::add(ad::mul(l_hlc, ad::exp(ad::neg(u_hlc))), u_hlc);
  return ad::add(term_nr, term_hlc);
}

ad::Tensor loss_sdr(const ad::Tensor& yhat, const std::vector<double>& y) {
  double ny = 0.0;
  for (double v : y) ny += v * v;
  if (ny == 0.0) throw ValidationError("loss_sdr: reference signal is all zero");
  if (yhat.rank() != 1 || yhat.numel() != static_cast<int64_t>(y.size()))
    throw ShapeError("loss_sdr: length mismatch");
  ad::Tensor d = ad::sub(yhat, as_constant(y));
  ad::Tensor den = ad::add_scalar(ad::sum(ad::mul(d, d)), kSdrEpsRel * ny);
  // -10*log10(ny / den) = 10/ln(10) * log(den) - 10*log10(ny)
  return ad::add_scalar(ad::mul_scalar(ad::log(den), 10.0 / M_LN10),
                        -10.0 * std::log10(ny));
}

}  // namespace maskaid
