// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#pragma once

#include <string>
#include <vector>

#include "maskaid/auditory.hpp"
#include "maskaid/tensor.hpp"

namespace maskaid {

enum class LossKind { NR, HLC, NRHLC, CNRHLC, SDR };
enum class ElemLoss { MAE, MSE };

std::string loss_kind_name(LossKind k);
LossKind loss_kind_from_name(const std::string& s);
std::string elem_loss_name(ElemLoss e);
ElemLoss elem_loss_from_name(const std::string& s);

struct LossReport {
  double l_nr = 0.0, l_hlc = 0.0;
  double u_nr = 0.0, u_hlc = 0.0;
  double combined = 0.0;
  LossKind kind = LossKind::NR;
  ElemLoss elem = ElemLoss::MAE;
};

// Combined multi-task objective, recomputed from the fields; equals
// l_nr*e^(-u_nr) + u_nr + l_hlc*e^(-u_hlc) + u_hlc.
double cnrhlc_closed_form(double l_nr, double l_hlc, double u_nr, double u_hlc);

// Mean over all entries of |A - B| or (A - B)^2.
ad::Tensor elementwise_loss(ElemLoss kind, const ad::Tensor& a, const ad::Tensor& b);

// Task losses. The *_with_target variants accept a precomputed target
// response (training caches these across epochs).
ad::Tensor loss_nr(const AuditoryModel& m, ElemLoss e, const ad::Tensor& yhat_nr,
                   const std::vector<double>& y);
ad::Tensor loss_hlc(const AuditoryModel& m, ElemLoss e, const ad::Tensor& yhat_hlc,
                    const std::vector<double>& x, const ListenerProfile& p);
ad::Tensor loss_nrhlc(const AuditoryModel& m, ElemLoss e, const ad::Tensor& yhat,
                      const std::vector<double>& y, const ListenerProfile& p);
ad::Tensor loss_nr_with_target(const AuditoryModel& m, ElemLoss e,
                               const ad::Tensor& yhat_nr, const ad::Tensor& target);
ad::Tensor loss_hlc_with_target(const AuditoryModel& m, ElemLoss e,
                                const ad::Tensor& yhat_hlc, const ad::Tensor& target,
                                const ListenerProfile& p);

// Uncertainty-weighted multi-task objective over scalar tensors.
ad::Tensor loss_cnrhlc(const ad::Tensor& l_nr, const ad::Tensor& l_hlc,
                       const ad::Tensor& u_nr, const ad::Tensor& u_hlc);

// Scale-variant SDR as a minimization objective:
// -10*log10(||y||^2 / (||y - yhat||^2 + eps*||y||^2)), eps = 1e-12.
ad::Tensor loss_sdr(const ad::Tensor& yhat, const std::vector<double>& y);

inline constexpr double kSdrEpsRel = 1e-12;

}  // namespace maskaid
