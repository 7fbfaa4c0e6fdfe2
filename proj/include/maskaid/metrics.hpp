// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#pragma once

#include <string>
#include <vector>

#include "maskaid/auditory.hpp"
#include "maskaid/signal.hpp"

namespace maskaid {

// Scale-variant signal-to-distortion ratio in dB:
// 10*log10(||y||^2 / ||y - yhat||^2), denominator floored at 1e-12 * ||y||^2.
double sdr_db(const AudioSignal& yhat, const AudioSignal& y);

// Per-sample sum of the model output across channels.
std::vector<double> population_response(const AuditoryModel& m,
                                        const AudioSignal& x,
                                        const ListenerProfile& p);

// 100 * RMSE(r_p, r_hat_p) / max(r_p), where r_p is the NH response to the
// reference and r_hat_p the impaired response to the processed signal.
double nrmse_percent(const AuditoryModel& m, const AudioSignal& yhat,
                     const AudioSignal& y, const ListenerProfile& p);

struct MetricsRow {
  std::string scene_id;
  std::string audiogram_id;
  double alpha_nr = 0.0;
  double alpha_hlc = 0.0;
  std::string system;
  double sdr = 0.0;
  double nrmse = 0.0;
};

void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows);

}  // namespace maskaid
