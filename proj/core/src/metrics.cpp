#include "intergat/metrics.hpp"

#include <cmath>

#include "intergat/error.hpp"

namespace intergat {

MetricReport compute_metrics(std::span<const double> truth, std::span<const double> pred) {
  if (truth.size() != pred.size()) throw UsageError("metrics: truth and prediction lengths differ");
  if (truth.empty()) throw UsageError("metrics: no values to score");
  const double n = static_cast<double>(truth.size());
  double sse = 0.0, sae = 0.0, sum_y = 0.0, sum_y2 = 0.0, sum_e = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double e = truth[i] - pred[i];
    sse += e * e;
    sae += std::abs(e);
    sum_y += truth[i];
    sum_y2 += truth[i] * truth[i];
    sum_e += e;
  }
  const double mean_y = sum_y / n;
  const double mean_e = sum_e / n;
  double ss_tot = 0.0, ss_res_centered = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double dy = truth[i] - mean_y;
    const double de = (truth[i] - pred[i]) - mean_e;
    ss_tot += dy * dy;
    ss_res_centered += de * de;
  }
  MetricReport r;
  r.rmse = std::sqrt(sse / n);
  r.mae = sae / n;
  r.accuracy = sum_y2 > 0.0 ? 1.0 - std::sqrt(sse) / std::sqrt(sum_y2) : 0.0;
  r.r2 = ss_tot > 0.0 ? 1.0 - sse / ss_tot : 0.0;
  r.var = ss_tot > 0.0 ? 1.0 - ss_res_centered / ss_tot : 0.0;
  return r;
}

}  // namespace intergat
