#pragma once

#include <span>

namespace intergat {

struct MetricReport {
  double rmse = 0.0;
  double mae = 0.0;
  double accuracy = 0.0;  // 1 - ‖Y - Ŷ‖_F / ‖Y‖_F
  double r2 = 0.0;        // 1 - SSE / Σ(Y - mean Y)²
  double var = 0.0;       // 1 - Var(Y - Ŷ) / Var(Y)
};

/// All five metrics over flattened, already de-normalized values.
/// Throws UsageError when empty or of unequal length.
MetricReport compute_metrics(std::span<const double> truth, std::span<const double> pred);

}  // namespace intergat
