#pragma once

#include <cstddef>
#include <span>

namespace dtagraph::metrics {

/// Evaluation record for one prediction list.
struct MetricsReport {
  double mse = 0.0;
  double rmse = 0.0;
  double ci = 0.0;
  double rm2 = 0.0;
  double spearman = 0.0;
  double pearson = 0.0;
  std::size_t n = 0;
};

double mse(std::span<const double> predicted, std::span<const double> target);
double rmse(std::span<const double> predicted, std::span<const double> target);

/// Fraction of target-ordered pairs (y_i > y_j) whose predictions keep the
/// order; prediction ties count one half. O(n log n).
/// Throws UndefinedMetric when no pair has distinct targets.
double concordance_index(std::span<const double> predicted, std::span<const double> target);

/// Population-convention Pearson correlation.
double pearson(std::span<const double> predicted, std::span<const double> target);

/// Pearson correlation of average ranks.
double spearman(std::span<const double> predicted, std::span<const double> target);

/// r^2 * (1 - sqrt(|r^2 - r0^2|)) with r0^2 = (sum p*y)^2 / (sum p^2 * sum y^2),
/// the coefficient of determination of the fit through the origin.
double rm2(std::span<const double> predicted, std::span<const double> target);

/// All six metrics. Correlation terms that are undefined for the input
/// (constant vectors, equal targets) come back as NaN.
MetricsReport evaluate_all(std::span<const double> predicted, std::span<const double> target);

}  // namespace dtagraph::metrics
