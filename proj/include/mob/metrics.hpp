#pragma once

#include <optional>
#include <span>

namespace mob::metrics {

/// Mean absolute error between reference and surrogate values.
double mae(std::span<const double> y_ref, std::span<const double> y_hat);

/// Root mean squared error.
double rmse(std::span<const double> y_ref, std::span<const double> y_hat);

/// Maximum absolute error divided by the population standard deviation of the
/// reference values; throws ZeroSpread when that deviation vanishes.
double rmae(std::span<const double> y_ref, std::span<const double> y_hat);

/// Coefficient of determination about the reference mean.
double r2(std::span<const double> y_ref, std::span<const double> y_hat);

/// Percentage of correctly predicted points per class (1 = unstable, 0 =
/// stable). A component is empty when its class is absent from the reference.
struct ClassAccuracies {
    std::optional<double> positive; ///< % of reference class-1 points predicted 1
    std::optional<double> negative; ///< % of reference class-0 points predicted 0
};
ClassAccuracies class_accuracies(std::span<const int> labels_ref,
                                 std::span<const int> labels_hat);

} // namespace mob::metrics
