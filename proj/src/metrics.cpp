#include "mob/metrics.hpp"

#include <cmath>
#include <cstddef>

#include "mob/errors.hpp"

namespace mob::metrics {

namespace {

void require_same_length(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty())
        throw LengthMismatch("metric inputs must be non-empty and of equal length");
}

} // namespace

double mae(std::span<const double> y_ref, std::span<const double> y_hat) {
    require_same_length(y_ref, y_hat);
    double acc = 0.0;
    for (std::size_t i = 0; i < y_ref.size(); ++i) acc += std::abs(y_ref[i] - y_hat[i]);
    return acc / static_cast<double>(y_ref.size());
}

double rmse(std::span<const double> y_ref, std::span<const double> y_hat) {
    require_same_length(y_ref, y_hat);
    double acc = 0.0;
    for (std::size_t i = 0; i < y_ref.size(); ++i) {
        const double d = y_ref[i] - y_hat[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(y_ref.size()));
}

double rmae(std::span<const double> y_ref, std::span<const double> y_hat) {
    require_same_length(y_ref, y_hat);
    const std::size_t m = y_ref.size();
    double mean = 0.0;
    for (double v : y_ref) mean += v;
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (double v : y_ref) var += (v - mean) * (v - mean);
    var /= static_cast<double>(m); // population convention
    if (var <= 0.0) throw ZeroSpread("reference values have zero spread");

    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, std::abs(y_ref[i] - y_hat[i]));
    return worst / std::sqrt(var);
}

double r2(std::span<const double> y_ref, std::span<const double> y_hat) {
    require_same_length(y_ref, y_hat);
    double mean = 0.0;
    for (double v : y_ref) mean += v;
    mean /= static_cast<double>(y_ref.size());

    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < y_ref.size(); ++i) {
        ss_res += (y_ref[i] - y_hat[i]) * (y_ref[i] - y_hat[i]);
        ss_tot += (y_ref[i] - mean) * (y_ref[i] - mean);
    }
    if (ss_tot <= 0.0) throw ZeroSpread("reference values have zero variance");
    return 1.0 - ss_res / ss_tot;
}

ClassAccuracies class_accuracies(std::span<const int> labels_ref,
                                 std::span<const int> labels_hat) {
    if (labels_ref.size() != labels_hat.size() || labels_ref.empty())
        throw LengthMismatch("label vectors must be non-empty and of equal length");

    std::size_t n_pos = 0, n_neg = 0, hit_pos = 0, hit_neg = 0;
    for (std::size_t i = 0; i < labels_ref.size(); ++i) {
        if (labels_ref[i] == 1) {
            ++n_pos;
            if (labels_hat[i] == 1) ++hit_pos;
        } else {
            ++n_neg;
            if (labels_hat[i] != 1) ++hit_neg;
        }
    }
    ClassAccuracies out;
    if (n_pos > 0) out.positive = 100.0 * static_cast<double>(hit_pos) / n_pos;
    if (n_neg > 0) out.negative = 100.0 * static_cast<double>(hit_neg) / n_neg;
    return out;
}

} // namespace mob::metrics
