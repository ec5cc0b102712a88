#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cstdint>
#include <json.hpp>

#include "mob/errors.hpp"

namespace mob::kriging {

/// Observations in the normalized unit cube.
struct DesignSet {
    Eigen::MatrixXd points; ///< m x n, all coordinates in [0, 1]
    Eigen::VectorXd values; ///< m responses

    int size() const { return static_cast<int>(points.rows()); }
    int dimension() const { return static_cast<int>(points.cols()); }
};

/// Throws std::invalid_argument if the design cannot be fitted: fewer than two
/// points, coordinates outside the unit cube, or near-duplicate rows (closer
/// than 1e-10).
void validate_for_fit(const DesignSet& design);

inline constexpr double kLogLengthscaleMin = -3.0;
inline constexpr double kLogLengthscaleMax = 2.0;

/// Per-dimension correlation lengthscales, each within [1e-3, 1e2].
struct Hyperparameters {
    Eigen::VectorXd lengthscales;
};

/// Matern 3/2 correlation: product over dimensions of
/// (1 + sqrt(3) d_i / l_i) exp(-sqrt(3) d_i / l_i).
double matern32(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Hyperparameters& theta);

/// Fitted ordinary-kriging surrogate. Immutable once built; predict and
/// loocv_squared_errors are read-only and safe to call concurrently.
struct KrigingModel {
    DesignSet design;
    Hyperparameters theta;
    double mu_hat = 0.0;     ///< GLS estimate of the constant trend
    double sigma2_hat = 0.0; ///< process variance estimate
    double nugget = 0.0;     ///< diagonal regularization actually used
    double psi = 0.0;        ///< reduced likelihood sigma2 * det(R)^(1/m)

    Eigen::LLT<Eigen::MatrixXd> chol; ///< factor of R + nugget I
    Eigen::VectorXd alpha_weights;    ///< R^-1 (y - mu 1)
    Eigen::VectorXd rinv_ones;        ///< R^-1 1
    double ones_rinv_ones = 0.0;
};

/// Assemble and factorize the correlation matrix at fixed hyperparameters.
/// The nugget starts at nugget_start and escalates tenfold (up to 1e-6) if the
/// factorization reports failure; SingularCorrelation afterwards.
KrigingModel fit_given_theta(const DesignSet& design, const Hyperparameters& theta,
                             double nugget_start = 1e-10);

struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
};

/// BLUP mean and variance at x (clamped into the unit cube with a warning if
/// outside). Variance is floored at zero.
Prediction predict(const KrigingModel& model, const Eigen::VectorXd& x);

/// Fast leave-one-out squared errors without refitting, conditioned on the
/// fixed trend estimate: e_i = [R^-1 (y - mu 1)]_i / [R^-1]_ii, squared.
Eigen::VectorXd loocv_squared_errors(const KrigingModel& model);

/// Hybrid hyperparameter search settings: particle-swarm global phase plus
/// compass pattern-search refinement of the incumbent.
struct PSOConfig {
    int swarm_size = 40;
    int iterations = 60;
    double inertia = 0.72;
    double cognitive = 1.49;
    double social = 1.49;
    int pattern_steps = 50;
    std::uint64_t seed = 0;
};

/// Minimize the reduced likelihood over log10-lengthscale space and return the
/// model fitted at the optimum. Deterministic for a given seed. warm_start,
/// when given, seeds one particle with the incumbent lengthscales.
KrigingModel optimize_hyperparameters(const DesignSet& design, const PSOConfig& cfg,
                                      const Hyperparameters* warm_start = nullptr);

/// Versioned JSON round trip (design, lengthscales, trend, variance, nugget).
nlohmann::json to_json(const KrigingModel& model);
KrigingModel model_from_json(const nlohmann::json& doc);

} // namespace mob::kriging
