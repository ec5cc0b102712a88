#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "mob/kriging.hpp"

namespace mob::sampling {

/// Physical bounds of the free parameters.
struct Domain {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    int dimension() const { return static_cast<int>(lower.size()); }
    bool valid() const {
        return lower.size() == upper.size() && (upper.array() > lower.array()).all();
    }
};

/// Componentwise affine map into the unit cube; throws OutOfDomain when a
/// coordinate lies outside its bounds.
Eigen::VectorXd normalize(const Eigen::VectorXd& x, const Domain& d);
Eigen::VectorXd denormalize(const Eigen::VectorXd& u, const Domain& d);

/// Deterministic translational-propagation Latin hypercube: m points in the
/// unit cube, one per bin and dimension, at bin centers.
Eigen::MatrixXd tplhd(int m, int n);

/// Uniform random candidates for discretized acquisition maximization.
struct CandidatePool {
    Eigen::MatrixXd points; ///< rows in the unit cube
    std::uint64_t seed = 0;
};

/// Fresh seeded pool; size defaults to 2000 * n when size == 0.
CandidatePool make_pool(int n, std::uint64_t seed, int size = 0);

/// Per-pool-point nearest design index plus per-design occupancy counts
/// (a Monte-Carlo picture of the Voronoi tessellation).
struct VoronoiAssignment {
    std::vector<int> nearest; ///< pool row -> design row
    std::vector<int> counts;  ///< design row -> assigned pool points
};
VoronoiAssignment voronoi_assign(const Eigen::MatrixXd& design, const Eigen::MatrixXd& pool);

/// Candidates closer than this (normalized) to an existing sample are never
/// returned by any acquisition.
inline constexpr double kDuplicateGuard = 1e-6;

/// Balance-factor state of the expected-prediction-error scheme. The state
/// machine requires report_truth between consecutive acquisitions.
struct MepeState {
    double alpha = 0.5;
    int acquisitions = 0;     ///< completed acquisition count (q - 1)
    bool pending_truth = false;
    double prev_loocv = 0.0;  ///< LOOCV estimate assigned to the last point
    double prev_true_sq = 0.0;
};

/// Maximize EPE(x) = alpha * e2(x) + (1 - alpha) * variance(x), where e2 is the
/// squared LOOCV error of the candidate's Voronoi cell owner. Updates the
/// balance factor from the previous step's reported truth before selecting.
Eigen::VectorXd mepe_next(const kriging::KrigingModel& model, MepeState& state,
                          const CandidatePool& pool);

/// Report the surrogate error observed at the previously acquired point
/// (e_true = y_observed - predicted mean before refit).
void mepe_report_truth(MepeState& state, double e_true);

/// Expected improvement for global fit: squared deviation from the nearest
/// observed response plus prediction variance; ties broken by larger variance
/// then lexicographic order.
Eigen::VectorXd eigf_next(const kriging::KrigingModel& model, const CandidatePool& pool);

/// Random-switching state of the Voronoi classification scheme.
struct MivorState {
    double rate = 0.4;            ///< current exploration rate
    double initial_rate = 0.4;
    double decrease_factor = 1.1;
    std::mt19937_64 rng{0};
    bool pending_label = false;
    bool last_was_exploration = false;

    explicit MivorState(std::uint64_t seed = 0) : rng(seed) {}
};

/// One acquisition of the Voronoi-based classification scheme. Exploration
/// (u < rate, or forced while all labels agree) picks the emptiest-covered
/// region: the farthest pool point inside the largest Voronoi cell.
/// Exploitation targets the predicted class boundary near chaotic samples,
/// weighting closeness to the zero level set by distance from the design.
Eigen::VectorXd mivor_next(const kriging::KrigingModel& model, const std::vector<int>& labels,
                           MivorState& state, const CandidatePool& pool);

/// Report the class label observed at the point returned by mivor_next;
/// updates the exploration rate.
void mivor_report_label(MivorState& state, int new_label);

} // namespace mob::sampling
