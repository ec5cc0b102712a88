#include "mob/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mob/errors.hpp"

namespace mob::sampling {

namespace {

double min_distance_to(const Eigen::MatrixXd& design, const Eigen::VectorXd& x) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < design.rows(); ++i)
        best = std::min(best, (design.row(i).transpose() - x).norm());
    return best;
}

std::vector<int> admissible_rows(const Eigen::MatrixXd& design, const Eigen::MatrixXd& pool) {
    std::vector<int> rows;
    rows.reserve(pool.rows());
    for (int i = 0; i < pool.rows(); ++i)
        if (min_distance_to(design, pool.row(i).transpose()) >= kDuplicateGuard)
            rows.push_back(i);
    if (rows.empty()) throw EmptyPool("no admissible candidate in the pool");
    return rows;
}

} // namespace

Eigen::VectorXd normalize(const Eigen::VectorXd& x, const Domain& d) {
    Eigen::VectorXd u(x.size());
    for (int i = 0; i < x.size(); ++i) {
        if (x(i) < d.lower(i) || x(i) > d.upper(i))
            throw OutOfDomain("coordinate " + std::to_string(i) + " = " +
                              std::to_string(x(i)) + " outside bounds");
        u(i) = (x(i) - d.lower(i)) / (d.upper(i) - d.lower(i));
    }
    return u;
}

Eigen::VectorXd denormalize(const Eigen::VectorXd& u, const Domain& d) {
    return d.lower.array() + u.array() * (d.upper.array() - d.lower.array());
}

Eigen::MatrixXd tplhd(int m, int n) {
    // smallest block count nd with nd^n >= m
    int nd = 1;
    auto pow_int = [](long long base, int exp) {
        long long v = 1;
        for (int i = 0; i < exp; ++i) v *= base;
        return v;
    };
    while (pow_int(nd, n) < m) ++nd;
    const long long np = pow_int(nd, n);

    // translational propagation from a one-point seed: point j with base-nd
    // digits (d_0 .. d_{n-1}) lands on level d_i*nd^(n-1) + packed(other
    // digits) in dimension i, which is a Latin design on np levels
    Eigen::MatrixXi levels(np, n);
    for (long long j = 0; j < np; ++j) {
        std::vector<int> digits(n);
        long long rem = j;
        for (int a = 0; a < n; ++a) {
            digits[a] = static_cast<int>(rem % nd);
            rem /= nd;
        }
        for (int i = 0; i < n; ++i) {
            long long level = static_cast<long long>(digits[i]) * pow_int(nd, n - 1);
            long long stride = 1;
            for (int a = 0; a < n; ++a) {
                if (a == i) continue;
                level += digits[a] * stride;
                stride *= nd;
            }
            levels(j, i) = static_cast<int>(level);
        }
    }

    // trim the points farthest from the cube center, deterministically
    std::vector<long long> order(np);
    for (long long j = 0; j < np; ++j) order[j] = j;
    const double center = 0.5 * static_cast<double>(np - 1);
    auto dist2 = [&](long long j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = levels(j, i) - center;
            s += d * d;
        }
        return s;
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](long long a, long long b) { return dist2(a) < dist2(b); });
    order.resize(m);
    std::sort(order.begin(), order.end());

    // re-rank the surviving levels per dimension and place points at bin centers
    Eigen::MatrixXd points(m, n);
    for (int i = 0; i < n; ++i) {
        std::vector<int> idx(m);
        for (int k = 0; k < m; ++k) idx[k] = k;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            return levels(order[a], i) < levels(order[b], i);
        });
        for (int rank = 0; rank < m; ++rank)
            points(idx[rank], i) = (rank + 0.5) / m;
    }
    return points;
}

CandidatePool make_pool(int n, std::uint64_t seed, int size) {
    if (size <= 0) size = 2000 * n;
    CandidatePool pool;
    pool.seed = seed;
    pool.points.resize(size, n);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < n; ++j) pool.points(i, j) = unit(rng);
    return pool;
}

VoronoiAssignment voronoi_assign(const Eigen::MatrixXd& design, const Eigen::MatrixXd& pool) {
    VoronoiAssignment out;
    out.nearest.resize(pool.rows());
    out.counts.assign(design.rows(), 0);
    for (int i = 0; i < pool.rows(); ++i) {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int k = 0; k < design.rows(); ++k) {
            const double d = (pool.row(i) - design.row(k)).norm();
            if (d < best_d) {
                best_d = d;
                best = k;
            }
        }
        out.nearest[i] = best;
        ++out.counts[best];
    }
    return out;
}

Eigen::VectorXd mepe_next(const kriging::KrigingModel& model, MepeState& state,
                          const CandidatePool& pool) {
    if (state.pending_truth)
        throw std::logic_error("mepe_next called before mepe_report_truth");

    if (state.acquisitions == 0) {
        state.alpha = 0.5;
    } else if (state.prev_true_sq == 0.0) {
        state.alpha = 0.0;
    } else if (state.prev_loocv <= 0.0) {
        state.alpha = 0.99;
    } else {
        state.alpha = 0.99 * std::min(0.5 * state.prev_true_sq / state.prev_loocv, 1.0);
    }

    const Eigen::MatrixXd& design = model.design.points;
    const Eigen::VectorXd e2 = kriging::loocv_squared_errors(model);
    const VoronoiAssignment cells = voronoi_assign(design, pool.points);
    const std::vector<int> rows = admissible_rows(design, pool.points);

    int best_row = -1;
    double best_epe = -std::numeric_limits<double>::infinity();
    double best_dist = -1.0;
    double chosen_loocv = 0.0;
    for (int i : rows) {
        const Eigen::VectorXd x = pool.points.row(i).transpose();
        const double cell_e2 = e2(cells.nearest[i]);
        const double epe =
            state.alpha * cell_e2 + (1.0 - state.alpha) * kriging::predict(model, x).variance;
        const double dist = min_distance_to(design, x);
        if (epe > best_epe || (epe == best_epe && dist > best_dist)) {
            best_epe = epe;
            best_dist = dist;
            best_row = i;
            chosen_loocv = cell_e2;
        }
    }

    state.prev_loocv = chosen_loocv;
    state.pending_truth = true;
    ++state.acquisitions;
    return pool.points.row(best_row).transpose();
}

void mepe_report_truth(MepeState& state, double e_true) {
    if (!state.pending_truth)
        throw std::logic_error("mepe_report_truth without a pending acquisition");
    state.prev_true_sq = e_true * e_true;
    state.pending_truth = false;
}

Eigen::VectorXd eigf_next(const kriging::KrigingModel& model, const CandidatePool& pool) {
    const Eigen::MatrixXd& design = model.design.points;
    const VoronoiAssignment cells = voronoi_assign(design, pool.points);
    const std::vector<int> rows = admissible_rows(design, pool.points);

    int best_row = -1;
    double best_ei = -std::numeric_limits<double>::infinity();
    double best_var = -1.0;
    for (int i : rows) {
        const Eigen::VectorXd x = pool.points.row(i).transpose();
        const auto pred = kriging::predict(model, x);
        const double dev = pred.mean - model.design.values(cells.nearest[i]);
        const double ei = dev * dev + pred.variance;
        bool take = ei > best_ei;
        if (ei == best_ei) {
            if (pred.variance > best_var) take = true;
            else if (pred.variance == best_var && best_row >= 0) {
                // lexicographic order on coordinates
                for (int d = 0; d < x.size(); ++d) {
                    if (x(d) != pool.points(best_row, d)) {
                        take = x(d) < pool.points(best_row, d);
                        break;
                    }
                }
            }
        }
        if (take) {
            best_ei = ei;
            best_var = pred.variance;
            best_row = i;
        }
    }
    return pool.points.row(best_row).transpose();
}

Eigen::VectorXd mivor_next(const kriging::KrigingModel& model, const std::vector<int>& labels,
                           MivorState& state, const CandidatePool& pool) {
    if (state.pending_label)
        throw std::logic_error("mivor_next called before mivor_report_label");
    const Eigen::MatrixXd& design = model.design.points;
    if (static_cast<int>(labels.size()) != design.rows())
        throw std::invalid_argument("one label per design point required");

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = unit(state.rng);

    const bool all_same =
        std::all_of(labels.begin(), labels.end(), [&](int l) { return l == labels.front(); });
    bool explore = all_same || u < state.rate;

    const std::vector<int> rows = admissible_rows(design, pool.points);
    const VoronoiAssignment cells = voronoi_assign(design, pool.points);

    int best_row = -1;
    if (!explore) {
        // boundary exploitation: candidates live in chaotic cells or where the
        // two nearest samples disagree; prefer closeness to the predicted zero
        // level set, weighted by room from existing samples
        double best_score = -std::numeric_limits<double>::infinity();
        for (int i : rows) {
            const int owner = cells.nearest[i];
            bool candidate = labels[owner] == 1;
            if (!candidate) {
                // second-nearest design point
                double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
                int n1 = -1, n2 = -1;
                for (int k = 0; k < design.rows(); ++k) {
                    const double d = (pool.points.row(i) - design.row(k)).norm();
                    if (d < d1) {
                        d2 = d1; n2 = n1;
                        d1 = d; n1 = k;
                    } else if (d < d2) {
                        d2 = d; n2 = k;
                    }
                }
                candidate = n2 >= 0 && labels[n1] != labels[n2];
            }
            if (!candidate) continue;
            const Eigen::VectorXd x = pool.points.row(i).transpose();
            const double mean = kriging::predict(model, x).mean;
            const double score =
                min_distance_to(design, x) / std::max(std::abs(mean), 1e-12);
            if (score > best_score) {
                best_score = score;
                best_row = i;
            }
        }
        if (best_row < 0) explore = true; // no boundary candidate left
    }

    if (explore) {
        // largest Voronoi cell, then the admissible point farthest from the design
        std::vector<int> cell_order(design.rows());
        for (int k = 0; k < design.rows(); ++k) cell_order[k] = k;
        std::stable_sort(cell_order.begin(), cell_order.end(),
                         [&](int a, int b) { return cells.counts[a] > cells.counts[b]; });
        for (int cell : cell_order) {
            double best_dist = -1.0;
            for (int i : rows) {
                if (cells.nearest[i] != cell) continue;
                const double d = min_distance_to(design, pool.points.row(i).transpose());
                if (d > best_dist) {
                    best_dist = d;
                    best_row = i;
                }
            }
            if (best_row >= 0) break;
        }
    }

    if (best_row < 0) throw EmptyPool("no candidate available for acquisition");
    state.last_was_exploration = explore;
    state.pending_label = true;
    return pool.points.row(best_row).transpose();
}

void mivor_report_label(MivorState& state, int new_label) {
    if (!state.pending_label)
        throw std::logic_error("mivor_report_label without a pending acquisition");
    if (state.last_was_exploration) {
        if (new_label == 1) state.rate = state.initial_rate;
    } else {
        state.rate /= state.decrease_factor;
    }
    state.pending_label = false;
}

} // namespace mob::sampling
