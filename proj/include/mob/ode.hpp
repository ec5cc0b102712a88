#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "mob/errors.hpp"

namespace mob {

/// Settings for the embedded Runge-Kutta-Fehlberg 4(5) integrator.
struct IntegratorConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-8;
    double h_init = 1e-3;   ///< first trial step [s]
    double h_min = 1e-12;   ///< below this the integration aborts [s]
    double h_max = 0.1;     ///< step-size ceiling [s]
    double record_dt = 0.01; ///< sampling interval for stored trajectories [s]

    bool valid() const {
        return rel_tol > 0.0 && abs_tol > 0.0 && h_min > 0.0 && h_min <= h_init &&
               h_init <= h_max && record_dt > 0.0;
    }
};

namespace ode {

struct Stats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

namespace detail {

// Classic Fehlberg 4(5) tableau: six stages, the fifth-order solution is propagated.
inline constexpr double c2 = 1.0 / 4.0, c3 = 3.0 / 8.0, c4 = 12.0 / 13.0, c5 = 1.0,
                        c6 = 1.0 / 2.0;
inline constexpr double a21 = 1.0 / 4.0;
inline constexpr double a31 = 3.0 / 32.0, a32 = 9.0 / 32.0;
inline constexpr double a41 = 1932.0 / 2197.0, a42 = -7200.0 / 2197.0, a43 = 7296.0 / 2197.0;
inline constexpr double a51 = 439.0 / 216.0, a52 = -8.0, a53 = 3680.0 / 513.0,
                        a54 = -845.0 / 4104.0;
inline constexpr double a61 = -8.0 / 27.0, a62 = 2.0, a63 = -3544.0 / 2565.0,
                        a64 = 1859.0 / 4104.0, a65 = -11.0 / 40.0;
inline constexpr double b5[6] = {16.0 / 135.0, 0.0, 6656.0 / 12825.0, 28561.0 / 56430.0,
                                 -9.0 / 50.0, 2.0 / 55.0};
inline constexpr double b4[6] = {25.0 / 216.0, 0.0, 1408.0 / 2565.0, 2197.0 / 4104.0,
                                 -1.0 / 5.0, 0.0};

} // namespace detail

/// Work buffers for one integration; reusable across calls of the same dimension.
struct Workspace {
    explicit Workspace(std::size_t n) {
        for (auto* v : {&k1, &k2, &k3, &k4, &k5, &k6, &ytmp, &ynew, &err})
            v->assign(n, 0.0);
    }
    std::size_t size() const { return ynew.size(); }

    std::vector<double> k1, k2, k3, k4, k5, k6, ytmp, ynew, err;
};

/// One trial Fehlberg step of size h from (t, y). k1 = f(t, y) must already be
/// filled in w.k1_ (it only depends on the departure point, so rejected retries
/// reuse it). Fills w.ynew_ with the fifth-order solution and w.err_ with the
/// embedded error estimate.
template <class Rhs>
void fehlberg_trial(Rhs&& f, double t, const std::vector<double>& y, double h, Workspace& w) {
    using namespace detail;
    const std::size_t n = w.size();
    const double* k1 = w.k1.data();
    double* k2 = w.k2.data();
    double* k3 = w.k3.data();
    double* k4 = w.k4.data();
    double* k5 = w.k5.data();
    double* k6 = w.k6.data();
    double* ytmp = w.ytmp.data();

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    f(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i)
        ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
        ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
        ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(t + c6 * h, ytmp, k6);

    for (std::size_t i = 0; i < n; ++i) {
        const double s5 = b5[0] * k1[i] + b5[2] * k3[i] + b5[3] * k4[i] + b5[4] * k5[i] +
                          b5[5] * k6[i];
        const double s4 = b4[0] * k1[i] + b4[2] * k3[i] + b4[3] * k4[i] + b4[4] * k5[i];
        w.ynew[i] = y[i] + h * s5;
        w.err[i] = h * (s5 - s4);
    }
}

/// Cubic Hermite interpolation on one accepted step [ta, tb].
inline void hermite(double ta, const std::vector<double>& ya, const std::vector<double>& fa,
                    double tb, const std::vector<double>& yb, const std::vector<double>& fb,
                    double t, std::vector<double>& out) {
    const double h = tb - ta;
    const double th = (t - ta) / h;
    const double th2 = th * th, th3 = th2 * th;
    const double h00 = 2.0 * th3 - 3.0 * th2 + 1.0;
    const double h10 = th3 - 2.0 * th2 + th;
    const double h01 = -2.0 * th3 + 3.0 * th2;
    const double h11 = th3 - th2;
    out.resize(ya.size());
    for (std::size_t i = 0; i < ya.size(); ++i)
        out[i] = h00 * ya[i] + h * h10 * fa[i] + h01 * yb[i] + h * h11 * fb[i];
}

/// Advance y in place from t0 to t1 with proportional step control. The local
/// error estimate of every accepted step satisfies |e_i| <= abs_tol + rel_tol*|y_i|
/// componentwise. on_step(ta, ya, fa, tb, yb, fb) is invoked after each accepted
/// step with the derivative at both ends (for dense output); pass a no-op lambda
/// when sampling is not needed.
template <class Rhs, class OnStep>
Stats integrate_adaptive(Rhs&& f, std::vector<double>& y, double t0, double t1,
                         const IntegratorConfig& cfg, OnStep&& on_step) {
    Stats stats;
    if (t1 <= t0) return stats;

    const std::size_t n = y.size();
    Workspace w(n);
    std::vector<double> yprev(n), fprev(n);

    // Interval end reached to within float resolution counts as done.
    const double t_edge = 4.0 * std::numeric_limits<double>::epsilon() *
                          std::max({1.0, std::abs(t0), std::abs(t1)});

    double t = t0;
    double h = std::min(cfg.h_init, t1 - t0);
    f(t, y.data(), w.k1.data());

    while (t1 - t > t_edge) {
        h = std::min({h, cfg.h_max, t1 - t});
        if (!(h > 0.0) || t + h == t)
            throw StepUnderflow("step size vanished at t=" + std::to_string(t));

        fehlberg_trial(f, t, y, h, w);

        double ratio = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(w.ynew[i]) || !std::isfinite(w.err[i])) {
                finite = false;
                break;
            }
            const double scale =
                cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(w.ynew[i]));
            ratio = std::max(ratio, std::abs(w.err[i]) / scale);
        }
        if (!finite) {
            if (h <= 16.0 * cfg.h_min)
                throw NonFiniteState("state became non-finite at t=" + std::to_string(t));
            h *= 0.1;
            ++stats.rejected;
            continue;
        }

        const double grow =
            ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);

        if (ratio <= 1.0) {
            yprev.swap(y);
            std::copy(w.ynew.begin(), w.ynew.end(), y.begin());
            fprev.swap(w.k1);
            const double tprev = t;
            t += h;
            f(t, y.data(), w.k1.data()); // doubles as next step's first stage
            on_step(tprev, yprev, fprev, t, y, w.k1);
            ++stats.accepted;
            h *= grow;
        } else {
            ++stats.rejected;
            h *= grow;
            if (h < cfg.h_min)
                throw StepUnderflow("required step below h_min at t=" + std::to_string(t));
        }
    }
    return stats;
}

/// Advance y in place over [t0, t1] with a fixed step h (the last step is
/// truncated to land on t1). No error control; used for order studies.
template <class Rhs>
void integrate_fixed(Rhs&& f, std::vector<double>& y, double t0, double t1, double h) {
    Workspace w(y.size());
    double t = t0;
    while (t < t1) {
        const double step = std::min(h, t1 - t);
        f(t, y.data(), w.k1.data());
        fehlberg_trial(f, t, y, step, w);
        std::copy(w.ynew.begin(), w.ynew.end(), y.begin());
        t += step;
    }
}

} // namespace ode
} // namespace mob
