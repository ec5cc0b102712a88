#include "mob/indicators.hpp"

#include <algorithm>
#include <cmath>

#include "mob/errors.hpp"
#include "mob/ode.hpp"

namespace mob {

namespace {

constexpr double kFrameFloor = 1e-300;
constexpr double kPeakResolution = 1e-6;

struct NoRecord {
    void operator()(double, const std::vector<double>&, const std::vector<double>&, double,
                    const std::vector<double>&, const std::vector<double>&) const {}
};

void flow_in_place(const AutonomousSystem& sys, std::vector<double>& x, double t0, double t1,
                   const IntegratorConfig& icfg) {
    auto rhs = [&sys](double, const double* y, double* dy) { sys.rhs(y, dy); };
    ode::integrate_adaptive(rhs, x, t0, t1, icfg, NoRecord{});
}

/// Positive-part length of the linear interpolant of (a, fa)-(b, fb).
double positive_measure(double a, double fa, double b, double fb) {
    if (b <= a) return 0.0;
    if (fa > 0.0 && fb > 0.0) return b - a;
    if (fa > 0.0) return (b - a) * fa / (fa - fb);
    if (fb > 0.0) return (b - a) * fb / (fb - fa);
    return 0.0;
}

/// Modified Gram-Schmidt on the columns of q; adds log column norms to sums.
void renormalize(Eigen::MatrixXd& q, std::vector<double>& sums) {
    const int n = static_cast<int>(q.cols());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) q.col(i) -= q.col(j).dot(q.col(i)) * q.col(j);
        const double r = q.col(i).norm();
        if (!(r > kFrameFloor))
            throw DegenerateFrame("tangent vector " + std::to_string(i) +
                                  " collapsed during renormalization");
        sums[i] += std::log(r);
        q.col(i) /= r;
    }
}

LyapunovResult accumulate_exponents(int n, const LLEConfig& cfg,
                                    const std::function<void(Eigen::MatrixXd&)>& advance) {
    const std::size_t steps =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.horizon / cfg.map_dt)));

    Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n);
    std::vector<double> sums(n, 0.0);

    std::size_t since_renorm = 0;
    for (std::size_t k = 0; k < steps; ++k) {
        advance(q);
        if (++since_renorm == static_cast<std::size_t>(cfg.renorm_every)) {
            renormalize(q, sums);
            since_renorm = 0;
        }
    }
    if (since_renorm != 0) renormalize(q, sums);

    LyapunovResult res;
    res.steps_used = steps;
    const double total_time = static_cast<double>(steps) * cfg.map_dt;
    res.spectrum.assign(sums.begin(), sums.end());
    for (double& v : res.spectrum) v /= total_time;
    std::sort(res.spectrum.begin(), res.spectrum.end(), std::greater<>());
    res.lle = res.spectrum.front();
    return res;
}

} // namespace

double sticking_time(const SystemParams& p, const State& init, const StickingConfig& cfg,
                     const IntegratorConfig& icfg) {
    const Trajectory traj = integrate(p, init, cfg.window_end, icfg);
    double acc = 0.0;
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        const State& sa = traj.samples[i - 1];
        const State& sb = traj.samples[i];
        const double a = std::max(sa.t, cfg.window_start);
        const double b = std::min(sb.t, cfg.window_end);
        if (b <= a) continue;
        // margin below threshold, linearly interpolated to the clipped ends
        auto margin = [&](const State& s) {
            return cfg.v_threshold - std::abs(p.belt_velocity - s.v);
        };
        const double fa0 = margin(sa), fb0 = margin(sb);
        const double span = sb.t - sa.t;
        const double fa = fa0 + (fb0 - fa0) * (a - sa.t) / span;
        const double fb = fa0 + (fb0 - fa0) * (b - sa.t) / span;
        acc += positive_measure(a, fa, b, fb);
    }
    return acc;
}

AutonomousSystem molaie_system(double a) {
    AutonomousSystem sys;
    sys.dimension = 3;
    sys.rhs = [a](const double* x, double* d) {
        d[0] = x[1];
        d[1] = x[2];
        d[2] = -a * x[0] - x[1] - 4.0 * x[2] + x[1] * x[1] + x[0] * x[1];
    };
    sys.jacobian = [a](const double* x, double* j) {
        j[0] = 0.0; j[1] = 1.0; j[2] = 0.0;
        j[3] = 0.0; j[4] = 0.0; j[5] = 1.0;
        j[6] = -a + x[1];
        j[7] = -1.0 + 2.0 * x[1] + x[0];
        j[8] = -4.0;
    };
    return sys;
}

Eigen::MatrixXd numerical_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& map, const Eigen::VectorXd& x,
    double delta) {
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd jac(n, n);
    Eigen::VectorXd probe = x;
    for (int j = 0; j < n; ++j) {
        probe(j) = x(j) + delta;
        const Eigen::VectorXd fwd = map(probe);
        probe(j) = x(j) - delta;
        const Eigen::VectorXd bwd = map(probe);
        probe(j) = x(j);
        jac.col(j) = (fwd - bwd) / (2.0 * delta);
    }
    if (!jac.allFinite()) throw NonFiniteState("numerical Jacobian has non-finite entries");
    return jac;
}

LyapunovResult lyapunov_spectrum(const AutonomousSystem& sys, std::span<const double> x0,
                                 const LLEConfig& cfg, JacobianMode mode,
                                 const IntegratorConfig& icfg) {
    const int n = sys.dimension;
    if (mode == JacobianMode::analytic && !sys.jacobian)
        throw std::invalid_argument("analytic mode requires a system Jacobian");

    std::vector<double> x(x0.begin(), x0.end());
    if (cfg.transient > 0.0) flow_in_place(sys, x, 0.0, cfg.transient, icfg);

    auto flow_map = [&](const Eigen::VectorXd& from) {
        std::vector<double> y(from.data(), from.data() + n);
        flow_in_place(sys, y, 0.0, cfg.map_dt, icfg);
        return Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(y.data(), n));
    };

    Eigen::VectorXd state = Eigen::Map<Eigen::VectorXd>(x.data(), n);

    std::function<void(Eigen::MatrixXd&)> advance;
    if (mode == JacobianMode::perturbation) {
        advance = [&](Eigen::MatrixXd& q) {
            const Eigen::MatrixXd jac = numerical_jacobian(flow_map, state, cfg.delta);
            state = flow_map(state);
            q = jac * q;
        };
    } else {
        // Propagate state and tangent frame together through the variational
        // equations: dPhi/dt = J(x(t)) Phi.
        advance = [&, n](Eigen::MatrixXd& q) {
            std::vector<double> aug(static_cast<std::size_t>(n) * (n + 1));
            for (int i = 0; i < n; ++i) aug[i] = state(i);
            for (int c = 0; c < n; ++c)
                for (int r = 0; r < n; ++r) aug[n + c * n + r] = q(r, c);
            std::vector<double> jac(static_cast<std::size_t>(n) * n);
            auto rhs = [&](double, const double* y, double* dy) {
                sys.rhs(y, dy);
                sys.jacobian(y, jac.data());
                for (int c = 0; c < n; ++c)
                    for (int r = 0; r < n; ++r) {
                        double s = 0.0;
                        for (int k = 0; k < n; ++k) s += jac[r * n + k] * y[n + c * n + k];
                        dy[n + c * n + r] = s;
                    }
            };
            ode::integrate_adaptive(rhs, aug, 0.0, cfg.map_dt, icfg, NoRecord{});
            for (int i = 0; i < n; ++i) state(i) = aug[i];
            for (int c = 0; c < n; ++c)
                for (int r = 0; r < n; ++r) q(r, c) = aug[n + c * n + r];
            if (!q.allFinite() || !state.allFinite())
                throw NonFiniteState("variational integration produced non-finite values");
        };
    }
    return accumulate_exponents(n, cfg, advance);
}

LyapunovResult mob_lle(const SystemParams& p, const State& init, const LLEConfig& cfg,
                       const IntegratorConfig& icfg) {
    std::array<double, 3> x = {init.x, init.v, init.z};
    double t = init.t;
    if (cfg.transient > 0.0) {
        x = step_map(p, x, t, cfg.transient, icfg);
        t += cfg.transient;
    }

    Eigen::VectorXd state(3);
    state << x[0], x[1], x[2];

    auto advance = [&](Eigen::MatrixXd& q) {
        auto map_at_t = [&](const Eigen::VectorXd& from) {
            const auto out = step_map(p, {from(0), from(1), from(2)}, t, cfg.map_dt, icfg);
            return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(out.data(), 3));
        };
        const Eigen::MatrixXd jac = numerical_jacobian(map_at_t, state, cfg.delta);
        state = map_at_t(state);
        t += cfg.map_dt;
        q = jac * q;
    };
    return accumulate_exponents(3, cfg, advance);
}

namespace {

/// Distinct local maxima of the sampled signal on [window_start, window_end]:
/// + to - sign changes of the derivative, quadratically refined, deduplicated.
std::vector<double> extract_peaks(const std::vector<double>& t, const std::vector<double>& val,
                                  const std::vector<double>& deriv, double window_start,
                                  double window_end) {
    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        if (t[i] < window_start || t[i] > window_end) continue;
        if (!(deriv[i] > 0.0 && deriv[i + 1] <= 0.0)) continue;
        // crest lies in [t_i, t_i+1]; refine with the parabola through the
        // sample closest to the crest and its neighbours
        const std::size_t m = (val[i] >= val[i + 1] || i + 2 >= t.size()) ? i : i + 1;
        const double ym = val[m - 1], y0 = val[m], yp = val[m + 1];
        const double curv = yp - 2.0 * y0 + ym;
        double peak = y0;
        if (curv < 0.0) peak = y0 - (yp - ym) * (yp - ym) / (8.0 * curv);
        peaks.push_back(peak);
    }
    std::sort(peaks.begin(), peaks.end());
    std::vector<double> unique;
    for (double v : peaks)
        if (unique.empty() || v - unique.back() > kPeakResolution) unique.push_back(v);
    return unique;
}

} // namespace

std::vector<BifurcationPoint> bifurcation_scan(const SystemParams& base,
                                               const std::string& param_symbol,
                                               std::span<const double> grid,
                                               double window_start, double window_end,
                                               const IntegratorConfig& icfg,
                                               const State& init) {
    std::vector<BifurcationPoint> out;
    out.reserve(grid.size());
    for (double value : grid) {
        SystemParams p = base;
        double* field = param_field(p, param_symbol);
        if (field == nullptr)
            throw std::invalid_argument("unknown parameter symbol: " + param_symbol);
        *field = value;

        const Trajectory traj = integrate(p, init, window_end, icfg);
        std::vector<double> t, x, v;
        t.reserve(traj.samples.size());
        for (const State& s : traj.samples) {
            t.push_back(s.t);
            x.push_back(s.x);
            v.push_back(s.v);
        }
        out.push_back({value, extract_peaks(t, x, v, window_start, window_end)});
    }
    return out;
}

std::vector<BifurcationPoint> bifurcation_scan(
    const std::function<AutonomousSystem(double)>& family, std::span<const double> grid,
    std::span<const double> x0, int component, double window_start, double window_end,
    const IntegratorConfig& icfg) {
    std::vector<BifurcationPoint> out;
    out.reserve(grid.size());
    for (double value : grid) {
        const AutonomousSystem sys = family(value);
        std::vector<double> y(x0.begin(), x0.end());
        std::vector<double> t, val, deriv;
        std::vector<double> interp, d(sys.dimension);
        std::size_t next = 0;

        auto rhs = [&sys](double, const double* yy, double* dy) { sys.rhs(yy, dy); };
        auto record = [&](double ta, const std::vector<double>& ya,
                          const std::vector<double>& fa, double tb,
                          const std::vector<double>& yb, const std::vector<double>& fb) {
            for (;; ++next) {
                const double tr = static_cast<double>(next) * icfg.record_dt;
                if (tr > tb) break;
                ode::hermite(ta, ya, fa, tb, yb, fb, tr, interp);
                sys.rhs(interp.data(), d.data());
                t.push_back(tr);
                val.push_back(interp[component]);
                deriv.push_back(d[component]);
            }
        };
        sys.rhs(y.data(), d.data());
        t.push_back(0.0);
        val.push_back(y[component]);
        deriv.push_back(d[component]);
        next = 1;
        ode::integrate_adaptive(rhs, y, 0.0, window_end, icfg, record);
        out.push_back({value, extract_peaks(t, val, deriv, window_start, window_end)});
    }
    return out;
}

} // namespace mob
