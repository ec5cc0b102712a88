#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mob/dynamics.hpp"

namespace mob {

/// Window and threshold defining the sticking-time quantity of interest.
struct StickingConfig {
    double v_threshold = 1e-4; ///< |V_R| below this counts as sticking [m/s]
    double window_start = 150.0;
    double window_end = 250.0;

    bool valid() const {
        return v_threshold > 0.0 && window_start >= 0.0 && window_end > window_start;
    }
};

/// Cumulative time within [window_start, window_end] during which the relative
/// velocity |V0 - Xdot| stays below the threshold, measured on the densely
/// sampled trajectory with linear interpolation of threshold crossings.
double sticking_time(const SystemParams& p, const State& init, const StickingConfig& cfg,
                     const IntegratorConfig& icfg);

/// Settings for Lyapunov-spectrum estimation over a discrete-time map.
struct LLEConfig {
    double delta = 1e-4;     ///< perturbation magnitude per state component
    double map_dt = 0.5;     ///< sampling interval of the discrete map [s]
    double transient = 150.0; ///< discarded before accumulation [s]
    double horizon = 350.0;   ///< accumulation span [s]
    int renorm_every = 1;     ///< map steps between Gram-Schmidt renormalizations

    bool valid() const {
        return delta > 0.0 && map_dt > 0.0 && horizon > 0.0 && transient >= 0.0 &&
               renorm_every >= 1;
    }
};

/// Preset used for the three-dimensional verification system.
inline LLEConfig molaie_lle_config() {
    LLEConfig cfg;
    cfg.map_dt = 0.05;
    cfg.transient = 100.0;
    cfg.horizon = 400.0;
    return cfg;
}

struct LyapunovResult {
    std::vector<double> spectrum; ///< exponents sorted descending [1/s]
    double lle = 0.0;             ///< spectrum.front()
    std::size_t steps_used = 0;
};

enum class JacobianMode { analytic, perturbation };

/// A time-invariant first-order system xdot = f(x); the analytic Jacobian is
/// optional and only required for JacobianMode::analytic.
struct AutonomousSystem {
    int dimension = 0;
    std::function<void(const double* x, double* dxdt)> rhs;
    std::function<void(const double* x, double* jac)> jacobian; ///< row-major N*N
};

/// Three-dimensional verification system xdot = y, ydot = z,
/// zdot = -a x - y - 4 z + y^2 + x y, with its analytic Jacobian.
AutonomousSystem molaie_system(double a);

/// Central-difference Jacobian of a map: column j is
/// (G(x + delta e_j) - G(x - delta e_j)) / (2 delta). Exact on affine maps.
Eigen::MatrixXd numerical_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& map, const Eigen::VectorXd& x,
    double delta);

/// Lyapunov spectrum of an autonomous system by tangent-space propagation with
/// repeated Gram-Schmidt renormalization. In analytic mode the variational
/// equations are integrated with the system Jacobian; in perturbation mode the
/// Jacobian of the one-interval flow map is estimated by central differences.
/// Exponents are rates per unit time.
LyapunovResult lyapunov_spectrum(const AutonomousSystem& sys, std::span<const double> x0,
                                 const LLEConfig& cfg, JacobianMode mode,
                                 const IntegratorConfig& icfg = IntegratorConfig{});

/// Largest-exponent estimation for the forced oscillator. Time enters as a
/// known phase: each map step integrates over the correct absolute time span,
/// and the tangent space covers the three state components (X, Xdot, z) only.
/// Perturbation mode by construction (the friction model is non-smooth).
LyapunovResult mob_lle(const SystemParams& p, const State& init, const LLEConfig& cfg,
                       const IntegratorConfig& icfg);

/// Binary instability indicator: 1 when the largest exponent is non-negative.
inline int classify_lle(double lle) { return lle >= 0.0 ? 1 : 0; }

/// One bifurcation-diagram abscissa: parameter value plus the set of distinct
/// steady-state displacement peaks observed in the window.
struct BifurcationPoint {
    double parameter;
    std::vector<double> peaks;
};

/// Sweep one oscillator parameter (by symbol, e.g. "Omega") over a grid;
/// for each value integrate and collect local maxima of X(t) on the window.
/// Peaks come from + to - sign changes of Xdot, refined by quadratic
/// interpolation and deduplicated at 1e-6 m.
std::vector<BifurcationPoint> bifurcation_scan(const SystemParams& base,
                                               const std::string& param_symbol,
                                               std::span<const double> grid,
                                               double window_start, double window_end,
                                               const IntegratorConfig& icfg,
                                               const State& init = State{});

/// Same scan for a parametrized family of autonomous systems, tracking peaks
/// of the given state component.
std::vector<BifurcationPoint> bifurcation_scan(
    const std::function<AutonomousSystem(double)>& family, std::span<const double> grid,
    std::span<const double> x0, int component, double window_start, double window_end,
    const IntegratorConfig& icfg);

} // namespace mob
