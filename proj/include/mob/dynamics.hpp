#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "mob/ode.hpp"

namespace mob {

/// Physical and friction constants of the mass-on-belt oscillator.
///
/// The friction channel follows the single-state elasto-plastic model: the
/// body displacement splits into an elastic bristle deflection z and a plastic
/// remainder, stiction is blended in by a half-sine switching function between
/// the breakaway and maximum deflections, and the Stribeck curve interpolates
/// between static and kinetic friction levels.
///
/// Defaults are the benchmark constants shared by all workbench problems.
struct SystemParams {
    double mass = 1.0;               ///< M [kg]
    double belt_velocity = 0.1;      ///< V0 [m/s]
    double damping = 0.0;            ///< D [N s/m]
    double cubic_stiffness = 1.0;    ///< K1 [N/m^3]
    double linear_stiffness = 0.0;   ///< K2 [N/m]
    double mu_static = 0.3;          ///< static friction coefficient
    double mu_kinetic = 0.15;        ///< kinetic friction coefficient
    double stribeck_velocity = 0.1;  ///< Vs [m/s]
    double forcing_amplitude = 0.1;  ///< U0 [N]
    double normal_load = 1.0;        ///< N0 [N]
    double forcing_frequency = 0.6;  ///< Omega [rad/s]
    double bristle_stiffness = 100.0; ///< sigma0 [N/m]
    double bristle_damping = 10.0;    ///< sigma1 [N s/m]
    double viscous_friction = 0.1;    ///< sigma2 [N s/m]
    double breakaway_deflection = 0.0021; ///< z_ba [m]
    double max_deflection = 0.003;        ///< z_max [m]

    bool valid() const {
        return mass > 0.0 && normal_load > 0.0 && stribeck_velocity > 0.0 &&
               bristle_stiffness > 0.0 && mu_kinetic > 0.0 && mu_kinetic <= mu_static &&
               breakaway_deflection >= 0.0 && breakaway_deflection < max_deflection;
    }
};

/// Set z_max to the deflection at which the bristle force equals the static
/// breakaway force, and z_ba to 70% of it. Call after changing N0, mu_s or
/// sigma0 to keep the stiction transition inside reachable deflections.
inline void apply_default_bristle_limits(SystemParams& p) {
    p.max_deflection = p.normal_load * p.mu_static / p.bristle_stiffness;
    p.breakaway_deflection = 0.7 * p.max_deflection;
}

/// Look up a SystemParams field by its conventional symbol (M, V0, D, K1, K2,
/// mu_s, mu_k, Vs, U0, N0, Omega, sigma0, sigma1, sigma2, z_ba, z_max).
/// Returns nullptr for unknown names.
double* param_field(SystemParams& p, const std::string& symbol);
const double* param_field(const SystemParams& p, const std::string& symbol);

/// All recognized parameter symbols, in declaration order.
const std::vector<std::string>& param_symbols();

/// Instantaneous state of the oscillator. The plastic displacement is implicit
/// (w = X - z) and never stored.
struct State {
    double t = 0.0; ///< time [s]
    double x = 0.0; ///< displacement X [m]
    double v = 0.0; ///< velocity Xdot [m/s]
    double z = 0.0; ///< bristle deflection [m]
};

/// Relative velocity between belt and body.
inline double relative_velocity(double v, const SystemParams& p) {
    return p.belt_velocity - v;
}

/// sgn with sgn(0) = 0.
inline double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

/// Stribeck curve g(V_R) = N0*(mu_k + (mu_s - mu_k)*exp(-V_R^2/Vs^2)).
/// Decays monotonically from N0*mu_s at rest to N0*mu_k at high sliding speed.
inline double stribeck_force(double v_rel, const SystemParams& p) {
    const double r = v_rel / p.stribeck_velocity;
    return p.normal_load * (p.mu_kinetic + (p.mu_static - p.mu_kinetic) * std::exp(-r * r));
}

/// Stiction switching function alpha(z, V_R) in [0, 1]: zero while the bristle
/// unloads (V_R*z < 0) or below the breakaway deflection, one at full
/// deflection, half-sine transition between.
inline double stiction_alpha(double z, double v_rel, const SystemParams& p) {
    if (v_rel * z < 0.0) return 0.0;
    const double az = std::abs(z);
    if (az <= p.breakaway_deflection) return 0.0;
    if (az >= p.max_deflection) return 1.0;
    const double mid = 0.5 * (p.max_deflection + p.breakaway_deflection);
    const double width = p.max_deflection - p.breakaway_deflection;
    return 0.5 * (std::sin(M_PI * (az - mid) / width) + 1.0);
}

/// Bristle deflection rate dz/dt = (1 - alpha*(sigma0/g)*z*sgn(V_R)) * V_R.
inline double bristle_rate(double z, double v_rel, const SystemParams& p) {
    const double a = stiction_alpha(z, v_rel, p);
    const double zs = z * sgn(v_rel);
    if (a == 0.0 || zs == 0.0) return v_rel; // also keeps N0=0 test systems finite
    return (1.0 - a * (p.bristle_stiffness / stribeck_force(v_rel, p)) * zs) * v_rel;
}

/// Friction force per unit normal load: f_R = sigma0*z + sigma1*zdot + sigma2*V_R.
/// The full friction force is N0*f_R.
inline double friction_per_load(double z, double z_rate, double v_rel, const SystemParams& p) {
    return p.bristle_stiffness * z + p.bristle_damping * z_rate + p.viscous_friction * v_rel;
}

/// State-space right-hand side for state (X, Xdot, z). The sigma1*zdot term of
/// f_R uses the explicit bristle rate, keeping the system fully explicit.
inline std::array<double, 3> rhs(double t, const std::array<double, 3>& s,
                                 const SystemParams& p) {
    const double v_rel = relative_velocity(s[1], p);
    const double z_rate = bristle_rate(s[2], v_rel, p);
    const double f_r = friction_per_load(s[2], z_rate, v_rel, p);
    const double accel = (-p.damping * s[1] - p.cubic_stiffness * s[0] * s[0] * s[0] -
                          p.linear_stiffness * s[0] + p.normal_load * f_r +
                          p.forcing_amplitude * std::sin(p.forcing_frequency * t)) /
                         p.mass;
    return {s[1], accel, z_rate};
}

/// Sampled trajectory plus integration diagnostics.
struct Trajectory {
    std::vector<State> samples;
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;
};

/// Integrate the oscillator from init to t_end, sampling every cfg.record_dt by
/// cubic Hermite interpolation on accepted steps. The first sample is the
/// initial condition exactly. A zero-length request returns only init.
Trajectory integrate(const SystemParams& p, const State& init, double t_end,
                     const IntegratorConfig& cfg);

/// Discrete flow map: the state reached from x at absolute time t0 after dt.
std::array<double, 3> step_map(const SystemParams& p, const std::array<double, 3>& x,
                               double t0, double dt, const IntegratorConfig& cfg);

} // namespace mob
