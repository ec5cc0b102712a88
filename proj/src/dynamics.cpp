#include "mob/dynamics.hpp"

#include <utility>

namespace mob {

namespace {

struct MobRhs {
    const SystemParams& p;
    void operator()(double t, const double* s, double* ds) const {
        const std::array<double, 3> d = rhs(t, {s[0], s[1], s[2]}, p);
        ds[0] = d[0];
        ds[1] = d[1];
        ds[2] = d[2];
    }
};

using FieldMap = std::vector<std::pair<std::string, double SystemParams::*>>;

const FieldMap& field_map() {
    static const FieldMap m = {
        {"M", &SystemParams::mass},
        {"V0", &SystemParams::belt_velocity},
        {"D", &SystemParams::damping},
        {"K1", &SystemParams::cubic_stiffness},
        {"K2", &SystemParams::linear_stiffness},
        {"mu_s", &SystemParams::mu_static},
        {"mu_k", &SystemParams::mu_kinetic},
        {"Vs", &SystemParams::stribeck_velocity},
        {"U0", &SystemParams::forcing_amplitude},
        {"N0", &SystemParams::normal_load},
        {"Omega", &SystemParams::forcing_frequency},
        {"sigma0", &SystemParams::bristle_stiffness},
        {"sigma1", &SystemParams::bristle_damping},
        {"sigma2", &SystemParams::viscous_friction},
        {"z_ba", &SystemParams::breakaway_deflection},
        {"z_max", &SystemParams::max_deflection},
    };
    return m;
}

} // namespace

double* param_field(SystemParams& p, const std::string& symbol) {
    for (const auto& [name, member] : field_map())
        if (name == symbol) return &(p.*member);
    return nullptr;
}

const double* param_field(const SystemParams& p, const std::string& symbol) {
    return param_field(const_cast<SystemParams&>(p), symbol);
}

const std::vector<std::string>& param_symbols() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, member] : field_map()) v.push_back(name);
        return v;
    }();
    return names;
}

Trajectory integrate(const SystemParams& p, const State& init, double t_end,
                     const IntegratorConfig& cfg) {
    Trajectory traj;
    traj.samples.push_back(init);
    if (t_end <= init.t) return traj;

    std::vector<double> y = {init.x, init.v, init.z};
    std::vector<double> interp;
    std::size_t next_record = 1;

    auto record = [&](double ta, const std::vector<double>& ya, const std::vector<double>& fa,
                      double tb, const std::vector<double>& yb, const std::vector<double>& fb) {
        for (;; ++next_record) {
            const double tr = init.t + static_cast<double>(next_record) * cfg.record_dt;
            if (tr > tb || tr > t_end) break;
            ode::hermite(ta, ya, fa, tb, yb, fb, tr, interp);
            traj.samples.push_back({tr, interp[0], interp[1], interp[2]});
        }
    };

    const auto stats = ode::integrate_adaptive(MobRhs{p}, y, init.t, t_end, cfg, record);
    traj.steps_accepted = stats.accepted;
    traj.steps_rejected = stats.rejected;
    return traj;
}

std::array<double, 3> step_map(const SystemParams& p, const std::array<double, 3>& x,
                               double t0, double dt, const IntegratorConfig& cfg) {
    std::vector<double> y = {x[0], x[1], x[2]};
    ode::integrate_adaptive(MobRhs{p}, y, t0, t0 + dt, cfg,
                            [](double, const std::vector<double>&, const std::vector<double>&,
                               double, const std::vector<double>&,
                               const std::vector<double>&) {});
    return {y[0], y[1], y[2]};
}

} // namespace mob
