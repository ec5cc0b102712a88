#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "mob/dynamics.hpp"

using namespace mob;

namespace {

// Parameters whose bristle channel never activates the stiction blend, so the
// X-dynamics reduce to a clean linear oscillator (N0 = 0 decouples friction).
SystemParams harmonic_params() {
    SystemParams p;
    p.forcing_amplitude = 0.0;
    p.normal_load = 0.0;
    p.cubic_stiffness = 0.0;
    p.linear_stiffness = 1.0;
    p.damping = 0.0;
    p.belt_velocity = 0.0;
    p.breakaway_deflection = 1e6;
    p.max_deflection = 2e6;
    return p;
}

// Matrix exponential of a 2x2 by plain Taylor series; test oracle only.
std::array<double, 4> expm2(const std::array<double, 4>& a, double t) {
    std::array<double, 4> acc = {1.0, 0.0, 0.0, 1.0};
    std::array<double, 4> term = {1.0, 0.0, 0.0, 1.0};
    for (int k = 1; k <= 60; ++k) {
        const std::array<double, 4> next = {
            (term[0] * a[0] + term[1] * a[2]) * t / k, (term[0] * a[1] + term[1] * a[3]) * t / k,
            (term[2] * a[0] + term[3] * a[2]) * t / k, (term[2] * a[1] + term[3] * a[3]) * t / k};
        term = next;
        for (int i = 0; i < 4; ++i) acc[i] += term[i];
    }
    return acc;
}

} // namespace

TEST_CASE("stribeck force at rest, at speed, and at the Stribeck velocity") {
    SystemParams p;
    CHECK(stribeck_force(0.0, p) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(stribeck_force(50.0, p) == doctest::Approx(0.15).epsilon(1e-9));
    CHECK(stribeck_force(0.1, p) ==
          doctest::Approx(0.15 + 0.15 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(stribeck_force(0.1, p) == doctest::Approx(0.20518).epsilon(1e-4));
}

TEST_CASE("stribeck force is even, monotone in |v| and bounded") {
    SystemParams p;
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 500; ++i) {
        const double a = u(rng), b = u(rng);
        const double ga = stribeck_force(a, p), gb = stribeck_force(b, p);
        CHECK(ga >= p.normal_load * p.mu_kinetic);
        CHECK(ga <= p.normal_load * p.mu_static);
        CHECK(stribeck_force(-a, p) == ga);
        if (std::abs(a) < std::abs(b)) CHECK(ga >= gb);
    }
}

TEST_CASE("stiction blend branches") {
    SystemParams p;
    CHECK(stiction_alpha(0.0, 0.5, p) == 0.0);
    CHECK(stiction_alpha(0.0, -0.5, p) == 0.0);
    CHECK(stiction_alpha(p.max_deflection, 1.0, p) == 1.0);
    CHECK(stiction_alpha(-p.max_deflection, -1.0, p) == 1.0);
    const double mid = 0.5 * (p.max_deflection + p.breakaway_deflection);
    CHECK(stiction_alpha(mid, 1.0, p) == doctest::Approx(0.5).epsilon(1e-12));
    // unloading always gives zero
    CHECK(stiction_alpha(p.max_deflection, -1.0, p) == 0.0);
    // equality v*z == 0 stays on the first branch
    CHECK(stiction_alpha(p.max_deflection, 0.0, p) == 1.0);
}

TEST_CASE("stiction blend is continuous across both thresholds") {
    SystemParams p;
    const double eps = 1e-9;
    const double lipschitz = M_PI / (p.max_deflection - p.breakaway_deflection);
    for (double z = 0.0; z <= 1.2 * p.max_deflection; z += p.max_deflection / 997.0) {
        const double d = std::abs(stiction_alpha(z + eps, 1.0, p) - stiction_alpha(z, 1.0, p));
        CHECK(d <= 2.0 * lipschitz * eps + 1e-15);
    }
}

TEST_CASE("bristle rate limits") {
    SystemParams p;
    CHECK(bristle_rate(0.001, 0.0, p) == 0.0);
    CHECK(bristle_rate(0.0, 0.1, p) == doctest::Approx(0.1).epsilon(1e-15));

    // with alpha forced to 1, the rate vanishes exactly at z = g/sigma0
    SystemParams q;
    q.max_deflection = 0.001;
    q.breakaway_deflection = 0.0005;
    const double v = 0.1;
    const double z_root = stribeck_force(v, q) / q.bristle_stiffness;
    REQUIRE(z_root >= q.max_deflection); // alpha = 1 there
    CHECK(bristle_rate(z_root, v, q) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("friction per unit load") {
    SystemParams p;
    CHECK(friction_per_load(0.0, 0.0, 0.0, p) == 0.0);
    CHECK(friction_per_load(0.0, 0.1, 0.1, p) == doctest::Approx(1.01).epsilon(1e-12));
    SystemParams q;
    q.bristle_stiffness = 100.0;
    CHECK(friction_per_load(0.001, 0.0, 0.0, q) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("state-space right-hand side") {
    SystemParams p; // defaults are the Table-style benchmark constants
    const auto d = rhs(0.0, {0.0, 0.0, 0.0}, p);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == doctest::Approx(1.01).epsilon(1e-12));
    CHECK(d[2] == doctest::Approx(0.1).epsilon(1e-12));

    SystemParams q;
    q.forcing_amplitude = 0.0;
    q.normal_load = 0.0;
    q.damping = 0.0;
    const auto d2 = rhs(1.3, {0.0, 0.0, 0.0}, q);
    CHECK(d2[0] == 0.0);
    CHECK(d2[1] == 0.0);
    CHECK(d2[2] == doctest::Approx(q.belt_velocity).epsilon(1e-15));

    // belt-synchronous motion freezes the bristle
    SystemParams r;
    r.forcing_amplitude = 0.0;
    const auto d3 = rhs(0.7, {0.2, r.belt_velocity, 0.002}, r);
    CHECK(d3[2] == 0.0);

    // purity: identical inputs give bit-identical outputs
    const auto again = rhs(0.0, {0.0, 0.0, 0.0}, p);
    CHECK(again[1] == d[1]);
    CHECK(again[2] == d[2]);
}

TEST_CASE("integrator reproduces the harmonic oscillator to 1e-6") {
    const SystemParams p = harmonic_params();
    IntegratorConfig cfg;
    cfg.rel_tol = cfg.abs_tol = 1e-8;
    State init;
    init.x = 1.0;
    const Trajectory traj = integrate(p, init, 10.0, cfg);
    REQUIRE(traj.samples.size() > 100);
    double max_err = 0.0;
    for (const auto& s : traj.samples)
        max_err = std::max(max_err, std::abs(s.x - std::cos(s.t)));
    CHECK(max_err <= 1e-6);
    CHECK(traj.samples.front().t == init.t);
    CHECK(traj.samples.front().x == init.x);
}

TEST_CASE("zero-length integration returns only the initial condition") {
    SystemParams p;
    State init;
    init.t = 3.0;
    init.x = 0.5;
    const Trajectory traj = integrate(p, init, 3.0, IntegratorConfig{});
    REQUIRE(traj.samples.size() == 1);
    CHECK(traj.samples[0].x == 0.5);
    CHECK(traj.steps_accepted == 0);
}

TEST_CASE("trajectory time stamps are strictly increasing") {
    SystemParams p;
    const Trajectory traj = integrate(p, State{}, 5.0, IntegratorConfig{});
    for (std::size_t i = 1; i < traj.samples.size(); ++i)
        CHECK(traj.samples[i].t > traj.samples[i - 1].t);
}

TEST_CASE("stick-slip response shows velocity plateaus at the belt velocity") {
    // Fig-4-style configuration: Omega = 0.5, K1 = 1, K2 = 0.
    SystemParams p;
    p.forcing_frequency = 0.5;
    IntegratorConfig cfg;
    cfg.record_dt = 0.01;

    const auto t0 = std::chrono::steady_clock::now();
    const Trajectory traj = integrate(p, State{}, 250.0, cfg);
    const auto t1 = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    MESSAGE("250 s stick-slip integration: ", ms, " ms, ", traj.steps_accepted, " steps, ",
            traj.steps_rejected, " rejected");

    std::size_t near_belt = 0, slipping = 0, total = 0;
    double v_max = -1e9;
    for (const auto& s : traj.samples) {
        if (s.t < 150.0) continue;
        ++total;
        const double vr = std::abs(p.belt_velocity - s.v);
        if (vr < 1e-3) ++near_belt;
        if (vr > 0.05) ++slipping;
        v_max = std::max(v_max, s.v);
    }
    // the velocity rides at ~V0 during stick phases and breaks away during slip
    CHECK(near_belt > total / 30);
    CHECK(slipping > 0);
    CHECK(v_max >= 0.9 * p.belt_velocity);
    CHECK(v_max < 0.5); // plateaus cap near the belt velocity, motion stays bounded
}

TEST_CASE("step map is consistent with the rhs as dt -> 0") {
    SystemParams p;
    const std::array<double, 3> x = {0.1, 0.05, 0.001};
    const double dt = 1e-6;
    const auto mapped = step_map(p, x, 0.0, dt, IntegratorConfig{});
    const auto d = rhs(0.0, x, p);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(mapped[i] - (x[i] + dt * d[i])) <= 1e-9);
}

TEST_CASE("adaptive integrator matches the matrix exponential on a linear system") {
    const std::array<double, 4> a = {0.0, 1.0, -2.0, -0.3};
    auto rhs2 = [&](double, const double* y, double* dy) {
        dy[0] = a[0] * y[0] + a[1] * y[1];
        dy[1] = a[2] * y[0] + a[3] * y[1];
    };
    std::vector<double> y = {0.7, -0.2};
    IntegratorConfig cfg;
    ode::integrate_adaptive(rhs2, y, 0.0, 0.37, cfg,
                            [](double, const std::vector<double>&, const std::vector<double>&,
                               double, const std::vector<double>&,
                               const std::vector<double>&) {});
    const auto e = expm2(a, 0.37);
    CHECK(y[0] == doctest::Approx(e[0] * 0.7 + e[1] * -0.2).epsilon(1e-7));
    CHECK(y[1] == doctest::Approx(e[2] * 0.7 + e[3] * -0.2).epsilon(1e-7));
}

TEST_CASE("flow semigroup: two half steps equal one full step") {
    SystemParams p;
    IntegratorConfig cfg;
    const std::array<double, 3> x = {0.05, 0.02, 0.0005};
    const double dt = 0.25;
    const auto one = step_map(p, step_map(p, x, 10.0, dt, cfg), 10.0 + dt, dt, cfg);
    const auto two = step_map(p, x, 10.0, 2.0 * dt, cfg);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(one[i] - two[i]) <= 10.0 * cfg.rel_tol + 1e-12);
}

TEST_CASE("fixed-step error decays at fifth order on the harmonic oscillator") {
    auto osc = [](double, const double* y, double* dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    auto global_error = [&](double h) {
        std::vector<double> y = {1.0, 0.0};
        ode::integrate_fixed(osc, y, 0.0, 10.0, h);
        return std::max(std::abs(y[0] - std::cos(10.0)), std::abs(y[1] + std::sin(10.0)));
    };
    const double e1 = global_error(0.2);
    const double e2 = global_error(0.1);
    const double order = std::log2(e1 / e2);
    MESSAGE("observed order: ", order, " (errors ", e1, " / ", e2, ")");
    CHECK(order >= 4.5);
    CHECK(order <= 5.5);
}

TEST_CASE("parameter symbol lookup") {
    SystemParams p;
    *param_field(p, "K1") = 0.75;
    CHECK(p.cubic_stiffness == 0.75);
    CHECK(*param_field(static_cast<const SystemParams&>(p), "mu_k") == 0.15);
    CHECK(param_field(p, "bogus") == nullptr);
    CHECK(param_symbols().size() == 16);
}

TEST_CASE("default bristle limits follow the breakaway force") {
    SystemParams p;
    apply_default_bristle_limits(p);
    CHECK(p.max_deflection == doctest::Approx(0.003).epsilon(1e-12));
    CHECK(p.breakaway_deflection == doctest::Approx(0.0021).epsilon(1e-12));
    CHECK(p.valid());
}
