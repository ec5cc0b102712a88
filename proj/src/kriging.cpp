#include "mob/kriging.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <random>

namespace mob::kriging {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kNuggetCeiling = 1e-6;
constexpr double kDuplicateTolerance = 1e-10;

Eigen::MatrixXd correlation_matrix(const DesignSet& design, const Hyperparameters& theta) {
    const int m = design.size();
    Eigen::MatrixXd r(m, m);
    for (int i = 0; i < m; ++i) {
        r(i, i) = 1.0;
        for (int j = i + 1; j < m; ++j) {
            const double v = matern32(design.points.row(i).transpose(),
                                      design.points.row(j).transpose(), theta);
            r(i, j) = v;
            r(j, i) = v;
        }
    }
    return r;
}

} // namespace

void validate_for_fit(const DesignSet& design) {
    const int m = design.size();
    if (m < 2) throw std::invalid_argument("design needs at least two points");
    if (design.values.size() != m)
        throw std::invalid_argument("design points/values size mismatch");
    if (design.points.minCoeff() < -1e-12 || design.points.maxCoeff() > 1.0 + 1e-12)
        throw std::invalid_argument("design coordinates must lie in the unit cube");
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if ((design.points.row(i) - design.points.row(j)).norm() < kDuplicateTolerance)
                throw std::invalid_argument("near-duplicate design points at rows " +
                                            std::to_string(i) + "," + std::to_string(j));
}

double matern32(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                const Hyperparameters& theta) {
    double corr = 1.0;
    for (int i = 0; i < a.size(); ++i) {
        const double s = kSqrt3 * std::abs(a(i) - b(i)) / theta.lengthscales(i);
        corr *= (1.0 + s) * std::exp(-s);
    }
    return corr;
}

KrigingModel fit_given_theta(const DesignSet& design, const Hyperparameters& theta,
                             double nugget_start) {
    validate_for_fit(design);
    const int m = design.size();
    const Eigen::MatrixXd r = correlation_matrix(design, theta);

    KrigingModel model;
    model.design = design;
    model.theta = theta;

    double nugget = nugget_start;
    for (;;) {
        Eigen::MatrixXd reg = r;
        reg.diagonal().array() += nugget;
        model.chol.compute(reg);
        if (model.chol.info() == Eigen::Success) break;
        nugget *= 10.0;
        if (nugget > kNuggetCeiling)
            throw SingularCorrelation("correlation matrix not factorizable at nugget " +
                                      std::to_string(nugget / 10.0));
    }
    model.nugget = nugget;

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);
    model.rinv_ones = model.chol.solve(ones);
    model.ones_rinv_ones = ones.dot(model.rinv_ones);
    const Eigen::VectorXd rinv_y = model.chol.solve(design.values);

    model.mu_hat = ones.dot(rinv_y) / model.ones_rinv_ones;
    const Eigen::VectorXd centered = design.values.array() - model.mu_hat;
    const Eigen::VectorXd rinv_centered = model.chol.solve(centered);
    model.sigma2_hat = std::max(0.0, centered.dot(rinv_centered) / m);
    model.alpha_weights = rinv_centered;

    // det(R)^(1/m) through the factor's log-diagonal for stability
    const double log_det =
        2.0 * model.chol.matrixLLT().diagonal().array().log().sum();
    model.psi = model.sigma2_hat * std::exp(log_det / m);
    return model;
}

Prediction predict(const KrigingModel& model, const Eigen::VectorXd& x) {
    Eigen::VectorXd q = x;
    bool clamped = false;
    for (int i = 0; i < q.size(); ++i) {
        if (q(i) < 0.0 || q(i) > 1.0) {
            q(i) = std::clamp(q(i), 0.0, 1.0);
            clamped = true;
        }
    }
    if (clamped)
        std::cerr << "kriging::predict: point outside the unit cube was clamped\n";

    const int m = model.design.size();
    Eigen::VectorXd r0(m);
    for (int i = 0; i < m; ++i)
        r0(i) = matern32(q, model.design.points.row(i).transpose(), model.theta);

    Prediction out;
    out.mean = model.mu_hat + r0.dot(model.alpha_weights);
    const Eigen::VectorXd rinv_r0 = model.chol.solve(r0);
    const double u0 = model.rinv_ones.dot(r0) - 1.0;
    out.variance = model.sigma2_hat *
                   (1.0 - r0.dot(rinv_r0) + u0 * u0 / model.ones_rinv_ones);
    out.variance = std::max(0.0, out.variance);
    return out;
}

Eigen::VectorXd loocv_squared_errors(const KrigingModel& model) {
    const int m = model.design.size();
    const Eigen::MatrixXd rinv = model.chol.solve(Eigen::MatrixXd::Identity(m, m));
    Eigen::VectorXd errors(m);
    for (int i = 0; i < m; ++i) {
        const double e = model.alpha_weights(i) / rinv(i, i);
        errors(i) = e * e;
    }
    return errors;
}

namespace {

double psi_at(const DesignSet& design, const Eigen::VectorXd& log10_l) {
    Hyperparameters theta;
    theta.lengthscales = Eigen::pow(10.0, log10_l.array());
    try {
        return fit_given_theta(design, theta).psi;
    } catch (const SingularCorrelation&) {
        return std::numeric_limits<double>::infinity();
    }
}

} // namespace

KrigingModel optimize_hyperparameters(const DesignSet& design, const PSOConfig& cfg,
                                      const Hyperparameters* warm_start) {
    validate_for_fit(design);
    const int n = design.dimension();
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const double lo = kLogLengthscaleMin, hi = kLogLengthscaleMax;
    auto sample_position = [&] {
        Eigen::VectorXd x(n);
        for (int d = 0; d < n; ++d) x(d) = lo + (hi - lo) * unit(rng);
        return x;
    };

    std::vector<Eigen::VectorXd> pos(cfg.swarm_size), vel(cfg.swarm_size),
        pbest(cfg.swarm_size);
    std::vector<double> pbest_val(cfg.swarm_size,
                                  std::numeric_limits<double>::infinity());
    Eigen::VectorXd gbest;
    double gbest_val = std::numeric_limits<double>::infinity();

    for (int i = 0; i < cfg.swarm_size; ++i) {
        pos[i] = sample_position();
        vel[i] = Eigen::VectorXd::Zero(n);
    }
    if (warm_start != nullptr)
        pos[0] = warm_start->lengthscales.array().log10().cwiseMax(lo).cwiseMin(hi);

    auto consider = [&](int i) {
        const double v = psi_at(design, pos[i]);
        if (v < pbest_val[i]) {
            pbest_val[i] = v;
            pbest[i] = pos[i];
        }
        if (v < gbest_val) {
            gbest_val = v;
            gbest = pos[i];
        }
    };

    for (int i = 0; i < cfg.swarm_size; ++i) consider(i);

    for (int it = 0; it < cfg.iterations; ++it) {
        for (int i = 0; i < cfg.swarm_size; ++i) {
            for (int d = 0; d < n; ++d) {
                const double r1 = unit(rng), r2 = unit(rng);
                vel[i](d) = cfg.inertia * vel[i](d) +
                            cfg.cognitive * r1 * (pbest[i](d) - pos[i](d)) +
                            cfg.social * r2 * (gbest(d) - pos[i](d));
                pos[i](d) += vel[i](d);
                if (pos[i](d) < lo || pos[i](d) > hi) {
                    pos[i](d) = std::clamp(pos[i](d), lo, hi);
                    vel[i](d) = 0.0;
                }
            }
            consider(i);
        }
    }

    if (!std::isfinite(gbest_val) || gbest.size() == 0)
        throw SingularCorrelation("every swarm particle failed to factorize");

    // compass pattern search on the incumbent
    double step = 0.25;
    for (int it = 0; it < cfg.pattern_steps; ++it) {
        bool improved = false;
        for (int d = 0; d < n; ++d) {
            for (double sgn : {+1.0, -1.0}) {
                Eigen::VectorXd probe = gbest;
                probe(d) = std::clamp(probe(d) + sgn * step, lo, hi);
                const double v = psi_at(design, probe);
                if (v < gbest_val) {
                    gbest_val = v;
                    gbest = probe;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }

    Hyperparameters theta;
    theta.lengthscales = Eigen::pow(10.0, gbest.array());
    return fit_given_theta(design, theta);
}

nlohmann::json to_json(const KrigingModel& model) {
    nlohmann::json doc;
    doc["format"] = "mob-kriging/1";
    doc["dimension"] = model.design.dimension();
    nlohmann::json pts = nlohmann::json::array();
    for (int i = 0; i < model.design.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int d = 0; d < model.design.dimension(); ++d) row.push_back(model.design.points(i, d));
        pts.push_back(row);
    }
    doc["points"] = pts;
    doc["values"] = std::vector<double>(model.design.values.data(),
                                        model.design.values.data() + model.design.size());
    doc["lengthscales"] =
        std::vector<double>(model.theta.lengthscales.data(),
                            model.theta.lengthscales.data() + model.theta.lengthscales.size());
    doc["mu_hat"] = model.mu_hat;
    doc["sigma2_hat"] = model.sigma2_hat;
    doc["nugget"] = model.nugget;
    return doc;
}

KrigingModel model_from_json(const nlohmann::json& doc) {
    if (doc.at("format").get<std::string>() != "mob-kriging/1")
        throw std::invalid_argument("unsupported kriging model format");
    const int n = doc.at("dimension").get<int>();
    const auto& pts = doc.at("points");
    const int m = static_cast<int>(pts.size());

    DesignSet design;
    design.points.resize(m, n);
    for (int i = 0; i < m; ++i)
        for (int d = 0; d < n; ++d) design.points(i, d) = pts[i][d].get<double>();
    const auto vals = doc.at("values").get<std::vector<double>>();
    design.values = Eigen::Map<const Eigen::VectorXd>(vals.data(), m);

    Hyperparameters theta;
    const auto ls = doc.at("lengthscales").get<std::vector<double>>();
    theta.lengthscales = Eigen::Map<const Eigen::VectorXd>(ls.data(), n);

    KrigingModel model = fit_given_theta(design, theta, doc.at("nugget").get<double>());
    const double mu_stored = doc.at("mu_hat").get<double>();
    if (std::abs(model.mu_hat - mu_stored) > 1e-6 * (1.0 + std::abs(mu_stored)))
        throw std::invalid_argument("stored trend estimate inconsistent with design");
    return model;
}

} // namespace mob::kriging
