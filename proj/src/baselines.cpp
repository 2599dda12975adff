#include "qhd/baselines.hpp"

#include <cmath>
#include <limits>

#include "qhd/rng.hpp"

namespace qhd {

namespace {

double step_size(const SubgradConfig& cfg, int j) {
    switch (cfg.schedule) {
        case SubgradConfig::StepSchedule::Constant: return cfg.constant_step;
        case SubgradConfig::StepSchedule::SqrtDecay: return cfg.eta / std::sqrt(double(j));
        case SubgradConfig::StepSchedule::StronglyConvex:
            return 2.0 / (cfg.mu * (j + 1));
    }
    throw ConfigError("invalid step schedule");
}

double norm2(const Point& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

}  // namespace

Point project_to_box(const Point& p, const std::vector<Interval>& domain) {
    return clip_to_box(p, domain);
}

BaselineResult subgrad_run(const ObjectiveSpec& objective, const SubgradConfig& config) {
    if (config.budget < 1) throw ConfigError("budget must be >= 1");
    if (!objective.contains(config.x0)) throw DomainViolation("x0 outside domain");

    Point x = config.x0;
    BaselineResult res;
    Point best_x = x;
    double best_f = std::numeric_limits<double>::infinity();
    const bool track_best = config.return_mode == SubgradConfig::ReturnMode::BestIterate
                            || config.record_trajectory;

    for (int j = 1; j <= config.budget; ++j) {
        if (track_best) {
            double f = objective.eval_fn(x);
            ++res.value_queries;
            if (config.record_trajectory) res.trajectory.emplace_back(x, f);
            if (f < best_f) {
                best_f = f;
                best_x = x;
            }
        }
        Point g = objective.subgrad_fn(x);
        ++res.subgradient_queries;
        double s = step_size(config, j);
        for (size_t i = 0; i < x.size(); ++i) x[i] -= s * g[i];
        x = project_to_box(x, objective.domain);
    }

    if (config.return_mode == SubgradConfig::ReturnMode::BestIterate) {
        double f_last = objective.eval_fn(x);
        ++res.value_queries;
        if (f_last < best_f) {
            best_f = f_last;
            best_x = x;
        }
        res.solution = best_x;
        res.f_solution = best_f;
    } else {
        res.solution = x;
        res.f_solution = objective.eval_fn(x);
        res.value_queries = config.record_trajectory ? res.value_queries + 1 : 1;
    }
    return res;
}

BaselineResult lfmsgd_run(const ObjectiveSpec& objective, const LFMSGDConfig& config) {
    if (config.budget < 1) throw ConfigError("budget must be >= 1");
    if (!objective.contains(config.x0)) throw DomainViolation("x0 outside domain");
    if (config.beta < 0.0 || config.beta >= 1.0) throw ConfigError("beta must be in [0,1)");

    double r_eps = config.r_eps;
    if (r_eps < 0.0) {
        double w = 0.0;
        for (const Interval& iv : objective.domain) w = std::max(w, iv.width());
        r_eps = 1e-6 * w;
    }

    Rng rng(config.rng_seed);
    const size_t d = config.x0.size();
    Point x = config.x0;
    Point m(d, 0.0);
    double mu_t = r_eps;       // running max distance from x0, floored
    double m_sq_sum = 0.0;     // sum of ||m_i||^2 up to the current step
    BaselineResult res;

    for (int t = 0; t < config.budget; ++t) {
        Point g = objective.subgrad_fn(x);
        ++res.subgradient_queries;
        if (config.sigma > 0.0) {
            for (size_t i = 0; i < d; ++i) g[i] += config.sigma * rng.gaussian();
        }
        for (size_t i = 0; i < d; ++i) {
            m[i] = config.beta * m[i] + (1.0 - config.beta) * g[i];
        }
        // eta_t uses momentum norms accumulated through step t only.
        double eta = mu_t / std::sqrt(config.epsilon0 + m_sq_sum);
        m_sq_sum += norm2(m);
        for (size_t i = 0; i < d; ++i) x[i] -= eta * m[i];
        x = project_to_box(x, objective.domain);

        double dist = 0.0;
        for (size_t i = 0; i < d; ++i) {
            double dx = x[i] - config.x0[i];
            dist += dx * dx;
        }
        mu_t = std::max(mu_t, std::sqrt(dist));
        if (config.record_trajectory) {
            res.trajectory.emplace_back(x, objective.eval_fn(x));
            ++res.value_queries;
        }
    }

    res.solution = x;
    res.f_solution = objective.eval_fn(x);
    ++res.value_queries;
    return res;
}

}  // namespace qhd
