#pragma once

#include <cstdint>
#include <vector>

#include "qhd/corpus.hpp"

namespace qhd {

struct SubgradConfig {
    enum class StepSchedule { Constant, SqrtDecay, StronglyConvex };
    enum class ReturnMode { FinalIterate, BestIterate };

    StepSchedule schedule = StepSchedule::SqrtDecay;
    double constant_step = 0.1;  // s for Constant
    double eta = 1.0;            // s_j = eta / sqrt(j) for SqrtDecay
    double mu = 1.0;             // s_j = 2 / (mu (j+1)) for StronglyConvex
    int budget = 10000;          // subgradient queries
    Point x0;
    ReturnMode return_mode = ReturnMode::FinalIterate;
    bool record_trajectory = false;
};

struct LFMSGDConfig {
    double beta = 0.9;
    double sigma = 0.0;            // per-coordinate Gaussian noise std
    double epsilon0 = 1e-8;        // denominator stabilizer
    double r_eps = -1.0;           // initial distance floor; <0 = 1e-6 * max width
    int budget = 10000;
    Point x0;
    std::uint64_t rng_seed = 0;
    bool record_trajectory = false;
};

struct BaselineResult {
    Point solution;
    double f_solution = 0.0;
    int subgradient_queries = 0;
    int value_queries = 0;
    /// (iterate, f value) per step when recording was requested.
    std::vector<std::pair<Point, double>> trajectory;
};

Point project_to_box(const Point& p, const std::vector<Interval>& domain);

BaselineResult subgrad_run(const ObjectiveSpec& objective, const SubgradConfig& config);

BaselineResult lfmsgd_run(const ObjectiveSpec& objective, const LFMSGDConfig& config);

}  // namespace qhd
