#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qhd/errors.hpp"

namespace qhd {

using Point = std::vector<double>;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
};

enum class Convexity { Convex, StronglyConvex, Nonconvex };

/// A test function together with its box domain, a deterministic Clarke
/// subgradient selection, and the known global optimum.
struct ObjectiveSpec {
    std::string name;
    int dim = 1;
    std::vector<Interval> domain;
    std::function<double(const Point&)> eval_fn;
    std::function<Point(const Point&)> subgrad_fn;
    double known_min_value = 0.0;
    std::vector<Point> known_min_points;
    Convexity convexity = Convexity::Nonconvex;
    double mu = 0.0;  // strong convexity modulus, when tagged StronglyConvex

    bool contains(const Point& p) const;
    /// Raw formula value; no domain check.
    double value(const Point& p) const { return eval_fn(p); }
};

/// Objective extended outside its box: f(clip(p)) + growth_rate * dist(p, box).
struct BarrierWrappedObjective {
    ObjectiveSpec inner;
    double growth_rate = 1e3;

    double value(const Point& p) const;
};

const std::vector<std::string>& corpus_names();

ObjectiveSpec lookup(const std::string& name);

/// Formula value; throws DomainViolation outside the box.
double evaluate(const ObjectiveSpec& spec, const Point& p);

/// One deterministic element of the Clarke subdifferential.
Point clarke_subgradient(const ObjectiveSpec& spec, const Point& p);

/// Affine change of variables mapping [-L, L]^d onto the original box.
ObjectiveSpec rescale_to_hypercube(const ObjectiveSpec& spec, double half_width);

BarrierWrappedObjective wrap_barrier(const ObjectiveSpec& spec, double growth_rate = 1e3);

/// Shift coordinates so the first known minimizer sits at the origin and the
/// minimum value is zero. Used by the Lyapunov observables.
ObjectiveSpec centered(const ObjectiveSpec& spec);

Point clip_to_box(const Point& p, const std::vector<Interval>& domain);
double distance_to_box(const Point& p, const std::vector<Interval>& domain);

}  // namespace qhd
