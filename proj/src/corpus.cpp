#include "qhd/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qhd {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

// d/dx sqrt(|x|); the selection at the kink is 0.
double dsqrtabs(double x) {
    if (x == 0.0) return 0.0;
    return sgn(x) / (2.0 * std::sqrt(std::abs(x)));
}

// sin(pi u)/(pi u) and its derivative, stable near u = 0.
double sinc_pi(double u) {
    double a = kPi * u;
    if (std::abs(a) < 1e-6) return 1.0 - a * a / 6.0;
    return std::sin(a) / a;
}

double dsinc_pi(double u) {
    double a = kPi * u;
    if (std::abs(a) < 1e-6) return -kPi * a / 3.0;
    return (a * std::cos(a) - std::sin(a)) / (kPi * u * u);
}

ObjectiveSpec make_wf() {
    ObjectiveSpec s;
    s.name = "WF";
    s.dim = 2;
    s.domain = {{-10, 10}, {-10, 10}};
    auto branches = [](const Point& p, double out[3]) {
        double q = 10.0 * p[0] / (p[0] + 0.1);
        out[0] = 0.5 * (p[0] + q + 2.0 * p[1] * p[1]);
        out[1] = 0.5 * (-p[0] + q + 2.0 * p[1] * p[1]);
        out[2] = 0.5 * (p[0] - q - 2.0 * p[1] * p[1]);
    };
    s.eval_fn = [branches](const Point& p) {
        double b[3];
        branches(p, b);
        return std::max({b[0], b[1], b[2]});
    };
    s.subgrad_fn = [branches](const Point& p) -> Point {
        double b[3];
        branches(p, b);
        int arg = int(std::max_element(b, b + 3) - b);
        double dq = 1.0 / ((p[0] + 0.1) * (p[0] + 0.1));
        switch (arg) {
            case 0: return {0.5 * (1.0 + dq), 2.0 * p[1]};
            case 1: return {0.5 * (-1.0 + dq), 2.0 * p[1]};
            default: return {0.5 * (1.0 - dq), -2.0 * p[1]};
        }
    };
    s.known_min_value = 0.0;
    s.known_min_points = {{0.0, 0.0}};
    return s;
}

ObjectiveSpec make_crownedcross() {
    ObjectiveSpec s;
    s.name = "CROWNEDCROSS";
    s.dim = 2;
    s.domain = {{-10, 15}, {-10, 15}};
    s.eval_fn = [](const Point& p) {
        double r = std::hypot(p[0], p[1]);
        double inner = std::sin(p[0]) * std::sin(p[1]) * std::exp(100.0 - r / kPi);
        return 1e-4 * std::pow(std::abs(inner) + 1.0, 0.1);
    };
    s.subgrad_fn = [](const Point& p) -> Point {
        double r = std::hypot(p[0], p[1]);
        double e = std::exp(100.0 - r / kPi);
        double s1 = std::sin(p[0]), s2 = std::sin(p[1]);
        double inner = s1 * s2 * e;
        double pref = 1e-4 * 0.1 * std::pow(std::abs(inner) + 1.0, -0.9) * sgn(inner);
        Point g(2, 0.0);
        for (int i = 0; i < 2; ++i) {
            double dr = r > 1e-12 ? p[i] / r : 0.0;
            double dinner = (i == 0 ? std::cos(p[0]) * s2 : s1 * std::cos(p[1])) * e
                            - s1 * s2 * e * dr / kPi;
            g[i] = pref * dinner;
        }
        return g;
    };
    s.known_min_value = 1e-4;
    s.known_min_points = {{0.0, 0.0}};
    return s;
}

ObjectiveSpec make_bukin06() {
    ObjectiveSpec s;
    s.name = "BUKIN06";
    s.dim = 2;
    s.domain = {{-15, -5}, {-3, 3}};
    s.eval_fn = [](const Point& p) {
        double u = p[1] - 0.01 * p[0] * p[0];
        return 100.0 * std::sqrt(std::abs(u)) + 0.01 * std::abs(p[0] + 10.0);
    };
    s.subgrad_fn = [](const Point& p) -> Point {
        double u = p[1] - 0.01 * p[0] * p[0];
        double du = dsqrtabs(u);
        return {100.0 * du * (-0.02 * p[0]) + 0.01 * sgn(p[0] + 10.0), 100.0 * du};
    };
    s.known_min_value = 0.0;
    s.known_min_points = {{-10.0, 1.0}};
    return s;
}

ObjectiveSpec make_keane() {
    ObjectiveSpec s;
    s.name = "KEANE";
    s.dim = 2;
    s.domain = {{1e-8, 10}, {1e-8, 10}};
    s.eval_fn = [](const Point& p) {
        double c = std::cos(p[0]) * std::cos(p[0]) - std::cos(p[1]) * std::cos(p[1]);
        double den = std::sqrt(p[0] * p[0] + 2.0 * p[1] * p[1]);
        return -c * c / den;
    };
    s.subgrad_fn = [](const Point& p) -> Point {
        double c = std::cos(p[0]) * std::cos(p[0]) - std::cos(p[1]) * std::cos(p[1]);
        double q = p[0] * p[0] + 2.0 * p[1] * p[1];
        double den = std::sqrt(q);
        double dc0 = -std::sin(2.0 * p[0]);
        double dc1 = std::sin(2.0 * p[1]);
        return {-2.0 * c * dc0 / den + c * c * p[0] / (den * q),
                -2.0 * c * dc1 / den + c * c * 2.0 * p[1] / (den * q)};
    };
    // Optimum recorded exactly as printed in the source listing, sign
    // convention and all; see README notes on KEANE.
    s.known_min_value = 0.673207;
    s.known_min_points = {{1.60086, 0.468498}};
    return s;
}

ObjectiveSpec make_schwefel() {
    ObjectiveSpec s;
    s.name = "SCHWEFEL";
    s.dim = 1;
    s.domain = {{-500, 500}};
    s.eval_fn = [](const Point& p) {
        return 418.9828872724336 - p[0] * std::sin(std::sqrt(std::abs(p[0])));
    };
    s.subgrad_fn = [](const Point& p) -> Point {
        double r = std::sqrt(std::abs(p[0]));
        return {-std::sin(r) - 0.5 * r * std::cos(r)};
    };
    s.known_min_value = 0.0;
    s.known_min_points = {{420.9687474737558}};
    return s;
}

ObjectiveSpec make_ackley() {
    ObjectiveSpec s;
    s.name = "ACKLEY";
    s.dim = 2;
    s.domain = {{-15, 30}, {-15, 30}};
    s.eval_fn = [](const Point& p) {
        double r = std::sqrt((p[0] * p[0] + p[1] * p[1]) / 2.0);
        double c = (std::cos(2.0 * kPi * p[0]) + std::cos(2.0 * kPi * p[1])) / 2.0;
        return -20.0 * std::exp(-0.2 * r) - std::exp(c) + 20.0 + std::exp(1.0);
    };
    s.subgrad_fn = [](const Point& p) -> Point {
        double r = std::sqrt((p[0] * p[0] + p[1] * p[1]) / 2.0);
        double c = (std::cos(2.0 * kPi * p[0]) + std::cos(2.0 * kPi * p[1])) / 2.0;
        Point g(2, 0.0);
        for (int i = 0; i < 2; ++i) {
            double dr = r > 1e-12 ? p[i] / (2.0 * r) : 0.0;
            g[i] = 4.0 * std::exp(-0.2 * r) * dr
                   + kPi * std::sin(2.0 * kPi * p[i]) * std::exp(c);
        }
        return g;
    };
    s.known_min_value = 0.0;
    s.known_min_points = {{0.0, 0.0}};
    return s;
}

ObjectiveSpec make_xinsheyang04() {
    ObjectiveSpec s;
    s.name = "XINSHEYANG04";
    s.dim = 2;
    s.domain = {{-10, 10}, {-10, 10}};
    s.eval_fn = [](const Point& p) {
        double S = std::sin(p[0]) * std::sin(p[0]) + std::sin(p[1]) * std::sin(p[1]);
        double e1 = std::exp(-p[0] * p[0] - p[1] * p[1]);
        double w = std::sin(std::sqrt(std::abs(p[0])));
        double v = std::sin(std::sqrt(std::abs(p[1])));
        double e2 = std::exp(-w * w - v * v);
        return (S - e1) * e2;
    };
    s.subgrad_fn = [](const Point& p) -> Point {
        double S = std::sin(p[0]) * std::sin(p[0]) + std::sin(p[1]) * std::sin(p[1]);
        double e1 = std::exp(-p[0] * p[0] - p[1] * p[1]);
        double sq[2] = {std::sqrt(std::abs(p[0])), std::sqrt(std::abs(p[1]))};
        double e2 = std::exp(-std::sin(sq[0]) * std::sin(sq[0])
                             - std::sin(sq[1]) * std::sin(sq[1]));
        Point g(2, 0.0);
        for (int i = 0; i < 2; ++i) {
            double dS = std::sin(2.0 * p[i]);
            double de1 = -2.0 * p[i] * e1;
            double de2 = -e2 * std::sin(2.0 * sq[i]) * dsqrtabs(p[i]);
            g[i] = (dS - de1) * e2 + (S - e1) * de2;
        }
        return g;
    };
    s.known_min_value = -1.0;
    s.known_min_points = {{0.0, 0.0}};
    return s;
}

ObjectiveSpec make_carromtable() {
    ObjectiveSpec s;
    s.name = "CARROMTABLE";
    s.dim = 2;
    s.domain = {{-10, 10}, {-10, 10}};
    s.eval_fn = [](const Point& p) {
        double r = std::hypot(p[0], p[1]);
        double a = std::exp(std::abs(2.0 - 2.0 * r / kPi));
        double c0 = std::cos(p[0]), c1 = std::cos(p[1]);
        return -(1.0 / 30.0) * a * c0 * c0 * c1 * c1;
    };
    s.subgrad_fn = [](const Point& p) -> Point {
        double r = std::hypot(p[0], p[1]);
        double u = 2.0 - 2.0 * r / kPi;
        double a = std::exp(std::abs(u));
        double c0 = std::cos(p[0]), c1 = std::cos(p[1]);
        double cc = c0 * c0 * c1 * c1;
        Point g(2, 0.0);
        for (int i = 0; i < 2; ++i) {
            double dr = r > 1e-12 ? p[i] / r : 0.0;
            double da = a * sgn(u) * (-2.0 / kPi) * dr;
            double dcc = (i == 0 ? -std::sin(2.0 * p[0]) * c1 * c1
                                 : -std::sin(2.0 * p[1]) * c0 * c0);
            g[i] = -(1.0 / 30.0) * (da * cc + a * dcc);
        }
        return g;
    };
    s.known_min_value = -24.1568155165;
    double m = 9.646157266349;
    s.known_min_points = {{m, m}, {m, -m}, {-m, m}, {-m, -m}};
    return s;
}

ObjectiveSpec make_rana() {
    ObjectiveSpec s;
    s.name = "RANA";
    s.dim = 2;
    s.domain = {{-500, 500}, {-500, 500}};
    s.eval_fn = [](const Point& p) {
        double a = p[1] + p[0] + 1.0;
        double b = p[1] - p[0] + 1.0;
        double ra = std::sqrt(std::abs(a)), rb = std::sqrt(std::abs(b));
        return p[0] * std::sin(rb) * std::cos(ra)
               + (p[1] + 1.0) * std::sin(ra) * std::cos(rb);
    };
    s.subgrad_fn = [](const Point& p) -> Point {
        double a = p[1] + p[0] + 1.0;
        double b = p[1] - p[0] + 1.0;
        double ra = std::sqrt(std::abs(a)), rb = std::sqrt(std::abs(b));
        double sa = std::sin(ra), ca = std::cos(ra);
        double sb = std::sin(rb), cb = std::cos(rb);
        double da = dsqrtabs(a);   // d(ra)/dx2 = d(ra)/dx1
        double db = dsqrtabs(b);   // d(rb)/dx2; d(rb)/dx1 = -db
        double d1 = sb * ca + p[0] * (cb * (-db) * ca - sb * sa * da)
                    + (p[1] + 1.0) * (ca * da * cb - sa * sb * (-db));
        double d2 = p[0] * (cb * db * ca - sb * sa * da) + sa * cb
                    + (p[1] + 1.0) * (ca * da * cb - sa * sb * db);
        return {d1, d2};
    };
    s.known_min_value = -500.802160296664;
    s.known_min_points = {{-300.3376328023, 500.0}};
    return s;
}

ObjectiveSpec make_dropwave() {
    ObjectiveSpec s;
    s.name = "DROPWAVE";
    s.dim = 3;
    s.domain = {{-5.12, 5.12}, {-5.12, 5.12}, {-5.12, 5.12}};
    s.eval_fn = [](const Point& p) {
        double q = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        double r = std::sqrt(q);
        return -(1.0 + std::cos(12.0 * r)) / (2.0 + 0.5 * q);
    };
    s.subgrad_fn = [](const Point& p) -> Point {
        double q = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        double r = std::sqrt(q);
        double n = 1.0 + std::cos(12.0 * r);
        double d = 2.0 + 0.5 * q;
        Point g(3, 0.0);
        for (int i = 0; i < 3; ++i) {
            double dr = r > 1e-12 ? p[i] / r : 0.0;
            g[i] = (12.0 * std::sin(12.0 * r) * dr * d + n * p[i]) / (d * d);
        }
        return g;
    };
    s.known_min_value = -1.0;
    s.known_min_points = {{0.0, 0.0, 0.0}};
    return s;
}

ObjectiveSpec make_layeb04() {
    ObjectiveSpec s;
    s.name = "LAYEB04";
    s.dim = 3;
    s.domain = {{-10, 10}, {-10, 10}, {-10, 10}};
    s.eval_fn = [](const Point& p) {
        double v = 0.0;
        for (int i = 0; i < 2; ++i) {
            v += std::log(std::abs(p[i] * p[i + 1]) + 0.001)
                 + std::cos(p[i] + p[i + 1]);
        }
        return v;
    };
    s.subgrad_fn = [](const Point& p) -> Point {
        Point g(3, 0.0);
        for (int i = 0; i < 2; ++i) {
            double prod = p[i] * p[i + 1];
            double denom = std::abs(prod) + 0.001;
            double dsin = std::sin(p[i] + p[i + 1]);
            g[i] += sgn(prod) * p[i + 1] / denom - dsin;
            g[i + 1] += sgn(prod) * p[i] / denom - dsin;
        }
        return g;
    };
    s.known_min_value = 2.0 * std::log(0.001) - 2.0;
    s.known_min_points = {{0.0, -3.0 * kPi, 0.0}, {0.0, -kPi, 0.0},
                          {0.0, kPi, 0.0}, {0.0, 3.0 * kPi, 0.0}};
    return s;
}

ObjectiveSpec make_damavandi() {
    ObjectiveSpec s;
    s.name = "DAMAVANDI";
    s.dim = 2;
    s.domain = {{0, 14}, {0, 14}};
    s.eval_fn = [](const Point& p) {
        double u = p[0] - 2.0, v = p[1] - 2.0;
        double sv = sinc_pi(u) * sinc_pi(v);
        double q = 2.0 + (p[0] - 7.0) * (p[0] - 7.0) + 2.0 * (p[1] - 7.0) * (p[1] - 7.0);
        return (1.0 - std::pow(std::abs(sv), 5.0)) * q;
    };
    s.subgrad_fn = [](const Point& p) -> Point {
        double u = p[0] - 2.0, v = p[1] - 2.0;
        double gu = sinc_pi(u), gv = sinc_pi(v);
        double sv = gu * gv;
        double a5 = std::pow(std::abs(sv), 5.0);
        double pref = -5.0 * std::pow(std::abs(sv), 4.0) * sgn(sv);
        double q = 2.0 + (p[0] - 7.0) * (p[0] - 7.0) + 2.0 * (p[1] - 7.0) * (p[1] - 7.0);
        return {pref * dsinc_pi(u) * gv * q + (1.0 - a5) * 2.0 * (p[0] - 7.0),
                pref * gu * dsinc_pi(v) * q + (1.0 - a5) * 4.0 * (p[1] - 7.0)};
    };
    s.known_min_value = 0.0;
    s.known_min_points = {{2.0 + 1e-10, 2.0 + 1e-10}};
    return s;
}

ObjectiveSpec make_x2() {
    ObjectiveSpec s;
    s.name = "X2";
    s.dim = 1;
    s.domain = {{-1, 1}};
    s.eval_fn = [](const Point& p) { return p[0] * p[0]; };
    s.subgrad_fn = [](const Point& p) -> Point { return {2.0 * p[0]}; };
    s.known_min_value = 0.0;
    s.known_min_points = {{0.0}};
    s.convexity = Convexity::StronglyConvex;
    s.mu = 2.0;
    return s;
}

ObjectiveSpec make_abs() {
    ObjectiveSpec s;
    s.name = "ABS";
    s.dim = 1;
    s.domain = {{-1, 1}};
    s.eval_fn = [](const Point& p) { return std::abs(p[0]); };
    s.subgrad_fn = [](const Point& p) -> Point { return {sgn(p[0])}; };
    s.known_min_value = 0.0;
    s.known_min_points = {{0.0}};
    s.convexity = Convexity::Convex;
    return s;
}

ObjectiveSpec make_expabs() {
    ObjectiveSpec s;
    s.name = "EXPABS";
    s.dim = 1;
    s.domain = {{-1, 1}};
    s.eval_fn = [](const Point& p) { return std::exp(std::abs(p[0])) - 1.0; };
    s.subgrad_fn = [](const Point& p) -> Point {
        return {sgn(p[0]) * std::exp(std::abs(p[0]))};
    };
    s.known_min_value = 0.0;
    s.known_min_points = {{0.0}};
    s.convexity = Convexity::StronglyConvex;
    s.mu = 1.0;
    return s;
}

const std::map<std::string, ObjectiveSpec (*)()>& registry() {
    static const std::map<std::string, ObjectiveSpec (*)()> reg = {
        {"WF", make_wf},
        {"CROWNEDCROSS", make_crownedcross},
        {"BUKIN06", make_bukin06},
        {"KEANE", make_keane},
        {"SCHWEFEL", make_schwefel},
        {"ACKLEY", make_ackley},
        {"XINSHEYANG04", make_xinsheyang04},
        {"CARROMTABLE", make_carromtable},
        {"RANA", make_rana},
        {"DROPWAVE", make_dropwave},
        {"LAYEB04", make_layeb04},
        {"DAMAVANDI", make_damavandi},
        {"X2", make_x2},
        {"ABS", make_abs},
        {"EXPABS", make_expabs},
    };
    return reg;
}

}  // namespace

bool ObjectiveSpec::contains(const Point& p) const {
    for (int i = 0; i < dim; ++i) {
        if (p[i] < domain[i].lo || p[i] > domain[i].hi) return false;
    }
    return true;
}

double BarrierWrappedObjective::value(const Point& p) const {
    if (inner.contains(p)) return inner.value(p);
    Point q = clip_to_box(p, inner.domain);
    return inner.value(q) + growth_rate * distance_to_box(p, inner.domain);
}

const std::vector<std::string>& corpus_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, _] : registry()) v.push_back(name);
        return v;
    }();
    return names;
}

ObjectiveSpec lookup(const std::string& name) {
    auto it = registry().find(name);
    if (it == registry().end()) throw UnknownFunction(name);
    return it->second();
}

double evaluate(const ObjectiveSpec& spec, const Point& p) {
    if (int(p.size()) != spec.dim) throw DomainViolation("point dimension mismatch");
    if (!spec.contains(p)) throw DomainViolation("point outside domain of " + spec.name);
    return spec.eval_fn(p);
}

Point clarke_subgradient(const ObjectiveSpec& spec, const Point& p) {
    return spec.subgrad_fn(p);
}

ObjectiveSpec rescale_to_hypercube(const ObjectiveSpec& spec, double half_width) {
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw ConfigError("half_width must be finite and positive");
    }
    ObjectiveSpec out;
    out.name = spec.name;
    out.dim = spec.dim;
    out.domain.assign(spec.dim, Interval{-half_width, half_width});
    out.known_min_value = spec.known_min_value;
    out.convexity = spec.convexity;
    out.mu = spec.mu;

    const double L = half_width;
    std::vector<Interval> box = spec.domain;
    auto to_original = [box, L](const Point& x) {
        Point y(x.size());
        for (size_t i = 0; i < x.size(); ++i) {
            y[i] = box[i].lo + box[i].width() / (2.0 * L) * (x[i] + L);
        }
        return y;
    };
    auto inner_eval = spec.eval_fn;
    auto inner_grad = spec.subgrad_fn;
    out.eval_fn = [to_original, inner_eval](const Point& x) {
        return inner_eval(to_original(x));
    };
    out.subgrad_fn = [to_original, inner_grad, box, L](const Point& x) {
        Point g = inner_grad(to_original(x));
        for (size_t i = 0; i < g.size(); ++i) g[i] *= box[i].width() / (2.0 * L);
        return g;
    };
    for (const Point& q : spec.known_min_points) {
        Point x(q.size());
        for (size_t i = 0; i < q.size(); ++i) {
            x[i] = 2.0 * L * (q[i] - box[i].lo) / box[i].width() - L;
        }
        out.known_min_points.push_back(x);
    }
    return out;
}

BarrierWrappedObjective wrap_barrier(const ObjectiveSpec& spec, double growth_rate) {
    if (!(growth_rate > 0.0)) throw ConfigError("growth_rate must be positive");
    return BarrierWrappedObjective{spec, growth_rate};
}

ObjectiveSpec centered(const ObjectiveSpec& spec) {
    if (spec.known_min_points.empty()) {
        throw ConfigError("centered() requires a known minimizer");
    }
    ObjectiveSpec out;
    out.name = spec.name + "_centered";
    out.dim = spec.dim;
    const Point shift = spec.known_min_points.front();
    const double offset = spec.known_min_value;
    out.domain.resize(spec.dim);
    for (int i = 0; i < spec.dim; ++i) {
        out.domain[i] = {spec.domain[i].lo - shift[i], spec.domain[i].hi - shift[i]};
    }
    auto inner_eval = spec.eval_fn;
    auto inner_grad = spec.subgrad_fn;
    out.eval_fn = [inner_eval, shift, offset](const Point& x) {
        Point y(x.size());
        for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] + shift[i];
        return inner_eval(y) - offset;
    };
    out.subgrad_fn = [inner_grad, shift](const Point& x) {
        Point y(x.size());
        for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] + shift[i];
        return inner_grad(y);
    };
    out.known_min_value = 0.0;
    for (const Point& q : spec.known_min_points) {
        Point x(q.size());
        for (size_t i = 0; i < q.size(); ++i) x[i] = q[i] - shift[i];
        out.known_min_points.push_back(x);
    }
    out.convexity = spec.convexity;
    out.mu = spec.mu;
    return out;
}

Point clip_to_box(const Point& p, const std::vector<Interval>& domain) {
    Point q(p.size());
    for (size_t i = 0; i < p.size(); ++i) {
        q[i] = std::clamp(p[i], domain[i].lo, domain[i].hi);
    }
    return q;
}

double distance_to_box(const Point& p, const std::vector<Interval>& domain) {
    double s = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        double d = 0.0;
        if (p[i] < domain[i].lo) d = domain[i].lo - p[i];
        else if (p[i] > domain[i].hi) d = p[i] - domain[i].hi;
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace qhd
