#include "smallball/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "smallball/bounds.hpp"

namespace smallball {

std::string_view to_string(Functional f) {
    switch (f) {
    case Functional::DetRootN: return "det_root_n";
    case Functional::SMin: return "s_min";
    case Functional::OperatorNorm: return "operator_norm";
    case Functional::PermanentRootN: return "permanent_root_n";
    }
    return "?";
}

Functional parse_functional(std::string_view name) {
    for (auto f : {Functional::DetRootN, Functional::SMin, Functional::OperatorNorm, Functional::PermanentRootN})
        if (to_string(f) == name) return f;
    throw std::invalid_argument("unknown functional '" + std::string(name) + "'");
}

double BoundCurve::clamped(double t) const {
    const double v = evaluator(t);
    return clamp ? std::min(1.0, v) : v;
}

const std::vector<std::string>& curve_names() {
    static const std::vector<std::string> names{"det",      "norm",    "sn_closed",         "sn_raw",  "sym_norm",
                                                "schedule", "product_smallball", "det2x2", "envelope"};
    return names;
}

bool is_curve_name(const std::string& name) {
    const auto& names = curve_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::optional<Functional> curve_functional(const std::string& name) {
    if (name == "det" || name == "schedule" || name == "det2x2") return Functional::DetRootN;
    if (name == "norm" || name == "sym_norm") return Functional::OperatorNorm;
    if (name == "sn_closed" || name == "sn_raw") return Functional::SMin;
    return std::nullopt;
}

bool curve_needs_expected_norm(const std::string& name) { return name == "sn_closed" || name == "sn_raw"; }

BoundCurve make_curve(const std::string& name, const CurveParams& p) {
    if (!is_curve_name(name)) throw std::invalid_argument("unknown bound curve '" + name + "'");
    if (p.n < 1) throw std::invalid_argument("curve '" + name + "': n must be >= 1");
    if (!(p.b > 0)) throw std::invalid_argument("curve '" + name + "': b must be > 0");
    if (curve_needs_expected_norm(name) && !(p.expected_norm && *p.expected_norm > 0))
        throw std::invalid_argument("curve '" + name + "' requires a positive expected_norm");

    constexpr double inf = std::numeric_limits<double>::infinity();
    const int n = p.n;
    const double b = p.b;
    BoundCurve c{name, p, {}, {}, true};

    if (name == "det") {
        c.evaluator = [=](double t) { return det_bound(n, b, t); };
        c.formula = "P[|det(A+T)|^(1/n) <= t] <= 2bnt";
    } else if (name == "norm") {
        c.evaluator = [=](double t) { return norm_bound(n, b, t); };
        c.formula = "P[||A+T|| <= t] <= 2bnt";
    } else if (name == "sn_closed") {
        const double e = *p.expected_norm;
        c.evaluator = [=](double t) { return sn_bound_closed(n, b, e, t); };
        c.formula = "P[s_n <= t] <= (2b)^(n/(2n-1)) E||T||^((n-1)/(2n-1)) t^(1/(2n-1))";
    } else if (name == "sn_raw") {
        const double e = *p.expected_norm;
        if (p.beta) {
            const double beta = *p.beta;
            c.evaluator = [=](double t) { return sn_bound_raw(n, b, e, t, beta); };
            c.formula = "P[s_n <= t] <= 2b beta^((n-1)/n) t^(1/n) + E||T||/beta, fixed beta";
        } else {
            c.evaluator = [=](double t) { return optimize_sn_beta(n, b, e, t).value; };
            c.formula = "P[s_n <= t] <= min_beta 2b beta^((n-1)/n) t^(1/n) + E||T||/beta";
        }
    } else if (name == "sym_norm") {
        c.evaluator = [=](double t) { return symmetric_norm_bound(n, b, t); };
        c.formula = "P[||A+T|| <= t] <= (2bt)^n";
    } else if (name == "schedule") {
        // Geometric schedule ending at eps_n = t^n; reproduces 2bnt.
        c.evaluator = [=](double t) {
            if (t <= 0) return 0.0;
            const double tau = std::pow(t, n);
            if (!(tau < 1)) return inf;
            // tau underflows for large n; every ratio term is still t.
            if (tau == 0) return 2.0 * b * (t + (n - 1) * t);
            const auto eps = geometric_schedule(n, tau);
            return schedule_bound<double>(b, eps);
        };
        c.formula = "2b[eps_1 + sum eps_k/eps_(k-1)], eps_j = t^j";
    } else if (name == "product_smallball") {
        c.evaluator = [=](double t) {
            if (t <= 0) return 0.0;
            return t < 1 ? product_smallball_bound(b, t) : inf;
        };
        c.formula = "sup_gamma P[|XY+gamma| < t] <= 4bt + 4b^2 t(1+|log t|)";
    } else if (name == "det2x2") {
        if (n != 2) throw std::invalid_argument("curve 'det2x2' applies to n = 2 only");
        c.evaluator = [=](double t) {
            if (t <= 0) return 0.0;
            return t < 1 ? twobytwo_det_bound(b, t) : inf;
        };
        c.formula = "P[|det T|^(1/2) <= t] <= 4bt^2 + 4b^2 t^2 (1+2|log t|)";
    } else { // envelope
        c.evaluator = [=](double z) { return product_density_envelope(b, z); };
        c.formula = "f_XY(z) <= 2b + 2b^2|log|z|| (|z|<=1), 2b (|z|>=1)";
        c.clamp = false;
    }
    return c;
}

} // namespace smallball
