#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "smallball/functional.hpp"

namespace smallball {

struct CurveParams {
    int n = 1;
    double b = 1.0;
    std::optional<double> expected_norm;
    std::optional<double> beta;
};

/// A named closed-form bound t -> value. Values are unclamped; `clamped`
/// gives min(1, value). Outside a formula's domain (t >= 1 for the 2x2 and
/// product bounds) the value is +inf, i.e. vacuous.
struct BoundCurve {
    std::string name;
    CurveParams params;
    std::function<double(double)> evaluator;
    std::string formula;
    bool clamp = true;

    double operator()(double t) const { return evaluator(t); }
    double clamped(double t) const;
};

/// Catalogue names: det, norm, sn_closed, sn_raw, sym_norm, schedule,
/// product_smallball, det2x2, envelope.
const std::vector<std::string>& curve_names();
bool is_curve_name(const std::string& name);

/// Throws std::invalid_argument for unknown names or missing parameters
/// (sn_closed and sn_raw need expected_norm; det2x2 needs n = 2).
BoundCurve make_curve(const std::string& name, const CurveParams& params);

/// The functional a curve bounds, or nullopt for curves that are not
/// probability bounds on a matrix functional (product_smallball, envelope).
std::optional<Functional> curve_functional(const std::string& name);
/// Whether the curve needs an expected operator norm.
bool curve_needs_expected_norm(const std::string& name);

} // namespace smallball
