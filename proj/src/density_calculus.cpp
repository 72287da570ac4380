#include "smallball/density_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "smallball/bounds.hpp"

namespace smallball {

namespace {

// Gaussian tails beyond 12 sigma carry less than 1e-32 of the mass.
constexpr double kTailSigmas = 12.0;
// Geometric breakpoints approaching a log singularity: x, 2x, 4x, ...
void add_geometric(std::vector<double>& pts, double from, double to, double sign) {
    for (double x = from; x < to; x *= 2.0) pts.push_back(sign * x);
}

std::vector<double> kink_points(const Distribution& d) {
    auto k = d.kinks();
    const Interval s = d.truncated_support(kTailSigmas);
    k.push_back(s.lo);
    k.push_back(s.hi);
    return k;
}

} // namespace

Interval product_support(const Distribution& law_x, const Distribution& law_y) {
    const Interval sx = law_x.truncated_support(kTailSigmas), sy = law_y.truncated_support(kTailSigmas);
    const double c[] = {sx.lo * sy.lo, sx.lo * sy.hi, sx.hi * sy.lo, sx.hi * sy.hi};
    return {*std::min_element(std::begin(c), std::end(c)), *std::max_element(std::begin(c), std::end(c))};
}

double product_density(const ProductDensityRequest& req) {
    const double z = req.z;
    if (z == 0 || !std::isfinite(z)) throw std::invalid_argument("product_density: z must be finite and nonzero");
    if (!(req.tolerance.abs_tol > 0 && req.tolerance.rel_tol >= 0))
        throw std::invalid_argument("product_density: tolerance must be positive");

    const Interval sx = req.law_x.truncated_support(kTailSigmas);
    const double az = std::abs(z);

    std::vector<double> pts = {-az, -1.0, 0.0, 1.0, az};
    for (double k : req.law_x.kinks()) pts.push_back(k);
    for (double y : kink_points(req.law_y))
        if (y != 0 && std::isfinite(y)) pts.push_back(z / y);
    // 1/|w| varies over many octaves on |z| <= |w| <= 1; below |z| the scale is |z|.
    const double top = std::max(1.0, az);
    add_geometric(pts, std::min(az, 1.0), top, 1.0);
    add_geometric(pts, std::min(az, 1.0), top, -1.0);
    for (double f = 0.5; f > 1.0 / 128; f *= 0.5) {
        pts.push_back(f * az);
        pts.push_back(-f * az);
    }
    const auto bps = normalize_breakpoints(std::move(pts), sx.lo, sx.hi);

    const auto& fx = req.law_x;
    const auto& fy = req.law_y;
    auto integrand = [&](double w) {
        if (w == 0) return 0.0;
        const double dx = fx.density(w);
        if (dx == 0) return 0.0;
        return dx * fy.density(z / w) / std::abs(w);
    };
    const auto r = integrate(integrand, bps, req.tolerance);
    if (!r.converged) throw QuadratureError("product_density: tolerance not met", r.value, r.error);
    return std::max(0.0, r.value);
}

double integrate_product_density(const Distribution& law_x, const Distribution& law_y, double lo, double hi,
                                 const QuadratureOptions& tol) {
    if (!(lo < hi)) throw std::invalid_argument("integrate_product_density: empty interval");
    const Interval s = product_support(law_x, law_y);
    lo = std::max(lo, s.lo);
    hi = std::min(hi, s.hi);
    if (!(lo < hi)) return 0.0;

    const double b = std::max(law_x.density_sup(), law_y.density_sup());
    // Odd antiderivative of the envelope, A(x) = integral_0^x g.
    auto envelope_antiderivative = [&](double x) {
        return std::copysign(0.5 * envelope_integral_symmetric(b, std::abs(x)), x);
    };
    double window = 0.0;
    const double wlo = std::max(lo, -kZeroWindow), whi = std::min(hi, kZeroWindow);
    if (wlo < whi) window = envelope_antiderivative(whi) - envelope_antiderivative(wlo);

    std::vector<double> pts = {-1.0, 1.0};
    for (double x : kink_points(law_x))
        for (double y : kink_points(law_y)) pts.push_back(x * y);

    const QuadratureOptions inner = tol;
    auto density = [&](double z) {
        if (std::abs(z) < kZeroWindow) return 0.0;
        return product_density({law_x, law_y, z, inner});
    };

    double total = window;
    // Positive and negative parts, each refined geometrically towards 0.
    auto side = [&](double a, double c, double sign) {
        // integrates over sign*[a, c], 0 <= a < c
        a = std::max(a, kZeroWindow);
        if (!(c > a)) return 0.0;
        std::vector<double> p;
        add_geometric(p, a, c, 1.0);
        for (double x : pts)
            if (sign * x > a && sign * x < c) p.push_back(sign * x);
        auto bps = normalize_breakpoints(std::move(p), a, c);
        auto f = [&](double u) { return density(sign * u); };
        const auto r = integrate(f, bps, tol);
        if (!r.converged) throw QuadratureError("integrate_product_density: tolerance not met", r.value, r.error);
        return r.value;
    };
    if (hi > 0) total += side(std::max(lo, 0.0), hi, 1.0);
    if (lo < 0) total += side(std::max(-hi, 0.0), -lo, -1.0);
    return std::clamp(total, 0.0, 1.0);
}

double smallball_from_density(const Distribution& law_x, const Distribution& law_y, double gamma, double t,
                              const QuadratureOptions& tol) {
    if (!(t > 0 && t < 1)) throw std::invalid_argument("smallball_from_density: t must lie in (0,1)");
    // |XY + gamma| < t  <=>  XY in (-gamma - t, -gamma + t)
    return integrate_product_density(law_x, law_y, -gamma - t, -gamma + t, tol);
}

} // namespace smallball
