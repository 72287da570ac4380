#pragma once

#include <cmath>
#include <concepts>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace smallball {

namespace detail {
inline void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}
} // namespace detail

/// P[|det(A+T)|^{1/n} <= t] <= 2 b n t. Unclamped.
template <std::floating_point Scalar>
Scalar det_bound(int n, Scalar b, Scalar t) {
    detail::require(n >= 1, "det_bound: n must be >= 1");
    detail::require(b > 0, "det_bound: b must be > 0");
    detail::require(t >= 0, "det_bound: t must be >= 0");
    return Scalar(2) * b * Scalar(n) * t;
}

/// P[||T|| <= t] <= 2 b n t.
template <std::floating_point Scalar>
Scalar norm_bound(int n, Scalar b, Scalar t) {
    detail::require(n >= 1, "norm_bound: n must be >= 1");
    detail::require(b > 0, "norm_bound: b must be > 0");
    detail::require(t >= 0, "norm_bound: t must be >= 0");
    return Scalar(2) * b * Scalar(n) * t;
}

/// P[s_n(T) <= t] <= (2b)^{n/(2n-1)} (E||T||)^{(n-1)/(2n-1)} t^{1/(2n-1)}.
template <std::floating_point Scalar>
Scalar sn_bound_closed(int n, Scalar b, Scalar expected_norm, Scalar t) {
    detail::require(n >= 1, "sn_bound_closed: n must be >= 1");
    detail::require(b > 0, "sn_bound_closed: b must be > 0");
    detail::require(expected_norm > 0, "sn_bound_closed: expected_norm must be > 0");
    detail::require(t >= 0, "sn_bound_closed: t must be >= 0");
    if (t == 0) return Scalar(0);
    const Scalar d = Scalar(2 * n - 1);
    return std::pow(Scalar(2) * b, Scalar(n) / d) * std::pow(expected_norm, Scalar(n - 1) / d) *
           std::pow(t, Scalar(1) / d);
}

/// Two-term bound before optimizing the norm cut-off beta:
/// 2b beta^{(n-1)/n} t^{1/n} + E||T|| / beta.
template <std::floating_point Scalar>
Scalar sn_bound_raw(int n, Scalar b, Scalar expected_norm, Scalar t, Scalar beta) {
    detail::require(n >= 1, "sn_bound_raw: n must be >= 1");
    detail::require(b > 0, "sn_bound_raw: b must be > 0");
    detail::require(expected_norm > 0, "sn_bound_raw: expected_norm must be > 0");
    detail::require(t >= 0, "sn_bound_raw: t must be >= 0");
    detail::require(beta > 0, "sn_bound_raw: beta must be > 0");
    const Scalar first = Scalar(2) * b * std::pow(beta, Scalar(n - 1) / Scalar(n)) * std::pow(t, Scalar(1) / Scalar(n));
    return first + expected_norm / beta;
}

template <std::floating_point Scalar>
struct BetaOptimum {
    Scalar beta;
    Scalar value;
};

/// Minimizes sn_bound_raw over beta by golden-section search on log(beta),
/// bracketed by [1e-6, 1e9] * expected_norm, relative tolerance 1e-10.
/// At t = 0 the infimum 0 is approached as beta -> infinity.
template <std::floating_point Scalar>
BetaOptimum<Scalar> optimize_sn_beta(int n, Scalar b, Scalar expected_norm, Scalar t) {
    auto f = [&](Scalar log_beta) { return sn_bound_raw(n, b, expected_norm, t, std::exp(log_beta)); };
    f(std::log(expected_norm)); // parameter validation
    if (t == 0) return {std::numeric_limits<Scalar>::infinity(), Scalar(0)};

    const Scalar inv_phi = (std::sqrt(Scalar(5)) - Scalar(1)) / Scalar(2);
    Scalar lo = std::log(Scalar(1e-6) * expected_norm);
    Scalar hi = std::log(Scalar(1e9) * expected_norm);
    Scalar x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    Scalar f1 = f(x1), f2 = f(x2);
    while (hi - lo > Scalar(1e-10)) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    const Scalar best = f1 <= f2 ? x1 : x2;
    return {std::exp(best), f(best)};
}

/// P[||T|| <= t] <= (2bt)^n, using ||T|| >= max_i |T_ii|.
template <std::floating_point Scalar>
Scalar symmetric_norm_bound(int n, Scalar b, Scalar t) {
    detail::require(n >= 1, "symmetric_norm_bound: n must be >= 1");
    detail::require(b > 0, "symmetric_norm_bound: b must be > 0");
    detail::require(t >= 0, "symmetric_norm_bound: t must be >= 0");
    return std::pow(Scalar(2) * b * t, Scalar(n));
}

/// Accumulated bound of the cofactor recursion for an arbitrary schedule
/// eps_1, ..., eps_n: 2b [eps_1 + sum_{k>=2} eps_k / eps_{k-1}].
template <std::floating_point Scalar>
Scalar schedule_bound(Scalar b, std::span<const Scalar> eps) {
    detail::require(b > 0, "schedule_bound: b must be > 0");
    detail::require(!eps.empty(), "schedule_bound: empty schedule");
    for (Scalar e : eps) detail::require(e > 0, "schedule_bound: schedule entries must be > 0");
    Scalar acc = eps[0];
    for (std::size_t k = 1; k < eps.size(); ++k) acc += eps[k] / eps[k - 1];
    return Scalar(2) * b * acc;
}

/// eps_j = tau^{j/n}, j = 1..n; all ratio terms equal tau^{1/n}.
template <std::floating_point Scalar>
std::vector<Scalar> geometric_schedule(int n, Scalar tau) {
    detail::require(n >= 1, "geometric_schedule: n must be >= 1");
    detail::require(tau > 0 && tau < 1, "geometric_schedule: tau must lie in (0,1)");
    std::vector<Scalar> eps(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) eps[static_cast<std::size_t>(j - 1)] = std::pow(tau, Scalar(j) / Scalar(n));
    eps.back() = tau;
    return eps;
}

/// sup_gamma P[|XY + gamma| < t] <= 4bt + 4b^2 t (1 + |log t|), t in (0,1).
template <std::floating_point Scalar>
Scalar product_smallball_bound(Scalar b, Scalar t) {
    detail::require(b > 0, "product_smallball_bound: b must be > 0");
    detail::require(t > 0 && t < 1, "product_smallball_bound: t must lie in (0,1)");
    return Scalar(4) * b * t + Scalar(4) * b * b * t * (Scalar(1) - std::log(t));
}

/// 2x2 determinant: P[|det T|^{1/2} <= t] <= 4bt^2 + 4b^2 t^2 (1 + 2|log t|).
template <std::floating_point Scalar>
Scalar twobytwo_det_bound(Scalar b, Scalar t) {
    detail::require(b > 0, "twobytwo_det_bound: b must be > 0");
    detail::require(t > 0 && t < 1, "twobytwo_det_bound: t must lie in (0,1)");
    const Scalar t2 = t * t;
    return Scalar(4) * b * t2 + Scalar(4) * b * b * t2 * (Scalar(1) - Scalar(2) * std::log(t));
}

/// Pointwise envelope for the density of a product of two independent
/// b-bounded variables: 2b + 2b^2 |log|z|| on |z| <= 1, 2b beyond. +inf at 0.
template <std::floating_point Scalar>
Scalar product_density_envelope(Scalar b, Scalar z) {
    detail::require(b > 0, "product_density_envelope: b must be > 0");
    const Scalar az = std::abs(z);
    if (az == 0) return std::numeric_limits<Scalar>::infinity();
    if (az >= 1) return Scalar(2) * b;
    return Scalar(2) * b - Scalar(2) * b * b * std::log(az);
}

/// Integral of the envelope over [-t, t] for t in (0, 1]:
/// 4bt + 4b^2 t (1 - log t).
template <std::floating_point Scalar>
Scalar envelope_integral_symmetric(Scalar b, Scalar t) {
    if (t <= 0) return Scalar(0);
    return Scalar(4) * b * t + Scalar(4) * b * b * t * (Scalar(1) - std::log(t));
}

} // namespace smallball
