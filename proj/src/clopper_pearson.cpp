#include "smallball/clopper_pearson.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace smallball {

namespace {

// Continued fraction for I_x(a,b) (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 100000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("incomplete beta continued fraction did not converge");
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0 && b > 0)) throw std::invalid_argument("incomplete beta: a and b must be > 0");
    if (!(x >= 0 && x <= 1)) throw std::invalid_argument("incomplete beta: x must lie in [0,1]");
    if (x == 0) return 0.0;
    if (x == 1) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double beta_quantile(double p, double a, double b) {
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument("beta_quantile: p must lie in [0,1]");
    if (p == 0) return 0.0;
    if (p == 1) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (regularized_incomplete_beta(a, b, mid) < p)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-15 * hi) break;
    }
    return 0.5 * (lo + hi);
}

BinomialInterval clopper_pearson(std::uint64_t hits, std::uint64_t trials, double confidence) {
    if (trials == 0) throw std::invalid_argument("clopper_pearson: trials must be >= 1");
    if (hits > trials) throw std::invalid_argument("clopper_pearson: hits exceed trials");
    if (!(confidence > 0 && confidence < 1)) throw std::invalid_argument("clopper_pearson: confidence must lie in (0,1)");
    const double alpha = 1.0 - confidence;
    const double k = static_cast<double>(hits), n = static_cast<double>(trials);
    const double low = hits == 0 ? 0.0 : beta_quantile(alpha / 2, k, n - k + 1);
    const double high = hits == trials ? 1.0 : beta_quantile(1 - alpha / 2, k + 1, n - k);
    return {low, high};
}

} // namespace smallball
