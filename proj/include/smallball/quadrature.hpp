#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace smallball {

struct QuadratureOptions {
    double abs_tol = 1e-8;
    double rel_tol = 1e-6;
    int max_depth = 30;
    /// Uniform pieces per breakpoint segment before adaptivity starts.
    int presplit = 4;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
    long evaluations = 0;
};

class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, double estimate, double error)
        : std::runtime_error(what + " (achieved estimate " + std::to_string(estimate) + ", error " +
                             std::to_string(error) + ")"),
          estimate_(estimate), error_(error) {}
    double estimate() const { return estimate_; }
    double error() const { return error_; }

  private:
    double estimate_;
    double error_;
};

namespace detail {

template <class F>
struct SimpsonIntegrator {
    F& f;
    int max_depth;
    QuadratureResult result;

    double eval(double x) {
        ++result.evaluations;
        return f(x);
    }

    // Adaptive Simpson with the Richardson correction (S2 + (S2 - S1) / 15).
    double refine(double a, double fa, double m, double fm, double b, double fb, double whole, double tol, int depth) {
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = eval(lm), frm = eval(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (std::abs(delta) <= 15.0 * tol || depth >= max_depth || !(lm > a && rm < b)) {
            if (std::abs(delta) > 15.0 * tol) result.converged = false;
            result.error += std::abs(delta) / 15.0;
            return left + right + delta / 15.0;
        }
        return refine(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1) +
               refine(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
    }
};

} // namespace detail

/// Integrates f over [breakpoints.front(), breakpoints.back()], splitting at
/// every breakpoint (sorted ascending). f may jump at a breakpoint. Each piece gets an equal share of the
/// target max(abs_tol, rel_tol * |coarse estimate|).
template <class F>
QuadratureResult integrate(F&& f, std::span<const double> breakpoints, const QuadratureOptions& opts = {}) {
    QuadratureResult out;
    if (breakpoints.size() < 2) return out;

    struct Piece {
        double a, fa, m, fm, b, fb, whole;
    };
    std::vector<Piece> pieces;
    detail::SimpsonIntegrator<std::remove_reference_t<F>> integ{f, opts.max_depth, {}};
    const int split = std::max(opts.presplit, 1);
    double coarse = 0.0;
    for (std::size_t s = 0; s + 1 < breakpoints.size(); ++s) {
        const double lo = breakpoints[s], hi = breakpoints[s + 1];
        if (!(hi > lo)) continue;
        // Segment ends are sampled one ulp inside, so a jump located exactly
        // at a breakpoint is seen from the correct side.
        double a = lo, fa = integ.eval(std::nextafter(lo, hi));
        for (int k = 1; k <= split; ++k) {
            const double b = k == split ? hi : lo + (hi - lo) * k / split;
            const double m = 0.5 * (a + b);
            const double fm = integ.eval(m), fb = integ.eval(k == split ? std::nextafter(hi, lo) : b);
            const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
            pieces.push_back({a, fa, m, fm, b, fb, whole});
            coarse += whole;
            a = b;
            fa = fb;
        }
    }
    if (pieces.empty()) return out;
    const double target = std::max(opts.abs_tol, opts.rel_tol * std::abs(coarse));
    const double share = target / static_cast<double>(pieces.size());
    for (const auto& p : pieces) out.value += integ.refine(p.a, p.fa, p.m, p.fm, p.b, p.fb, p.whole, share, 0);
    out.error = integ.result.error;
    out.converged = integ.result.converged;
    out.evaluations = integ.result.evaluations;
    return out;
}

/// Sorts, removes duplicates and drops points outside [lo, hi]; always keeps
/// lo and hi as the first and last entries.
inline std::vector<double> normalize_breakpoints(std::vector<double> pts, double lo, double hi) {
    pts.push_back(lo);
    pts.push_back(hi);
    std::erase_if(pts, [&](double x) { return !(x >= lo && x <= hi) || !std::isfinite(x); });
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

} // namespace smallball
