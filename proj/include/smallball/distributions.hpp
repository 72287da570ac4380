#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "smallball/rng.hpp"

namespace smallball {

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
    bool contains(double x) const { return lo <= x && x <= hi; }
};

struct Uniform {
    double a, c;
};
struct Gaussian {
    double mu, sigma;
};
struct Triangular {
    double a, m, c;
};
/// Density heights[i] on [breakpoints[i], breakpoints[i+1]).
struct PiecewiseConstant {
    std::vector<double> breakpoints;
    std::vector<double> heights;
};

/// A continuous scalar law with a bounded density. The density supremum is
/// stored analytically per kind and is exact.
class Distribution {
  public:
    using Kind = std::variant<Uniform, Gaussian, Triangular, PiecewiseConstant>;

    static Distribution uniform(double a, double c);
    static Distribution gaussian(double mu, double sigma);
    static Distribution triangular(double a, double m, double c);
    /// Heights must integrate to 1 within 1e-9.
    static Distribution piecewise_constant(std::vector<double> breakpoints, std::vector<double> heights);

    double density(double x) const;
    double cdf(double x) const;
    double sample(Stream& stream) const;

    double density_sup() const { return density_sup_; }
    Interval support() const;
    /// Support with unbounded tails cut at mean +- sigmas standard deviations.
    Interval truncated_support(double sigmas) const;
    double mode() const;
    /// Points where the density is not smooth (support ends, kinks, jumps).
    std::vector<double> kinks() const;

    /// Canonical text form, e.g. "gaussian(0,1)"; stable across runs.
    std::string describe() const;
    const Kind& kind() const { return kind_; }

  private:
    explicit Distribution(Kind kind);
    Kind kind_;
    double density_sup_;
};

/// Parses the CLI shorthand "uniform:a,c", "gaussian:mu,sigma",
/// "triangular:a,m,c" or "piecewise:b0,b1,...;h0,h1,...".
Distribution parse_distribution(std::string_view text);

/// P[|X + gamma| <= t] from the analytic CDF. Throws on t < 0.
double small_ball_prob(const Distribution& d, double gamma, double t);

/// Concentration function sup_gamma P[|X + gamma| <= t], maximized over a
/// uniform grid of `gamma_grid` window centres spanning the support widened by
/// t on each side (gaussian tails cut at 8 sigma). Never exceeds 2 * b * t.
double small_ball_sup(const Distribution& d, double t, int gamma_grid = 4001);

} // namespace smallball
