#include "smallball/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace smallball {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> parse_list(std::string_view s) {
    std::vector<double> out;
    while (!s.empty()) {
        const auto comma = s.find(',');
        const auto tok = s.substr(0, comma);
        double v{};
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size())
            throw std::invalid_argument("bad number '" + std::string(tok) + "'");
        out.push_back(v);
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

} // namespace

Distribution::Distribution(Kind kind) : kind_(std::move(kind)) {
    density_sup_ = std::visit(
        overloaded{
            [](const Uniform& u) { return 1.0 / (u.c - u.a); },
            [](const Gaussian& g) { return 1.0 / (g.sigma * std::sqrt(2.0 * std::numbers::pi)); },
            [](const Triangular& t) { return 2.0 / (t.c - t.a); },
            [](const PiecewiseConstant& p) { return *std::max_element(p.heights.begin(), p.heights.end()); },
        },
        kind_);
}

Distribution Distribution::uniform(double a, double c) {
    if (!(std::isfinite(a) && std::isfinite(c) && a < c))
        throw std::invalid_argument("uniform(a,c) requires finite a < c");
    return Distribution(Uniform{a, c});
}

Distribution Distribution::gaussian(double mu, double sigma) {
    if (!(std::isfinite(mu) && std::isfinite(sigma) && sigma > 0))
        throw std::invalid_argument("gaussian(mu,sigma) requires sigma > 0");
    return Distribution(Gaussian{mu, sigma});
}

Distribution Distribution::triangular(double a, double m, double c) {
    if (!(std::isfinite(a) && std::isfinite(c) && a < c && a <= m && m <= c))
        throw std::invalid_argument("triangular(a,m,c) requires a <= m <= c, a < c");
    return Distribution(Triangular{a, m, c});
}

Distribution Distribution::piecewise_constant(std::vector<double> breakpoints, std::vector<double> heights) {
    if (breakpoints.size() < 2 || heights.size() + 1 != breakpoints.size())
        throw std::invalid_argument("piecewise density needs k+1 breakpoints for k heights");
    double mass = 0.0;
    for (std::size_t i = 0; i < heights.size(); ++i) {
        if (!(breakpoints[i] < breakpoints[i + 1]) || !std::isfinite(breakpoints[i + 1]))
            throw std::invalid_argument("piecewise breakpoints must be finite and strictly increasing");
        if (!(heights[i] >= 0 && std::isfinite(heights[i])))
            throw std::invalid_argument("piecewise heights must be finite and nonnegative");
        mass += heights[i] * (breakpoints[i + 1] - breakpoints[i]);
    }
    if (std::abs(mass - 1.0) > 1e-9)
        throw std::invalid_argument("piecewise density integrates to " + fmt(mass) + ", not 1");
    return Distribution(PiecewiseConstant{std::move(breakpoints), std::move(heights)});
}

double Distribution::density(double x) const {
    return std::visit(
        overloaded{
            [x](const Uniform& u) { return (u.a <= x && x <= u.c) ? 1.0 / (u.c - u.a) : 0.0; },
            [x](const Gaussian& g) {
                const double z = (x - g.mu) / g.sigma;
                return std::exp(-0.5 * z * z) / (g.sigma * std::sqrt(2.0 * std::numbers::pi));
            },
            [x](const Triangular& t) {
                if (x < t.a || x > t.c) return 0.0;
                if (x < t.m) return 2.0 * (x - t.a) / ((t.c - t.a) * (t.m - t.a));
                if (x > t.m) return 2.0 * (t.c - x) / ((t.c - t.a) * (t.c - t.m));
                return 2.0 / (t.c - t.a);
            },
            [x](const PiecewiseConstant& p) {
                if (x < p.breakpoints.front() || x >= p.breakpoints.back()) return 0.0;
                const auto it = std::upper_bound(p.breakpoints.begin(), p.breakpoints.end(), x);
                return p.heights[static_cast<std::size_t>(it - p.breakpoints.begin()) - 1];
            },
        },
        kind_);
}

double Distribution::cdf(double x) const {
    return std::visit(
        overloaded{
            [x](const Uniform& u) { return std::clamp((x - u.a) / (u.c - u.a), 0.0, 1.0); },
            [x](const Gaussian& g) { return normal_cdf((x - g.mu) / g.sigma); },
            [x](const Triangular& t) {
                if (x <= t.a) return 0.0;
                if (x >= t.c) return 1.0;
                if (x <= t.m) return (x - t.a) * (x - t.a) / ((t.c - t.a) * (t.m - t.a));
                return 1.0 - (t.c - x) * (t.c - x) / ((t.c - t.a) * (t.c - t.m));
            },
            [x](const PiecewiseConstant& p) {
                if (x <= p.breakpoints.front()) return 0.0;
                if (x >= p.breakpoints.back()) return 1.0;
                double acc = 0.0;
                for (std::size_t i = 0; i < p.heights.size(); ++i) {
                    const double lo = p.breakpoints[i], hi = p.breakpoints[i + 1];
                    if (x <= hi) return std::min(1.0, acc + p.heights[i] * (x - lo));
                    acc += p.heights[i] * (hi - lo);
                }
                return 1.0;
            },
        },
        kind_);
}

double Distribution::sample(Stream& stream) const {
    return std::visit(
        overloaded{
            [&](const Uniform& u) { return u.a + (u.c - u.a) * stream.uniform(); },
            [&](const Gaussian& g) { return g.mu + g.sigma * stream.normal(); },
            [&](const Triangular& t) {
                const double u = stream.uniform();
                const double w = t.c - t.a;
                if (u * w < t.m - t.a) return t.a + std::sqrt(u * w * (t.m - t.a));
                return t.c - std::sqrt((1.0 - u) * w * (t.c - t.m));
            },
            [&](const PiecewiseConstant& p) {
                const double u = stream.uniform();
                double acc = 0.0;
                for (std::size_t i = 0; i < p.heights.size(); ++i) {
                    const double mass = p.heights[i] * (p.breakpoints[i + 1] - p.breakpoints[i]);
                    if (mass > 0 && (u <= acc + mass || i + 1 == p.heights.size()))
                        return std::min(p.breakpoints[i] + (u - acc) / p.heights[i], p.breakpoints[i + 1]);
                    acc += mass;
                }
                return p.breakpoints.back();
            },
        },
        kind_);
}

Interval Distribution::support() const {
    return std::visit(overloaded{
                          [](const Uniform& u) { return Interval{u.a, u.c}; },
                          [](const Gaussian&) { return Interval{}; },
                          [](const Triangular& t) { return Interval{t.a, t.c}; },
                          [](const PiecewiseConstant& p) {
                              return Interval{p.breakpoints.front(), p.breakpoints.back()};
                          },
                      },
                      kind_);
}

Interval Distribution::truncated_support(double sigmas) const {
    if (const auto* g = std::get_if<Gaussian>(&kind_))
        return {g->mu - sigmas * g->sigma, g->mu + sigmas * g->sigma};
    return support();
}

double Distribution::mode() const {
    return std::visit(overloaded{
                          [](const Uniform& u) { return 0.5 * (u.a + u.c); },
                          [](const Gaussian& g) { return g.mu; },
                          [](const Triangular& t) { return t.m; },
                          [](const PiecewiseConstant& p) {
                              const auto it = std::max_element(p.heights.begin(), p.heights.end());
                              const auto i = static_cast<std::size_t>(it - p.heights.begin());
                              return 0.5 * (p.breakpoints[i] + p.breakpoints[i + 1]);
                          },
                      },
                      kind_);
}

std::vector<double> Distribution::kinks() const {
    return std::visit(overloaded{
                          [](const Uniform& u) { return std::vector<double>{u.a, u.c}; },
                          [](const Gaussian&) { return std::vector<double>{}; },
                          [](const Triangular& t) { return std::vector<double>{t.a, t.m, t.c}; },
                          [](const PiecewiseConstant& p) { return p.breakpoints; },
                      },
                      kind_);
}

std::string Distribution::describe() const {
    return std::visit(
        overloaded{
            [](const Uniform& u) { return "uniform(" + fmt(u.a) + "," + fmt(u.c) + ")"; },
            [](const Gaussian& g) { return "gaussian(" + fmt(g.mu) + "," + fmt(g.sigma) + ")"; },
            [](const Triangular& t) {
                return "triangular(" + fmt(t.a) + "," + fmt(t.m) + "," + fmt(t.c) + ")";
            },
            [](const PiecewiseConstant& p) {
                std::string s = "piecewise(";
                for (std::size_t i = 0; i < p.breakpoints.size(); ++i) s += (i ? "," : "") + fmt(p.breakpoints[i]);
                s += ";";
                for (std::size_t i = 0; i < p.heights.size(); ++i) s += (i ? "," : "") + fmt(p.heights[i]);
                return s + ")";
            },
        },
        kind_);
}

Distribution parse_distribution(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw std::invalid_argument("distribution '" + std::string(text) + "' must look like kind:params");
    const auto kind = text.substr(0, colon);
    const auto params = text.substr(colon + 1);
    auto expect = [&](const std::vector<double>& v, std::size_t n) {
        if (v.size() != n)
            throw std::invalid_argument(std::string(kind) + " expects " + std::to_string(n) + " parameters");
        return v;
    };
    if (kind == "uniform") {
        const auto v = expect(parse_list(params), 2);
        return Distribution::uniform(v[0], v[1]);
    }
    if (kind == "gaussian" || kind == "normal") {
        const auto v = expect(parse_list(params), 2);
        return Distribution::gaussian(v[0], v[1]);
    }
    if (kind == "triangular") {
        const auto v = expect(parse_list(params), 3);
        return Distribution::triangular(v[0], v[1], v[2]);
    }
    if (kind == "piecewise") {
        const auto semi = params.find(';');
        if (semi == std::string_view::npos)
            throw std::invalid_argument("piecewise expects 'breakpoints;heights'");
        return Distribution::piecewise_constant(parse_list(params.substr(0, semi)),
                                                parse_list(params.substr(semi + 1)));
    }
    throw std::invalid_argument("unknown distribution kind '" + std::string(kind) + "'");
}

double small_ball_prob(const Distribution& d, double gamma, double t) {
    if (!(t >= 0)) throw std::invalid_argument("small_ball_prob: t must be >= 0");
    if (t == 0) return 0.0;
    // |X + gamma| <= t  <=>  X in [-gamma - t, -gamma + t]
    return std::max(0.0, d.cdf(t - gamma) - d.cdf(-t - gamma));
}

double small_ball_sup(const Distribution& d, double t, int gamma_grid) {
    if (!(t >= 0)) throw std::invalid_argument("small_ball_sup: t must be >= 0");
    if (t == 0) return 0.0;
    const Interval s = d.truncated_support(8.0);
    const double lo = s.lo - t, hi = s.hi + t;
    const int points = std::max(gamma_grid, 1);
    double best = 0.0;
    for (int i = 0; i < points; ++i) {
        const double centre = points == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (points - 1);
        best = std::max(best, small_ball_prob(d, -centre, t));
    }
    return best;
}

} // namespace smallball
