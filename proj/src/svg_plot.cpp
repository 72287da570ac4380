#include "smallball/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace smallball {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;

struct LogAxis {
    double lo, hi; // log10 range
    double px_lo, px_hi;

    double operator()(double v) const {
        const double l = v > 0 ? std::log10(v) : lo;
        const double f = (std::clamp(l, lo, hi) - lo) / (hi - lo);
        return px_lo + f * (px_hi - px_lo);
    }
};

LogAxis make_axis(const std::vector<double>& values, double px_lo, double px_hi) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : values)
        if (v > 0 && std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (!std::isfinite(lo)) lo = hi = 1.0;
    double llo = std::floor(std::log10(lo)), lhi = std::ceil(std::log10(hi));
    if (lhi <= llo) lhi = llo + 1;
    return {llo, lhi, px_lo, px_hi};
}

std::vector<double> column_values(const CsvTable& t, const std::string& name) {
    const int c = t.column(name);
    if (c < 0) return {};
    std::vector<double> v;
    for (const auto& row : t.rows) v.push_back(static_cast<std::size_t>(c) < row.size() ? std::stod(row[static_cast<std::size_t>(c)]) : 0.0);
    return v;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace

std::string render_svg(const CsvTable& table, const std::string& title) {
    const bool density = table.column("z") >= 0;
    const std::string xname = density ? "z" : "t";
    const auto x = column_values(table, xname);
    if (x.empty()) throw std::runtime_error("table has no '" + xname + "' column");

    std::vector<std::pair<std::string, std::vector<double>>> lines;
    std::vector<double> p_hat, ci_lo, ci_hi;
    if (density) {
        lines.emplace_back("density", column_values(table, "density"));
        lines.emplace_back("envelope", column_values(table, "envelope"));
    } else {
        p_hat = column_values(table, "p_hat");
        ci_lo = column_values(table, "ci_low");
        ci_hi = column_values(table, "ci_high");
        if (table.column("bound_clamped") >= 0) lines.emplace_back("bound", column_values(table, "bound_clamped"));
    }

    std::vector<double> ys = p_hat;
    ys.insert(ys.end(), ci_hi.begin(), ci_hi.end());
    ys.insert(ys.end(), ci_lo.begin(), ci_lo.end());
    for (const auto& [_, v] : lines) ys.insert(ys.end(), v.begin(), v.end());

    const LogAxis ax = make_axis(x, kLeft, kWidth - kRight);
    const LogAxis ay = make_axis(ys, kHeight - kBottom, kTop);

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";

    // grid + tick labels at decades
    for (double d = ax.lo; d <= ax.hi; d += 1) {
        const double px = ax(std::pow(10.0, d));
        s << "<line x1=\"" << num(px) << "\" y1=\"" << kTop << "\" x2=\"" << num(px) << "\" y2=\"" << kHeight - kBottom
          << "\" stroke=\"#ddd\"/>\n<text x=\"" << num(px) << "\" y=\"" << kHeight - kBottom + 18
          << "\" text-anchor=\"middle\">1e" << d << "</text>\n";
    }
    for (double d = ay.hi; d >= ay.lo; d -= 1) {
        const double py = ay(std::pow(10.0, d));
        s << "<line x1=\"" << kLeft << "\" y1=\"" << num(py) << "\" x2=\"" << kWidth - kRight << "\" y2=\"" << num(py)
          << "\" stroke=\"#ddd\"/>\n<text x=\"" << kLeft - 6 << "\" y=\"" << num(py + 4)
          << "\" text-anchor=\"end\">1e" << d << "</text>\n";
    }
    s << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight << "\" height=\""
      << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">" << xname
      << "</text>\n";

    const char* colours[] = {"#c0392b", "#2c3e50", "#27ae60"};
    for (std::size_t li = 0; li < lines.size(); ++li) {
        s << "<polyline fill=\"none\" stroke=\"" << colours[li % 3] << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < x.size() && i < lines[li].second.size(); ++i)
            s << num(ax(x[i])) << ',' << num(ay(lines[li].second[i])) << ' ';
        s << "\"/>\n<text x=\"" << kWidth - kRight - 8 << "\" y=\"" << kTop + 16 + 16 * li
          << "\" text-anchor=\"end\" fill=\"" << colours[li % 3] << "\">" << lines[li].first << "</text>\n";
    }
    for (std::size_t i = 0; i < p_hat.size() && i < x.size(); ++i) {
        const double px = ax(x[i]);
        if (i < ci_lo.size() && i < ci_hi.size())
            s << "<line x1=\"" << num(px) << "\" y1=\"" << num(ay(ci_lo[i])) << "\" x2=\"" << num(px) << "\" y2=\""
              << num(ay(ci_hi[i])) << "\" stroke=\"#2980b9\"/>\n";
        s << "<circle cx=\"" << num(px) << "\" cy=\"" << num(ay(p_hat[i])) << "\" r=\"3\" fill=\""
          << (p_hat[i] > 0 ? "#2980b9" : "none") << "\" stroke=\"#2980b9\"/>\n";
    }
    s << "</svg>\n";
    return s.str();
}

} // namespace smallball
