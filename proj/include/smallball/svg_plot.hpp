#pragma once

#include <string>

#include "smallball/report.hpp"

namespace smallball {

/// Renders a report CSV as a static log-log SVG chart:
///  - verification tables: empirical p_hat with CI whiskers and the bound curve;
///  - estimate tables: p_hat with CI whiskers;
///  - density tables (z,density,envelope): both curves.
/// Zero or negative values are drawn on the bottom axis.
std::string render_svg(const CsvTable& table, const std::string& title);

} // namespace smallball
