#pragma once

#include <string>
#include <string_view>

namespace smallball {

/// The matrix functional whose small-ball probability is estimated.
enum class Functional {
    DetRootN,       // |det M|^{1/n}
    SMin,           // smallest singular value
    OperatorNorm,   // largest singular value
    PermanentRootN, // |perm M|^{1/n}
};

std::string_view to_string(Functional f);
/// Accepts det_root_n, s_min, operator_norm, permanent_root_n.
Functional parse_functional(std::string_view name);

} // namespace smallball
