#pragma once

// Test-only brute-force oracles, independent of the library's code paths.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Laplace expansion along the first row, O(n!).
inline double cofactor_det(const Eigen::MatrixXd& m) {
    const auto n = m.rows();
    if (n == 1) return m(0, 0);
    double det = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::MatrixXd minor(n - 1, n - 1);
        for (Eigen::Index r = 1; r < n; ++r)
            for (Eigen::Index c = 0, cc = 0; c < n; ++c)
                if (c != j) minor(r - 1, cc++) = m(r, c);
        det += ((j % 2) ? -1.0 : 1.0) * m(0, j) * cofactor_det(minor);
    }
    return det;
}

/// Sum over all permutations, O(n! n).
inline double permutation_sum_permanent(const Eigen::MatrixXd& m) {
    std::vector<int> p(static_cast<std::size_t>(m.rows()));
    std::iota(p.begin(), p.end(), 0);
    double total = 0;
    do {
        double prod = 1;
        for (std::size_t i = 0; i < p.size(); ++i) prod *= m(static_cast<Eigen::Index>(i), p[i]);
        total += prod;
    } while (std::next_permutation(p.begin(), p.end()));
    return total;
}

/// Golden-section minimization of f on [lo, hi].
template <class F>
double golden_min(F f, double lo, double hi, int iters = 300) {
    const double r = (std::sqrt(5.0) - 1) / 2;
    double a = lo, b = hi;
    for (int i = 0; i < iters; ++i) {
        const double c = b - r * (b - a), d = a + r * (b - a);
        if (f(c) < f(d))
            b = d;
        else
            a = c;
    }
    return f(0.5 * (a + b));
}

} // namespace oracle
