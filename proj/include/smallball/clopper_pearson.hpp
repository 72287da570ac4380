#pragma once

#include <cstdint>

namespace smallball {

/// Regularized incomplete beta function I_x(a, b), a, b > 0, x in [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

/// Inverse of I_x(a, b) in x, by bisection.
double beta_quantile(double p, double a, double b);

struct BinomialInterval {
    double low;
    double high;
};

/// Exact two-sided Clopper-Pearson interval for `hits` successes out of
/// `trials` at the given confidence level (e.g. 0.99).
BinomialInterval clopper_pearson(std::uint64_t hits, std::uint64_t trials, double confidence);

} // namespace smallball
