#pragma once

#include "smallball/distributions.hpp"
#include "smallball/quadrature.hpp"

namespace smallball {

struct ProductDensityRequest {
    Distribution law_x;
    Distribution law_y;
    double z;
    QuadratureOptions tolerance{};
};

/// Half-width of the window around z = 0 that is integrated analytically
/// with the product-density envelope instead of the divergent density.
inline constexpr double kZeroWindow = 1e-12;

/// Density of X*Y at z != 0 for independent X, Y:
///   f(z) = integral f_X(w) f_Y(z/w) dw / |w|,
/// with the w-axis split at -|z|, -1, 0, 1, |z|, both laws' kinks and the
/// images z/y of Y's kinks. Throws QuadratureError if the tolerance is missed.
double product_density(const ProductDensityRequest& req);

/// P[X*Y in (lo, hi)] by integrating product_density. A neighbourhood
/// |z| < kZeroWindow contributes the envelope's closed-form integral.
double integrate_product_density(const Distribution& law_x, const Distribution& law_y, double lo, double hi,
                                 const QuadratureOptions& tol = {});

/// P[|X*Y + gamma| < t] for t in (0, 1).
double smallball_from_density(const Distribution& law_x, const Distribution& law_y, double gamma, double t,
                              const QuadratureOptions& tol = {});

/// Interval outside of which X*Y has (numerically) no mass.
Interval product_support(const Distribution& law_x, const Distribution& law_y);

} // namespace smallball
