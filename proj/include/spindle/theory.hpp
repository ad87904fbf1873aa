#ifndef SPINDLE_THEORY_HPP
#define SPINDLE_THEORY_HPP

#include <cmath>
#include <numbers>

#include "spindle/errors.hpp"
#include "spindle/quadrature.hpp"
#include "spindle/shape.hpp"

namespace spindle {

namespace detail {

// Lanczos approximation (g = 7, 9 coefficients), relative error below 1e-12
// on the positive reals we use.
inline double gamma_fn(double x) {
    static constexpr double coef[9] = {
        0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
        771.32342877765313,       -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5)
        return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
    x -= 1.0;
    double a = coef[0];
    const double t = x + 7.5;
    for (int i = 1; i < 9; ++i) a += coef[i] / (x + i);
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

}  // namespace detail

inline double gamma_five_thirds() { return detail::gamma_fn(5.0 / 3.0); }

// Boundary integral of (kappa - 1/r)^{1/3} with respect to arc length.
// Vanishes identically when K is the radius-r circle; requires r >= r_M so
// the integrand stays nonnegative.
inline double curvature_deficit_integral(const ConvexDisc& model, double r) {
    const double r_m = model.free_rolling_radius();
    if (r < r_m * (1.0 - 1e-12))
        throw RadiusNotAdmissible("c1: r below the model's free rolling radius r_M");
    return adaptive_simpson(
        [&](double th) {
            const Point d1 = model.boundary_d1(th);
            const Point d2 = model.boundary_d2(th);
            const double speed = norm(d1);
            const double kappa = cross(d1, d2) / (speed * speed * speed);
            const double deficit = std::max(0.0, kappa - 1.0 / r);
            return std::cbrt(deficit) * speed;
        },
        0.0, 2.0 * std::numbers::pi, 1e-12, 1e-8, 40);
}

// Closed-form limit coefficients of the expected vertex count and missed
// area under n^{-1/3} / n^{2/3} scaling.
struct LimitConstants {
    double c1 = 0.0;            // boundary curvature-deficit integral
    double vertex_coeff = 0.0;  // limit of E f0 * n^{-1/3}
    double area_coeff = 0.0;    // limit of E missed-area * n^{2/3}
    double gamma_5_3 = 0.0;
};

inline LimitConstants limit_constants(const ConvexDisc& model, double r) {
    LimitConstants lc;
    lc.c1 = curvature_deficit_integral(model, r);
    lc.gamma_5_3 = gamma_five_thirds();
    const double area = model.area();
    lc.vertex_coeff = std::cbrt(2.0 / (3.0 * area)) * lc.gamma_5_3 * lc.c1;
    lc.area_coeff = std::cbrt(2.0 * area * area / 3.0) * lc.gamma_5_3 * lc.c1;
    return lc;
}

}  // namespace spindle

#endif  // SPINDLE_THEORY_HPP
