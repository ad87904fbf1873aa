#ifndef SPINDLE_QUADRATURE_HPP
#define SPINDLE_QUADRATURE_HPP

#include <cmath>

#include "spindle/errors.hpp"

namespace spindle {

namespace detail {

inline double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double fa, double b, double fb, double m,
                            double fm, double whole, double abs_tol, double rel_tol, int depth,
                            int max_depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double err = left + right - whole;
    if (std::abs(err) <= 15.0 * (abs_tol + rel_tol * std::abs(left + right)))
        return left + right + err / 15.0;
    if (depth >= max_depth)
        throw QuadratureFailure("adaptive Simpson: depth cap reached before tolerance");
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, abs_tol * 0.5, rel_tol, depth + 1,
                                max_depth) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, abs_tol * 0.5, rel_tol, depth + 1,
                                max_depth);
}

}  // namespace detail

// Adaptive Simpson quadrature of f over [a, b] with absolute and relative
// error thresholds and a recursion depth cap.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double abs_tol = 1e-12,
                        double rel_tol = 1e-8, int max_depth = 40) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = detail::simpson(a, fa, b, fb, fm);
    return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, abs_tol, rel_tol, 0,
                                        max_depth);
}

}  // namespace spindle

#endif  // SPINDLE_QUADRATURE_HPP
