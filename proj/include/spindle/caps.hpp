#ifndef SPINDLE_CAPS_HPP
#define SPINDLE_CAPS_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "spindle/errors.hpp"
#include "spindle/geom.hpp"
#include "spindle/quadrature.hpp"
#include "spindle/rng.hpp"
#include "spindle/shape.hpp"

namespace spindle {

// A disc-cap K \ B°(center, r) addressed by its vertex (boundary parameter
// theta) and height t, so center = x - (r + t) * u with u the outer normal
// at x. area and arc_length vanish at t = 0.
struct DiscCap {
    double theta = 0.0;
    double t = 0.0;
    double r = 0.0;
    Point center{};
    double area = 0.0;
    double arc_length = 0.0;
    double t_star = 0.0;
};

// The two disc-caps determined by the radius-r circles through an interior
// point pair, ordered by area.
struct CapPair {
    double minus_area = 0.0;
    double plus_area = 0.0;
};

struct Triangle {
    std::array<Point, 3> v;

    double area() const { return 0.5 * std::abs(cross(v[1] - v[0], v[2] - v[0])); }
    Point centroid() const {
        return {(v[0].x + v[1].x + v[2].x) / 3.0, (v[0].y + v[1].y + v[2].y) / 3.0};
    }
};

// The cap triangle [w0, w1, w2] (w0 the cap vertex, w1/w2 the intersections of
// the boundary with the cutting line) and its three images shrunk by a factor
// of 1/20 toward each corner.
struct CapTriangles {
    Triangle full;                  // [w0, w1, w2]
    std::array<Triangle, 3> small;  // shrunk toward w0, w1, w2
};

namespace detail {

constexpr double kParamTol = 1e-12;  // bisection tolerance in the boundary parameter

// Bisects f on [lo, hi] assuming f(lo) > 0 >= f(hi) or f(lo) < 0 <= f(hi).
template <typename F>
double bisect(const F& f, double lo, double hi, double flo) {
    for (int it = 0; it < 200 && hi - lo > kParamTol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((flo > 0.0) == (fm > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Marches from theta in direction dir (+1/-1) until f changes sign, then
// bisects. f(theta) must be positive. Returns nullopt if no sign change
// within a full revolution.
template <typename F>
std::optional<double> first_crossing(const F& f, double theta, int dir, int grid = 8192) {
    const double step = dir * 2.0 * std::numbers::pi / grid;
    double prev = theta;
    double fprev = f(theta);
    for (int k = 1; k <= grid; ++k) {
        const double cur = theta + k * step;
        const double fcur = f(cur);
        if (fcur <= 0.0) {
            const double root = dir > 0 ? bisect(f, prev, cur, fprev)
                                        : bisect(f, cur, prev, fcur);
            return root;
        }
        prev = cur;
        fprev = fcur;
    }
    return std::nullopt;
}

// Green's theorem term for a circular arc around `center` from angle `alpha`
// sweeping by `delta` (signed): integral of (x dy - y dx).
inline double green_arc(Point center, double r, double alpha, double delta) {
    return r * r * delta + center.x * r * (std::sin(alpha + delta) - std::sin(alpha)) -
           center.y * r * (std::cos(alpha + delta) - std::cos(alpha));
}

// Green's theorem term for the model boundary between parameters [a, b].
inline double green_boundary(const ConvexDisc& model, double a, double b) {
    return adaptive_simpson(
        [&model](double th) {
            const Point p = model.boundary(th);
            const Point d = model.boundary_d1(th);
            return p.x * d.y - p.y * d.x;
        },
        a, b, 1e-14, 1e-10, 48);
}

inline double wrap_angle(double a) {
    const double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    return a < 0.0 ? a + two_pi : a;
}

// Area and base-arc length of K \ B°(c, r) whose boundary crosses ∂K at
// parameters phi1 < phi2 with the cap's boundary arc of K in (phi1, phi2).
inline std::pair<double, double> cap_area_from_crossings(const ConvexDisc& model, Point c,
                                                         double r, double phi1, double phi2) {
    const Point p1 = model.boundary(phi1);
    const Point p2 = model.boundary(phi2);
    const double a1 = std::atan2(p1.y - c.y, p1.x - c.x);
    const double a2 = std::atan2(p2.y - c.y, p2.x - c.x);
    // The cap is traversed counterclockwise: along ∂K from phi1 to phi2, then
    // back along the cutting circle from p2 to p1 going clockwise (the cap
    // lies outside the disc, so the disc stays on the right).
    double delta = -wrap_angle(a2 - a1);
    if (delta == 0.0) delta = -2.0 * std::numbers::pi;
    const Point mid{c.x + r * std::cos(a2 + 0.5 * delta), c.y + r * std::sin(a2 + 0.5 * delta)};
    if (!model.contains(mid))
        throw IntersectionNotFound("disc cap: base arc midpoint left the model");
    const double area = 0.5 * (green_boundary(model, phi1, phi2) + green_arc(c, r, a2, delta));
    return {area, r * std::abs(delta)};
}

}  // namespace detail

// Maximal height for which the radius-r disc addressed by (theta, t) still
// meets K, located by bisection on disc/model intersection.
inline double cap_height_limit(const ConvexDisc& model, double theta, double r) {
    const BoundaryPoint bp = model.boundary_point(theta);
    const auto disc_meets_model = [&](double t) {
        const Point c = bp.p - (r + t) * bp.normal;
        constexpr int kGrid = 4096;
        for (int i = 0; i < kGrid; ++i) {
            const double th = i * (2.0 * std::numbers::pi / kGrid);
            if (dist(model.boundary(th), c) <= r) return true;
        }
        // The disc could also swallow an interior chunk without touching the
        // sampled boundary; the deepest boundary point handles that for
        // admissible radii, so a center containment check suffices.
        return model.contains(c);
    };
    double lo = 0.0;
    double hi = 2.0 * r + (model.bbox().x1 - model.bbox().x0) + (model.bbox().y1 - model.bbox().y0);
    if (disc_meets_model(hi)) return hi;
    for (int it = 0; it < 48; ++it) {
        const double mid = 0.5 * (lo + hi);
        (disc_meets_model(mid) ? lo : hi) = mid;
    }
    return lo;
}

// Disc-cap of vertex boundary_point(theta) and height t for the cutting
// radius r: locates the two boundary crossings by bracketing and bisection,
// then integrates the area along the piecewise boundary.
inline DiscCap cap_from_normal_height(const ConvexDisc& model, double theta, double t, double r) {
    if (!(r > 0.0)) throw RadiusNotAdmissible("cap: r must be positive");
    if (t < 0.0) throw HeightOutOfRange("cap: t must be >= 0");
    DiscCap cap;
    cap.theta = theta;
    cap.t = t;
    cap.r = r;
    cap.t_star = cap_height_limit(model, theta, r);
    const BoundaryPoint bp = model.boundary_point(theta);
    cap.center = bp.p - (r + t) * bp.normal;
    if (t > cap.t_star * (1.0 + 1e-9))
        throw HeightOutOfRange("cap: t exceeds the admissible height for this direction");
    if (t == 0.0) return cap;

    const Point c = cap.center;
    const auto g = [&](double th) { return dist(model.boundary(th), c) - r; };
    // g(theta) = t > 0 at the vertex; the crossings bracket it.
    const std::optional<double> up = detail::first_crossing(g, theta, +1);
    const std::optional<double> down = detail::first_crossing(g, theta, -1);
    if (!up || !down)
        throw IntersectionNotFound("cap: cutting circle does not cross the boundary twice");
    const double phi1 = *down;  // below theta
    const double phi2 = *up;    // above theta
    // Sanity: the far side of the boundary must be inside the cutting disc.
    if (g(0.5 * (phi2 + phi1 + 2.0 * std::numbers::pi)) >= 0.0)
        throw IntersectionNotFound("cap: boundary re-emerges from the cutting disc");

    const auto [area, arc_len] = detail::cap_area_from_crossings(model, c, r, phi1, phi2);
    cap.area = area;
    cap.arc_length = arc_len;
    return cap;
}

// The two disc-caps cut from K by the radius-r circles through interior
// points x and y, ordered by area. A circle that swallows the whole model
// contributes a zero-area cap.
inline CapPair caps_through_pair(const ConvexDisc& model, Point x, Point y, double r) {
    if (!model.contains(x) || !model.contains(y))
        throw PointsOutsideModel("caps_through_pair: points must lie in the model");
    const auto [cl, cr] = circle_centers_through(x, y, r);

    const auto one_cap_area = [&](Point c) {
        const auto g = [&](double th) { return dist(model.boundary(th), c) - r; };
        // Scan for sign changes of g around the boundary.
        constexpr int kGrid = 4096;
        const double step = 2.0 * std::numbers::pi / kGrid;
        std::vector<double> roots;
        double prev_th = 0.0;
        double prev_g = g(0.0);
        for (int i = 1; i <= kGrid; ++i) {
            const double th = i * step;
            const double cur = g(th);
            if ((prev_g > 0.0) != (cur > 0.0))
                roots.push_back(detail::bisect(g, prev_th, th, prev_g));
            prev_th = th;
            prev_g = cur;
        }
        if (roots.empty()) {
            // No crossing: either the disc contains the whole boundary (empty
            // cap) or it misses the boundary entirely (cannot happen with the
            // pair on its boundary inside K).
            return prev_g < 0.0 ? 0.0 : model.area();
        }
        if (roots.size() != 2)
            throw IntersectionNotFound(
                "caps_through_pair: expected two boundary crossings (is r > r_M?)");
        // Identify which boundary arc is outside the disc.
        double lo = roots[0], hi = roots[1];
        if (g(0.5 * (lo + hi)) < 0.0) std::swap(lo, hi);  // cap arc wraps through 2*pi
        const double phi1 = lo;
        const double phi2 = hi > lo ? hi : hi + 2.0 * std::numbers::pi;
        return detail::cap_area_from_crossings(model, c, r, phi1, phi2).first;
    };

    const double a1 = one_cap_area(cl);
    const double a2 = one_cap_area(cr);
    return {std::min(a1, a2), std::max(a1, a2)};
}

// Triangle construction in the Euclidean cap of vertex boundary_point(theta)
// and height t: w1, w2 are the crossings of ∂K with the line orthogonal to
// the normal at depth t, and the three shrunk triangles scale the full one by
// 1/20 toward each corner.
inline CapTriangles cap_triangles(const ConvexDisc& model, double theta, double t) {
    if (!(t > 0.0)) throw HeightOutOfRange("cap_triangles: t must be positive");
    const BoundaryPoint bp = model.boundary_point(theta);
    const Point w0 = bp.p;
    const Point u = bp.normal;
    // Signed height of boundary points above the cutting line.
    const auto h = [&](double th) { return dot(model.boundary(th) - w0, u) + t; };
    if (!(h(theta) > 0.0)) throw HeightOutOfRange("cap_triangles: vertex below the cutting line");
    const std::optional<double> up = detail::first_crossing(h, theta, +1);
    const std::optional<double> down = detail::first_crossing(h, theta, -1);
    if (!up || !down)
        throw HeightOutOfRange("cap_triangles: cutting line does not cross the boundary twice");
    const Point w1 = model.boundary(*down);
    const Point w2 = model.boundary(*up);

    CapTriangles out;
    out.full = Triangle{{w0, w1, w2}};
    for (int j = 0; j < 3; ++j) {
        const Point wj = out.full.v[j];
        Triangle s;
        for (int k = 0; k < 3; ++k) s.v[k] = wj + (1.0 / 20.0) * (out.full.v[k] - wj);
        out.small[j] = s;
    }
    return out;
}

// Area of the non-convex arc-triangle on (z0, z1, z2): radius-r arcs join z0
// to z1 and z0 to z2 bulging away from the triangle, and z1 to z2 bulging
// into it.
inline double arc_triangle_area(Point z0, Point z1, Point z2, double r) {
    const double cr = cross(z1 - z0, z2 - z0);
    if (cr == 0.0) throw DegenerateTriangle("arc_triangle_area: collinear corners");
    const double d01 = dist(z0, z1);
    const double d02 = dist(z0, z2);
    const double d12 = dist(z1, z2);
    for (double d : {d01, d02, d12}) {
        if (d > 2.0 * r * (1.0 + kGeomEps))
            throw ChordTooLong("arc_triangle_area: corner pair further apart than 2r");
    }
    return 0.5 * std::abs(cr) + segment_area(d01, r) + segment_area(d02, r) -
           segment_area(d12, r);
}

namespace detail {

inline bool point_in_triangle(Point p, const Triangle& t) {
    const double c1 = cross(t.v[1] - t.v[0], p - t.v[0]);
    const double c2 = cross(t.v[2] - t.v[1], p - t.v[1]);
    const double c3 = cross(t.v[0] - t.v[2], p - t.v[2]);
    return (c1 >= 0.0 && c2 >= 0.0 && c3 >= 0.0) || (c1 <= 0.0 && c2 <= 0.0 && c3 <= 0.0);
}

// Uniform point in a triangle by rejection from its bounding box.
inline Point sample_in_triangle(const Triangle& t, Rng& rng) {
    const double x0 = std::min({t.v[0].x, t.v[1].x, t.v[2].x});
    const double x1 = std::max({t.v[0].x, t.v[1].x, t.v[2].x});
    const double y0 = std::min({t.v[0].y, t.v[1].y, t.v[2].y});
    const double y1 = std::max({t.v[0].y, t.v[1].y, t.v[2].y});
    for (std::uint64_t it = 0; it < 1000000; ++it) {
        const Point p{rng.uniform(x0, x1), rng.uniform(y0, y1)};
        if (point_in_triangle(p, t)) return p;
    }
    throw SamplerStall("sample_in_triangle: rejection cap reached");
}

}  // namespace detail

struct VarianceEstimate {
    double variance = 0.0;
    double se = 0.0;  // normal-theory standard error of the variance estimate
    std::size_t samples = 0;
};

// Monte Carlo variance of the arc-triangle functional over a uniform point in
// the innermost shrunk triangle, with z1 and z2 pinned at the centroids of
// the side triangles. Radius 1 arcs, matching the normalized setting.
inline VarianceEstimate arc_triangle_variance(const ConvexDisc& model, double theta, double t,
                                              std::size_t samples, Rng& rng) {
    if (samples < 1000)
        throw ConfigError("arc_triangle_variance: need at least 1000 samples");
    const CapTriangles tri = cap_triangles(model, theta, t);
    const Point z1 = tri.small[1].centroid();
    const Point z2 = tri.small[2].centroid();

    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const Point z0 = detail::sample_in_triangle(tri.small[0], rng);
        const double a = arc_triangle_area(z0, z1, z2, 1.0);
        sum += a;
        sumsq += a * a;
    }
    const double m = static_cast<double>(samples);
    const double mean = sum / m;
    const double var = std::max(0.0, (sumsq - m * mean * mean) / (m - 1.0));
    return {var, var * std::sqrt(2.0 / (m - 1.0)), samples};
}

}  // namespace spindle

#endif  // SPINDLE_CAPS_HPP
