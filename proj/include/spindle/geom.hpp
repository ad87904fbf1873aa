#ifndef SPINDLE_GEOM_HPP
#define SPINDLE_GEOM_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spindle/errors.hpp"

namespace spindle {

// Module-wide relative tolerance. Predicates operate on a band of
// kGeomEps * scale around exact incidence, where scale is the radius or
// coordinate magnitude of the operands.
inline constexpr double kGeomEps = 1e-9;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }
inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline double dist2(Point a, Point b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}
inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Rotate 90 degrees counterclockwise.
inline Point perp_ccw(Point p) { return {-p.y, p.x}; }

enum class Side { Inside, OnBoundary, Outside };

// Centers of the two radius-r circles through p and q. The first center lies
// on the left of the directed chord p->q, the second on the right; they
// coincide at the midpoint when |p - q| = 2r.
inline std::pair<Point, Point> circle_centers_through(Point p, Point q, double r) {
    if (p == q) throw DegenerateChord("circle_centers_through: p and q coincide");
    if (!is_finite(p) || !is_finite(q) || !std::isfinite(r) || r <= 0.0)
        throw OutOfRange("circle_centers_through: non-finite input or r <= 0");
    const double d = dist(p, q);
    if (d > 2.0 * r * (1.0 + kGeomEps))
        throw ChordTooLong("circle_centers_through: chord length " + std::to_string(d) +
                           " exceeds diameter " + std::to_string(2.0 * r));
    const Point mid{0.5 * (p.x + q.x), 0.5 * (p.y + q.y)};
    const double h2 = r * r - 0.25 * d * d;
    const double h = h2 > 0.0 ? std::sqrt(h2) : 0.0;
    const Point n = perp_ccw({(q.x - p.x) / d, (q.y - p.y) / d});
    return {mid + h * n, mid - h * n};
}

// Closed-disc classification with an OnBoundary band of +-kGeomEps * r.
inline Side classify_in_disc(Point center, double r, Point x) {
    const double band = kGeomEps * r;
    const double d = dist(x, center);
    if (d < r - band) return Side::Inside;
    if (d > r + band) return Side::Outside;
    return Side::OnBoundary;
}

// Containment test used by the hull predicates: boundary counts as contained.
// Squared-distance form, kept branch-light for the verification loops.
inline bool in_closed_disc(Point center, double r, Point x) {
    const double rr = r * (1.0 + kGeomEps);
    return dist2(x, center) <= rr * rr;
}

// Strict interior beyond the tolerance band (the complement of "on or out").
inline bool strictly_in_disc(Point center, double r, Point x) {
    const double rr = r * (1.0 - kGeomEps);
    return dist2(x, center) < rr * rr;
}

namespace detail {
// theta - sin(theta), stable for small theta.
inline double theta_minus_sin(double theta) {
    if (std::abs(theta) < 0.25) {
        const double t2 = theta * theta;
        // theta^3/3! - theta^5/5! + theta^7/7! - theta^9/9! + theta^11/11!
        return theta * t2 *
               (1.0 / 6.0 +
                t2 * (-1.0 / 120.0 +
                      t2 * (1.0 / 5040.0 + t2 * (-1.0 / 362880.0 + t2 * (1.0 / 39916800.0)))));
    }
    return theta - std::sin(theta);
}
}  // namespace detail

// Area of the minor circular segment cut from a radius-r circle by a chord of
// the given length. Monotone increasing in chord; pi r^2 / 2 at chord = 2r.
inline double segment_area(double chord, double r) {
    if (!(r > 0.0) || !std::isfinite(chord))
        throw OutOfRange("segment_area: invalid radius or chord");
    if (chord < 0.0) throw OutOfRange("segment_area: negative chord");
    if (chord > 2.0 * r * (1.0 + kGeomEps))
        throw OutOfRange("segment_area: chord " + std::to_string(chord) + " exceeds diameter " +
                         std::to_string(2.0 * r));
    const double half = std::min(1.0, chord / (2.0 * r));
    const double theta = 2.0 * std::asin(half);
    return 0.5 * r * r * detail::theta_minus_sin(theta);
}

// One boundary arc of a disc-polygon: the minor radius-r arc from a to b,
// traversed counterclockwise around its supporting center. The center lies on
// the left of the directed chord a->b, so the arc bulges to the right of it.
struct ArcEdge {
    Point a;
    Point b;
    Point center;
    double radius = 0.0;
};

// A convex region bounded by radius-r arcs. Vertices are in counterclockwise
// order; edge i joins vertex i to vertex i+1 (mod f0). One vertex degenerates
// to a point, two to the lens bounded by both radius-r arcs through the pair.
struct DiscPolygon {
    std::vector<Point> vertices;
    double radius = 0.0;
    std::vector<ArcEdge> edges;
};

// Builds the edge list from counterclockwise vertices via the left-center
// rule. Two vertices get both arcs (the lens); a single vertex gets none.
inline DiscPolygon make_disc_polygon(std::vector<Point> ccw_vertices, double r) {
    DiscPolygon poly;
    poly.radius = r;
    poly.vertices = std::move(ccw_vertices);
    const std::size_t k = poly.vertices.size();
    if (k >= 2) {
        const std::size_t edge_count = (k == 2) ? 2 : k;
        poly.edges.reserve(edge_count);
        for (std::size_t i = 0; i < edge_count; ++i) {
            const Point a = poly.vertices[i % k];
            const Point b = poly.vertices[(i + 1) % k];
            const Point c = circle_centers_through(a, b, r).first;
            poly.edges.push_back(ArcEdge{a, b, c, r});
        }
    }
    return poly;
}

// Signed shoelace area (positive for counterclockwise order).
inline double signed_shoelace_area(std::span<const Point> pts) {
    const std::size_t n = pts.size();
    if (n < 3) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = pts[i];
        const Point& b = pts[(i + 1) % n];
        s += cross(a, b);
    }
    return 0.5 * s;
}

inline double shoelace_area(std::span<const Point> pts) {
    return std::abs(signed_shoelace_area(pts));
}

// Checks the spindle-convexity certificate: every vertex inside every edge's
// closed supporting disc, chords within the diameter bound.
inline void validate(const DiscPolygon& poly) {
    for (const ArcEdge& e : poly.edges) {
        const double chord = dist(e.a, e.b);
        if (chord > 2.0 * e.radius * (1.0 + kGeomEps))
            throw InvalidPolygon("disc polygon edge chord exceeds 2r");
        if (std::abs(dist(e.a, e.center) - e.radius) > 2.0 * kGeomEps * e.radius ||
            std::abs(dist(e.b, e.center) - e.radius) > 2.0 * kGeomEps * e.radius)
            throw InvalidPolygon("disc polygon edge endpoints not on supporting circle");
        for (const Point& v : poly.vertices) {
            if (!in_closed_disc(e.center, e.radius, v))
                throw InvalidPolygon("disc polygon vertex outside a supporting disc");
        }
    }
}

// Area of an arc-polygon with outward-bulging edges: shoelace area of the
// vertex polygon plus one minor segment per edge. Zero for a single point.
inline double arc_polygon_area(const DiscPolygon& poly) {
    const std::size_t k = poly.vertices.size();
    if (k <= 1) return 0.0;
    double area = shoelace_area(poly.vertices);
    for (const ArcEdge& e : poly.edges) {
        const double chord = dist(e.a, e.b);
        if (chord > 2.0 * e.radius * (1.0 + kGeomEps))
            throw InvalidPolygon("arc_polygon_area: edge chord exceeds 2r");
        area += segment_area(std::min(chord, 2.0 * e.radius), e.radius);
    }
    return area;
}

}  // namespace spindle

#endif  // SPINDLE_GEOM_HPP
