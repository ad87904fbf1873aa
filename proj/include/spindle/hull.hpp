#ifndef SPINDLE_HULL_HPP
#define SPINDLE_HULL_HPP

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "spindle/errors.hpp"
#include "spindle/geom.hpp"
#include "spindle/shape.hpp"

namespace spindle {

struct HullSummary {
    std::size_t f0 = 0;
    double hull_area = 0.0;
    double missed_area = 0.0;
    std::size_t edge_count = 0;
};

// Diagnostics from hull_fast. A fallback means the pruning scan failed its
// global verification pass and the pairwise oracle recomputed the hull.
struct HullStats {
    bool used_fallback = false;
    const char* fallback_reason = nullptr;
};

namespace detail {

inline bool lex_less(const Point& a, const Point& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
}

// Sorted copy with exact-equality duplicates removed.
inline std::vector<Point> sorted_dedup(std::span<const Point> pts) {
    std::vector<Point> v(pts.begin(), pts.end());
    for (const Point& p : v)
        if (!is_finite(p)) throw OutOfRange("hull: non-finite input point");
    std::sort(v.begin(), v.end(), lex_less);
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Andrew monotone chain on lexicographically sorted distinct points.
// Strict turns only, so the result is in strictly convex position;
// collinear input degenerates to its two extreme points.
inline std::vector<Point> monotone_chain(const std::vector<Point>& s) {
    const std::size_t n = s.size();
    if (n <= 2) return s;
    std::vector<Point> h(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(h[k - 1] - h[k - 2], s[i] - h[k - 2]) <= 0.0) --k;
        h[k++] = s[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross(h[k - 1] - h[k - 2], s[i] - h[k - 2]) <= 0.0) --k;
        h[k++] = s[i];
    }
    h.resize(k - 1);
    return h;
}

}  // namespace detail

// Vertices of the ordinary convex hull, counterclockwise. Exposed because the
// spindle hull's vertex set is always a subset of these.
inline std::vector<Point> convex_hull(std::span<const Point> pts) {
    if (pts.empty()) throw EmptyInput("convex_hull: no points");
    return detail::monotone_chain(detail::sorted_dedup(pts));
}

namespace detail {

// All-pairs edge test straight from the definition: a pair (p, q) and one of
// the two radius-r discs through it contribute an edge exactly when the disc
// contains every input point (boundary band counts as contained).
struct OracleEdge {
    std::size_t i, j;  // vertex indices into the deduplicated point list
    Point center;
};

inline std::vector<OracleEdge> oracle_edges(const std::vector<Point>& pts, double r) {
    std::vector<OracleEdge> edges;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto [cl, cr] = circle_centers_through(pts[i], pts[j], r);
            for (const Point& c : {cl, cr}) {
                bool all_in = true;
                for (std::size_t k = 0; k < n; ++k) {
                    if (!in_closed_disc(c, r, pts[k])) {
                        all_in = false;
                        break;
                    }
                }
                if (all_in) edges.push_back({i, j, c});
            }
        }
    }
    return edges;
}

// Assembles the counterclockwise polygon from the passing edge set.
inline DiscPolygon assemble_oracle(const std::vector<Point>& pts,
                                   const std::vector<OracleEdge>& edges, double r) {
    // Vertex set = set of edge endpoints. A polygon vertex needs two incident
    // supporting arcs; endpoints with fewer are tolerance-band ties sitting
    // almost exactly on a neighboring edge circle, and get peeled so the
    // remaining cycle is consistent.
    std::vector<char> keep(pts.size(), 0);
    std::vector<std::size_t> degree(pts.size(), 0);
    for (const OracleEdge& e : edges) {
        keep[e.i] = keep[e.j] = 1;
        ++degree[e.i];
        ++degree[e.j];
    }
    for (bool changed = true; changed;) {
        changed = false;
        std::fill(degree.begin(), degree.end(), 0);
        for (const OracleEdge& e : edges) {
            if (keep[e.i] && keep[e.j]) {
                ++degree[e.i];
                ++degree[e.j];
            }
        }
        for (std::size_t k = 0; k < pts.size(); ++k) {
            if (keep[k] && degree[k] < 2) {
                keep[k] = 0;
                changed = true;
            }
        }
    }
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < pts.size(); ++k)
        if (keep[k]) idx.push_back(k);
    if (idx.empty()) throw InvalidPolygon("hull_oracle: no supporting edge cycle found");

    std::vector<Point> verts;
    verts.reserve(idx.size());
    for (std::size_t k : idx) verts.push_back(pts[k]);

    if (verts.size() == 1) return make_disc_polygon(std::move(verts), r);

    // Order counterclockwise around the centroid (vertices are in convex
    // position, so angular order is well defined).
    Point c{0.0, 0.0};
    for (const Point& p : verts) c = c + p;
    c = (1.0 / static_cast<double>(verts.size())) * c;
    std::sort(verts.begin(), verts.end(), [&](const Point& a, const Point& b) {
        return std::atan2(a.y - c.y, a.x - c.x) < std::atan2(b.y - c.y, b.x - c.x);
    });

    // Each consecutive pair must be backed by a passing edge; extra passing
    // pairs (exactly concyclic ties) are ignored.
    const std::size_t k = verts.size();
    const std::size_t need = (k == 2) ? 1 : k;
    for (std::size_t e = 0; e < need; ++e) {
        const Point a = verts[e % k];
        const Point b = verts[(e + 1) % k];
        const bool found = std::any_of(edges.begin(), edges.end(), [&](const OracleEdge& oe) {
            return (pts[oe.i] == a && pts[oe.j] == b) || (pts[oe.i] == b && pts[oe.j] == a);
        });
        if (!found) throw InvalidPolygon("hull_oracle: vertex cycle missing a supporting edge");
    }
    return make_disc_polygon(std::move(verts), r);
}

}  // namespace detail

// Ground-truth r-spindle hull by exhaustive pair testing, O(n^3).
inline DiscPolygon hull_oracle(std::span<const Point> points, double r) {
    if (points.empty()) throw EmptyInput("hull_oracle: no points");
    const std::vector<Point> pts = detail::sorted_dedup(points);
    if (pts.size() == 1) return make_disc_polygon({pts[0]}, r);
    return detail::assemble_oracle(pts, detail::oracle_edges(pts, r), r);
}

namespace detail {

// Cyclic pruning of convex-hull vertices: drop a middle vertex b of the
// consecutive triple (a, b, c) whenever b lies strictly inside the radius-r
// disc through (a, c) with center left of a->c. Such a b lies in the interior
// of the lens of a and c, hence in the hull interior, so removal is safe.
// Returns surviving vertices in counterclockwise order.
inline std::vector<Point> prune_ring(const std::vector<Point>& hull, double r) {
    const std::size_t h = hull.size();
    std::vector<std::size_t> next(h), prev(h);
    std::vector<char> alive(h, 1), queued(h, 1);
    for (std::size_t i = 0; i < h; ++i) {
        next[i] = (i + 1) % h;
        prev[i] = (i + h - 1) % h;
    }
    std::vector<std::size_t> work(h);
    for (std::size_t i = 0; i < h; ++i) work[i] = i;
    std::size_t alive_count = h;

    while (!work.empty() && alive_count > 2) {
        const std::size_t b = work.back();
        work.pop_back();
        queued[b] = 0;
        if (!alive[b]) continue;
        const std::size_t a = prev[b], c = next[b];
        if (a == c) continue;
        const Point center = circle_centers_through(hull[a], hull[c], r).first;
        if (strictly_in_disc(center, r, hull[b])) {
            alive[b] = 0;
            --alive_count;
            next[a] = c;
            prev[c] = a;
            for (std::size_t t : {a, c}) {
                if (!queued[t] && alive[t]) {
                    queued[t] = 1;
                    work.push_back(t);
                }
            }
        }
    }

    std::vector<Point> out;
    out.reserve(alive_count);
    std::size_t start = 0;
    while (!alive[start]) ++start;
    std::size_t cur = start;
    do {
        out.push_back(hull[cur]);
        cur = next[cur];
    } while (cur != start);
    return out;
}

// Global verification pass: every input point must lie in every retained
// edge's closed supporting disc. This is the defining certificate.
inline bool certify(const std::vector<Point>& ring, double r, std::span<const Point> all) {
    const std::size_t k = ring.size();
    if (k <= 1) return true;
    const std::size_t edge_count = (k == 2) ? 2 : k;
    for (std::size_t e = 0; e < edge_count; ++e) {
        const Point a = ring[e % k];
        const Point b = ring[(e + 1) % k];
        const Point c = circle_centers_through(a, b, r).first;
        const double rr = r * (1.0 + kGeomEps);
        const double rr2 = rr * rr;
        for (const Point& p : all) {
            if (dist2(p, c) > rr2) return false;
        }
    }
    return true;
}

}  // namespace detail

// Fast r-spindle hull: ordinary convex hull, then a disc-predicate pruning
// scan over its vertex ring, then the full certificate over all points.
// On certificate failure the pairwise oracle re-runs on the convex hull
// vertices (the spindle hull of X equals that of its convex-hull vertices);
// the incident is reported through `stats`.
inline DiscPolygon hull_fast(std::span<const Point> points, double r, HullStats* stats = nullptr) {
    if (points.empty()) throw EmptyInput("hull_fast: no points");
    const std::vector<Point> pts = detail::sorted_dedup(points);
    if (pts.size() == 1) return make_disc_polygon({pts[0]}, r);

    std::vector<Point> hull = detail::monotone_chain(pts);
    // Chord precondition; throws ChordTooLong on violation before scanning.
    for (std::size_t i = 0; i + 1 < hull.size(); ++i)
        (void)circle_centers_through(hull[i], hull[i + 1], r);
    if (hull.size() > 2) (void)circle_centers_through(hull.front(), hull.back(), r);

    std::vector<Point> ring = hull.size() > 2 ? detail::prune_ring(hull, r) : hull;
    if (detail::certify(ring, r, pts)) return make_disc_polygon(std::move(ring), r);

    // Fallback: definition-faithful oracle on the convex hull vertices (the
    // spindle hull of X equals that of its convex-hull vertex set).
    if (stats) {
        stats->used_fallback = true;
        stats->fallback_reason = "pruning scan failed certificate";
    }
    DiscPolygon poly = detail::assemble_oracle(hull, detail::oracle_edges(hull, r), r);
    if (detail::certify(poly.vertices, r, pts)) return poly;
    // Last resort: oracle over the raw point set; cubic cost keeps it small.
    if (pts.size() > 4096)
        throw InvalidPolygon("hull_fast: certificate unsatisfiable on a large input");
    return hull_oracle(points, r);
}

// Observables of a hull inside its containing model.
inline HullSummary summarize(const ConvexDisc& model, const DiscPolygon& poly) {
    for (const Point& v : poly.vertices) {
        if (!model.contains(v))
            throw VertexOutsideModel("summarize: hull vertex outside the model");
    }
    HullSummary s;
    s.f0 = poly.vertices.size();
    s.edge_count = poly.edges.size();
    s.hull_area = arc_polygon_area(poly);
    s.missed_area = model.area() - s.hull_area;
    return s;
}

}  // namespace spindle

#endif  // SPINDLE_HULL_HPP
