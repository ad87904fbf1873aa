#ifndef SPINDLE_SHAPE_HPP
#define SPINDLE_SHAPE_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "spindle/errors.hpp"
#include "spindle/geom.hpp"
#include "spindle/quadrature.hpp"
#include "spindle/rng.hpp"

namespace spindle {

struct BoundaryPoint {
    Point p;       // point on the boundary
    Point normal;  // outer unit normal
    double kappa;  // curvature (> 0 for admissible models)
};

struct Rect {
    double x0, y0, x1, y1;
};

struct SampleStats {
    std::uint64_t attempts = 0;  // total rejection-sampling attempts
};

// Boundary map theta -> point with first and second derivatives; must be
// 2*pi-periodic, trace the boundary counterclockwise exactly once, and have
// strictly positive curvature.
struct ParametricBoundary {
    std::function<Point(double)> point;
    std::function<Point(double)> d1;
    std::function<Point(double)> d2;
};

namespace detail {

inline double curvature_from_derivs(Point d1, Point d2) {
    const double speed = norm(d1);
    return cross(d1, d2) / (speed * speed * speed);
}

// Golden-section minimization of f on [lo, hi] (unimodal on the bracket).
template <typename F>
double golden_min(const F& f, double lo, double hi, double tol = 1e-12) {
    const double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

// A convex disc K with C^2 boundary of strictly positive curvature, given by
// a counterclockwise boundary parametrization. Circle and ellipse carry
// closed forms; arbitrary models go through the parametric constructor.
// Immutable after construction and safe to share between workers.
class ConvexDisc {
public:
    enum class Kind { Circle, Ellipse, Parametric };

    static ConvexDisc circle(double rho) {
        if (!(rho > 0.0) || !std::isfinite(rho)) throw ConfigError("circle: rho must be positive");
        ConvexDisc m;
        m.kind_ = Kind::Circle;
        m.name_ = "circle";
        m.rho_ = rho;
        m.kappa_min_ = m.kappa_max_ = 1.0 / rho;
        m.area_ = std::numbers::pi * rho * rho;
        m.bbox_ = {-rho, -rho, rho, rho};
        return m;
    }

    static ConvexDisc ellipse(double a, double b) {
        if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
            throw ConfigError("ellipse: semi-axes must be positive");
        ConvexDisc m;
        m.kind_ = Kind::Ellipse;
        m.name_ = "ellipse";
        m.a_ = a;
        m.b_ = b;
        const double hi = std::max(a, b), lo = std::min(a, b);
        m.kappa_min_ = lo / (hi * hi);
        m.kappa_max_ = hi / (lo * lo);
        m.area_ = std::numbers::pi * a * b;
        m.bbox_ = {-a, -b, a, b};
        return m;
    }

    static ConvexDisc parametric(std::string name, ParametricBoundary boundary) {
        ConvexDisc m;
        m.kind_ = Kind::Parametric;
        m.name_ = std::move(name);
        m.param_ = std::make_shared<ParametricBoundary>(std::move(boundary));
        m.init_parametric();
        return m;
    }

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    double circle_rho() const { return rho_; }
    double ellipse_a() const { return a_; }
    double ellipse_b() const { return b_; }

    double kappa_min() const { return kappa_min_; }
    double kappa_max() const { return kappa_max_; }
    double free_rolling_radius() const { return 1.0 / kappa_min_; }  // r_M = 1 / kappa_min
    double area() const { return area_; }
    const Rect& bbox() const { return bbox_; }

    Point boundary(double theta) const {
        switch (kind_) {
            case Kind::Circle:
                return {rho_ * std::cos(theta), rho_ * std::sin(theta)};
            case Kind::Ellipse:
                return {a_ * std::cos(theta), b_ * std::sin(theta)};
            case Kind::Parametric:
                return param_->point(theta);
        }
        return {};
    }

    Point boundary_d1(double theta) const {
        switch (kind_) {
            case Kind::Circle:
                return {-rho_ * std::sin(theta), rho_ * std::cos(theta)};
            case Kind::Ellipse:
                return {-a_ * std::sin(theta), b_ * std::cos(theta)};
            case Kind::Parametric:
                return param_->d1(theta);
        }
        return {};
    }

    Point boundary_d2(double theta) const {
        switch (kind_) {
            case Kind::Circle:
                return {-rho_ * std::cos(theta), -rho_ * std::sin(theta)};
            case Kind::Ellipse:
                return {-a_ * std::cos(theta), -b_ * std::sin(theta)};
            case Kind::Parametric:
                return param_->d2(theta);
        }
        return {};
    }

    // Boundary point, outer unit normal and curvature at parameter theta.
    BoundaryPoint boundary_point(double theta) const {
        const Point p = boundary(theta);
        const Point t1 = boundary_d1(theta);
        const Point t2 = boundary_d2(theta);
        const double speed = norm(t1);
        // Counterclockwise trace: the outer normal is the tangent rotated -90.
        const Point normal{t1.y / speed, -t1.x / speed};
        return {p, normal, detail::curvature_from_derivs(t1, t2)};
    }

    // Closed membership test; boundary points report true.
    bool contains(Point p) const {
        switch (kind_) {
            case Kind::Circle: {
                const double rr = rho_ * (1.0 + 1e-12);
                return p.x * p.x + p.y * p.y <= rr * rr;
            }
            case Kind::Ellipse: {
                const double u = p.x / a_, v = p.y / b_;
                return u * u + v * v <= 1.0 + 4e-12;
            }
            case Kind::Parametric:
                return polyline_contains(p);
        }
        return false;
    }

    // n i.i.d. uniform points in K by rejection from the bounding box.
    // Identical (seed, stream) input state gives bit-identical output.
    std::vector<Point> sample_uniform(Rng& rng, std::size_t n, SampleStats* stats = nullptr,
                                      std::uint64_t max_attempts_per_point = 1000000) const {
        if (n < 1) throw ConfigError("sample_uniform: n must be >= 1");
        std::vector<Point> out;
        out.reserve(n);
        sample_uniform_into(rng, n, out, stats, max_attempts_per_point);
        return out;
    }

    void sample_uniform_into(Rng& rng, std::size_t n, std::vector<Point>& out,
                             SampleStats* stats = nullptr,
                             std::uint64_t max_attempts_per_point = 1000000) const {
        const double w = bbox_.x1 - bbox_.x0;
        const double h = bbox_.y1 - bbox_.y0;
        std::uint64_t attempts = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t local = 0;
            for (;;) {
                const double x = bbox_.x0 + rng.uniform01() * w;
                const double y = bbox_.y0 + rng.uniform01() * h;
                ++attempts;
                if (contains({x, y})) {
                    out.push_back({x, y});
                    break;
                }
                if (++local >= max_attempts_per_point)
                    throw SamplerStall("sample_uniform: rejection cap reached; model broken?");
            }
        }
        if (stats) stats->attempts += attempts;
    }

private:
    void init_parametric() {
        // Curvature scan: reject non-convex models, locate extremes.
        constexpr int kGrid = 4096;
        const double step = 2.0 * std::numbers::pi / kGrid;
        double kmin = std::numeric_limits<double>::infinity();
        double kmax = 0.0;
        int imin = 0;
        double max_speed = 0.0;
        for (int i = 0; i < kGrid; ++i) {
            const double th = i * step;
            const double k = detail::curvature_from_derivs(param_->d1(th), param_->d2(th));
            if (!(k > 0.0))
                throw ConfigError("parametric model: curvature must be positive everywhere");
            if (k < kmin) {
                kmin = k;
                imin = i;
            }
            kmax = std::max(kmax, k);
            max_speed = std::max(max_speed, norm(param_->d1(th)));
        }
        const auto kappa_at = [this](double th) {
            return detail::curvature_from_derivs(param_->d1(th), param_->d2(th));
        };
        const double refined =
            detail::golden_min(kappa_at, (imin - 1) * step, (imin + 1) * step, 1e-13);
        kappa_min_ = std::min(kmin, kappa_at(refined));
        kappa_max_ = kmax;

        // Green's theorem area.
        area_ = adaptive_simpson(
            [this](double th) {
                const Point p = param_->point(th);
                const Point d = param_->d1(th);
                return 0.5 * (p.x * d.y - p.y * d.x);
            },
            0.0, 2.0 * std::numbers::pi, 1e-14, 1e-10, 40);
        if (!(area_ > 0.0)) throw ConfigError("parametric model: nonpositive area");

        // Bounding box from a dense polyline, padded by the maximal sag of a
        // boundary arc between grid nodes, so the box provably encloses K.
        constexpr int kPoly = 8192;
        poly_.resize(kPoly);
        const double pstep = 2.0 * std::numbers::pi / kPoly;
        Rect r{1e300, 1e300, -1e300, -1e300};
        for (int i = 0; i < kPoly; ++i) {
            const Point p = param_->point(i * pstep);
            poly_[i] = p;
            r.x0 = std::min(r.x0, p.x);
            r.y0 = std::min(r.y0, p.y);
            r.x1 = std::max(r.x1, p.x);
            r.y1 = std::max(r.y1, p.y);
        }
        const double seg = max_speed * pstep;
        const double pad = 0.125 * seg * seg * kappa_max_ + 1e-12;
        bbox_ = {r.x0 - pad, r.y0 - pad, r.x1 + pad, r.y1 + pad};
    }

    // Crossing-number test against the cached boundary polyline.
    bool polyline_contains(Point p) const {
        bool inside = false;
        const std::size_t n = poly_.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const Point& a = poly_[j];
            const Point& b = poly_[i];
            if ((b.y > p.y) != (a.y > p.y)) {
                const double xint = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
                if (p.x < xint) inside = !inside;
            }
        }
        return inside;
    }

    Kind kind_ = Kind::Circle;
    std::string name_;
    double rho_ = 1.0;
    double a_ = 1.0, b_ = 1.0;
    std::shared_ptr<const ParametricBoundary> param_;
    std::vector<Point> poly_;

    double kappa_min_ = 1.0;
    double kappa_max_ = 1.0;
    double area_ = std::numbers::pi;
    Rect bbox_{-1.0, -1.0, 1.0, 1.0};
};

// Registry for code-defined parametric models, referenced by name from
// configs. Registration happens at startup; lookups are read-only afterwards.
inline std::map<std::string, ParametricBoundary>& model_registry() {
    static std::map<std::string, ParametricBoundary> reg;
    return reg;
}

inline void register_model(const std::string& name, ParametricBoundary boundary) {
    model_registry()[name] = std::move(boundary);
}

inline ConvexDisc make_registered_model(const std::string& name) {
    const auto it = model_registry().find(name);
    if (it == model_registry().end())
        throw ConfigError("unknown model name: " + name);
    return ConvexDisc::parametric(name, it->second);
}

}  // namespace spindle

#endif  // SPINDLE_SHAPE_HPP
