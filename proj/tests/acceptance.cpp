// Acceptance suite: one check per line, exit code = number of failures.
//
// The checks pin the library's quantitative contracts: the circle limit
// constants, the ellipse limit coefficients, the variance scaling orders in
// n, hull oracle equivalence, hull invariants, disc-cap scalings in t, the
// arc-triangle variance order, closed-form constants, and bit-level
// reproducibility across worker counts.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "spindle/caps.hpp"
#include "spindle/csv.hpp"
#include "spindle/experiment.hpp"
#include "spindle/hull.hpp"
#include "spindle/stats.hpp"
#include "spindle/theory.hpp"

using namespace spindle;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::size_t workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// ---------------------------------------------------------------- checks ---

// Circle limits: E f0 -> pi^2/2 and E missed * n -> pi^3/2 at r = rho = 1.
Outcome check_circle_constants() {
    const ConvexDisc disc = ConvexDisc::circle(1.0);
    ExperimentConfig cfg;
    cfg.r = 1.0;
    cfg.n_grid = {1000, 10000, 100000};
    cfg.reps = 500;
    cfg.seed = 20250808;
    cfg.workers = workers();
    const auto moments = estimate_moments(run_experiment(disc, cfg).records);

    const double f0_target = kPi * kPi / 2.0;
    const double missed_target = kPi * kPi * kPi / 2.0;
    const MomentEstimate& top = moments.back();
    const double f0_dev = std::abs(top.mean_f0 - f0_target) / f0_target;
    const double missed_n = top.mean_missed * static_cast<double>(top.n);
    const double missed_dev = std::abs(missed_n - missed_target) / missed_target;

    // Monotone approach, resolved at the 3-sigma noise level of the
    // replication means.
    bool approaching = true;
    for (std::size_t k = 0; k + 1 < moments.size(); ++k) {
        const double d0 = std::abs(moments[k].mean_f0 - f0_target);
        const double d1 = std::abs(moments[k + 1].mean_f0 - f0_target);
        const double noise =
            3.0 * std::sqrt(moments[k].se_mean_f0 * moments[k].se_mean_f0 +
                            moments[k + 1].se_mean_f0 * moments[k + 1].se_mean_f0);
        if (d1 > d0 + noise) approaching = false;
    }

    Outcome out;
    out.pass = f0_dev <= 0.05 && missed_dev <= 0.05 && approaching;
    out.detail = "mean_f0(1e5)=" + fmt(top.mean_f0) + " (target " + fmt(f0_target) + ", dev " +
                 fmt(100.0 * f0_dev) + "% <= 5%), missed*n=" + fmt(missed_n) + " (target " +
                 fmt(missed_target) + ", dev " + fmt(100.0 * missed_dev) + "% <= 5%), approach " +
                 (approaching ? "monotone within 3 sigma" : "NOT monotone");
    return out;
}

// Ellipse limit coefficients: E f0 * n^{-1/3} and E missed * n^{2/3}.
Outcome check_ellipse_coefficients() {
    const ConvexDisc e = ConvexDisc::ellipse(1.0, 0.8);
    const LimitConstants lc = limit_constants(e, 2.0);
    ExperimentConfig cfg;
    cfg.r = 2.0;
    cfg.n_grid = {100000};
    cfg.reps = 500;
    cfg.seed = 8082025;
    cfg.workers = workers();
    const auto moments = estimate_moments(run_experiment(e, cfg).records);
    const double n = 100000.0;
    const double vertex_hat = moments[0].mean_f0 * std::pow(n, -1.0 / 3.0);
    const double area_hat = moments[0].mean_missed * std::pow(n, 2.0 / 3.0);
    const double vdev = std::abs(vertex_hat - lc.vertex_coeff) / lc.vertex_coeff;
    const double adev = std::abs(area_hat - lc.area_coeff) / lc.area_coeff;
    Outcome out;
    out.pass = vdev <= 0.10 && adev <= 0.10;
    out.detail = "f0*n^(-1/3)=" + fmt(vertex_hat) + " vs " + fmt(lc.vertex_coeff) + " (dev " +
                 fmt(100.0 * vdev) + "% <= 10%), missed*n^(2/3)=" + fmt(area_hat) + " vs " +
                 fmt(lc.area_coeff) + " (dev " + fmt(100.0 * adev) + "% <= 10%)";
    return out;
}

FitResult variance_fit(const std::vector<MomentEstimate>& moments, bool vertex_count) {
    std::vector<std::pair<double, double>> pairs;
    for (const MomentEstimate& m : moments)
        pairs.push_back({static_cast<double>(m.n), vertex_count ? m.var_f0 : m.var_missed});
    return fit_exponent(pairs);
}

std::vector<std::size_t> dyadic_grid() {
    std::vector<std::size_t> g;
    for (int k = 10; k <= 17; ++k) g.push_back(std::size_t{1} << k);
    return g;
}

// Variance orders in the smooth regime: Var f0 ~ n^{1/3}, Var missed ~ n^{-5/3}.
Outcome check_variance_orders() {
    const ConvexDisc e = ConvexDisc::ellipse(1.0, 0.8);
    ExperimentConfig cfg;
    cfg.r = 2.0;
    cfg.n_grid = dyadic_grid();
    cfg.reps = 2000;
    cfg.seed = 31415926;
    cfg.workers = workers();
    const auto moments = estimate_moments(run_experiment(e, cfg).records);
    const FitResult f0_fit = variance_fit(moments, true);
    const FitResult missed_fit = variance_fit(moments, false);
    const bool p1 = std::abs(f0_fit.slope - 1.0 / 3.0) <= 0.10;
    const bool p2 = std::abs(missed_fit.slope + 5.0 / 3.0) <= 0.15;
    Outcome out;
    out.pass = p1 && p2;
    out.detail = "var_f0 slope=" + fmt(f0_fit.slope) + " (1/3 +- 0.10), var_missed slope=" +
                 fmt(missed_fit.slope) + " (-5/3 +- 0.15)";
    return out;
}

// Bounded vertex-count variance in the circle r = rho regime.
Outcome check_circle_variance_flat() {
    const ConvexDisc disc = ConvexDisc::circle(1.0);
    ExperimentConfig cfg;
    cfg.r = 1.0;
    cfg.n_grid = dyadic_grid();
    cfg.reps = 2000;
    cfg.seed = 27182818;
    cfg.workers = workers();
    const auto moments = estimate_moments(run_experiment(disc, cfg).records);
    const FitResult fit = variance_fit(moments, true);
    Outcome out;
    out.pass = std::abs(fit.slope) <= 0.10;
    out.detail = "var_f0 slope=" + fmt(fit.slope) + " (0 +- 0.10)";
    return out;
}

// Fast hull vs the pairwise oracle over randomized instances.
Outcome check_oracle_equivalence() {
    const ConvexDisc circle = ConvexDisc::circle(1.0);
    const ConvexDisc ellipse = ConvexDisc::ellipse(1.0, 0.8);
    const double radii[3] = {1.2, 2.0, 5.0};
    std::size_t mismatches = 0, cert_failures = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        Rng stream(424242, trial);
        const ConvexDisc& model = (trial % 2 == 0) ? circle : ellipse;
        const std::size_t n = 1 + stream.next_u64() % 64;
        const double r = radii[trial % 3];
        const auto pts = model.sample_uniform(stream, n);
        const DiscPolygon fast = hull_fast(pts, r);
        const DiscPolygon ref = hull_oracle(pts, r);
        std::set<std::pair<double, double>> a, b;
        for (const Point& p : fast.vertices) a.insert({p.x, p.y});
        for (const Point& p : ref.vertices) b.insert({p.x, p.y});
        if (a != b) ++mismatches;
        bool cert = true;
        for (const ArcEdge& edge : fast.edges)
            for (const Point& p : pts)
                if (!in_closed_disc(edge.center, edge.radius, p)) cert = false;
        if (!cert) ++cert_failures;
    }
    Outcome out;
    out.pass = mismatches == 0 && cert_failures == 0;
    out.detail = "10000 instances, " + std::to_string(mismatches) + " vertex-set mismatches, " +
                 std::to_string(cert_failures) + " certificate failures";
    return out;
}

// Hull invariants: containment chain, vertex-count domination, add-a-point
// monotonicity and r-monotonicity.
Outcome check_hull_properties() {
    const ConvexDisc circle = ConvexDisc::circle(1.0);
    const ConvexDisc ellipse = ConvexDisc::ellipse(1.0, 0.8);
    std::size_t violations = 0;
    const double tol = 1e-9;

    for (int trial = 0; trial < 1000; ++trial) {
        Rng stream(515151, trial);
        const ConvexDisc& model = (trial % 2 == 0) ? circle : ellipse;
        const double r = (trial % 2 == 0) ? 1.4 : 2.0;
        const std::size_t n = 2 + stream.next_u64() % 63;
        const auto pts = model.sample_uniform(stream, n);
        const DiscPolygon poly = hull_fast(pts, r);
        const double hull_area = arc_polygon_area(poly);
        if (shoelace_area(poly.vertices) > hull_area + tol) ++violations;
        if (hull_area > model.area() + tol) ++violations;
    }
    for (int trial = 0; trial < 1000; ++trial) {
        Rng stream(616161, trial);
        const ConvexDisc& model = (trial % 2 == 0) ? circle : ellipse;
        const double r = (trial % 2 == 0) ? 1.4 : 2.0;
        const std::size_t n = 3 + stream.next_u64() % 62;
        const auto pts = model.sample_uniform(stream, n);
        if (hull_fast(pts, r).vertices.size() > convex_hull(pts).size()) ++violations;
    }
    for (int trial = 0; trial < 1000; ++trial) {
        Rng stream(717171, trial);
        const ConvexDisc& model = (trial % 2 == 0) ? circle : ellipse;
        const double r = (trial % 2 == 0) ? 1.4 : 2.0;
        const std::size_t n = 2 + stream.next_u64() % 40;
        auto pts = model.sample_uniform(stream, n + 1);
        const Point extra = pts.back();
        pts.pop_back();
        const DiscPolygon before = hull_fast(pts, r);
        pts.push_back(extra);
        const DiscPolygon after = hull_fast(pts, r);
        if (arc_polygon_area(after) < arc_polygon_area(before) - tol) ++violations;
        for (const ArcEdge& e : after.edges)
            for (const Point& v : before.vertices)
                if (!in_closed_disc(e.center, e.radius, v)) ++violations;
    }
    for (int trial = 0; trial < 1000; ++trial) {
        Rng stream(818181, trial);
        const ConvexDisc& model = (trial % 2 == 0) ? circle : ellipse;
        const std::size_t n = 2 + stream.next_u64() % 40;
        const auto pts = model.sample_uniform(stream, n);
        if (arc_polygon_area(hull_fast(pts, 1.5)) <
            arc_polygon_area(hull_fast(pts, 3.0)) - tol)
            ++violations;
    }
    Outcome out;
    out.pass = violations == 0;
    out.detail = "4 x 1000 instances, " + std::to_string(violations) + " violations beyond 1e-9";
    return out;
}

// Disc-cap scaling: ell/sqrt(t) and area/t^{3/2} settle to within 2% per
// dyadic step at the finest levels.
Outcome check_cap_scalings() {
    const ConvexDisc e = ConvexDisc::ellipse(1.0, 0.8);
    double worst_len = 0.0, worst_area = 0.0;
    for (int k = 0; k < 8; ++k) {
        const double theta = k * kPi / 4.0;
        std::vector<double> rl, ra;
        for (double t = 2.56e-2; t >= 0.99e-4; t *= 0.5) {
            const DiscCap cap = cap_from_normal_height(e, theta, t, 2.0);
            rl.push_back(cap.arc_length / std::sqrt(t));
            ra.push_back(cap.area / std::pow(t, 1.5));
        }
        const std::size_t m = rl.size();
        worst_len = std::max(worst_len, std::abs(rl[m - 1] / rl[m - 2] - 1.0));
        worst_area = std::max(worst_area, std::abs(ra[m - 1] / ra[m - 2] - 1.0));
    }
    Outcome out;
    out.pass = worst_len < 0.02 && worst_area < 0.02;
    out.detail = "8 directions, worst finest-step deviation: arc " + fmt(100.0 * worst_len) +
                 "%, area " + fmt(100.0 * worst_area) + "% (< 2%)";
    return out;
}

// Arc-triangle variance order: slope of log Var against log t near 3.
Outcome check_arc_triangle_variance_order() {
    const ConvexDisc e = ConvexDisc::ellipse(0.9, 0.7);
    std::vector<std::pair<double, double>> pairs;
    const double ts[4] = {0.02, 0.01, 0.005, 0.0025};
    for (int i = 0; i < 4; ++i) {
        Rng rng(987654321, static_cast<std::uint64_t>(i));
        pairs.push_back({ts[i], arc_triangle_variance(e, 0.0, ts[i], 100000, rng).variance});
    }
    const FitResult fit = fit_exponent(pairs);
    Outcome out;
    out.pass = fit.slope >= 2.7 && fit.slope <= 3.3;
    out.detail = "Var slope=" + fmt(fit.slope) + " (in [2.7, 3.3])";
    return out;
}

// Closed-form checks: circle curvature-deficit integral and the exact
// area/vertex coefficient identity.
Outcome check_closed_forms() {
    double worst_c1 = 0.0;
    for (double rho : {0.5, 1.0, 2.0}) {
        const double r = 2.0 * rho;
        const double closed = 2.0 * kPi * rho * std::cbrt(1.0 / rho - 1.0 / r);
        const double got = curvature_deficit_integral(ConvexDisc::circle(rho), r);
        worst_c1 = std::max(worst_c1, std::abs(got - closed) / closed);
    }
    double worst_id = 0.0;
    for (const auto& [model, r] : {std::pair{ConvexDisc::circle(1.0), 2.0},
                                   std::pair{ConvexDisc::ellipse(1.0, 0.8), 2.0}}) {
        const LimitConstants lc = limit_constants(model, r);
        worst_id = std::max(
            worst_id, std::abs(lc.area_coeff / lc.vertex_coeff - model.area()) / model.area());
    }
    Outcome out;
    out.pass = worst_c1 <= 1e-8 && worst_id <= 1e-12;
    out.detail = "c1 closed-form rel err " + fmt(worst_c1) + " (<= 1e-8), coefficient identity " +
                 fmt(worst_id) + " (<= 1e-12)";
    return out;
}

// Bit-level determinism of the experiment pipeline across worker counts.
Outcome check_determinism() {
    const ConvexDisc disc = ConvexDisc::circle(1.0);
    ExperimentConfig cfg;
    cfg.r = 1.0;
    cfg.n_grid = {1000, 10000, 100000};
    cfg.reps = 500;
    cfg.seed = 20250808;
    cfg.workers = 1;
    const RunResult a = run_experiment(disc, cfg);
    cfg.workers = 8;
    const RunResult b = run_experiment(disc, cfg);
    const bool rec = records_csv(a.records) == records_csv(b.records);
    const bool mom =
        moments_csv(estimate_moments(a.records)) == moments_csv(estimate_moments(b.records));
    Outcome out;
    out.pass = rec && mom;
    out.detail = std::string("records ") + (rec ? "identical" : "DIFFER") + ", moments " +
                 (mom ? "identical" : "DIFFER") + " for workers 1 vs 8";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    struct Criterion {
        int id;
        const char* name;
        double budget_seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "circle limit constants", 300.0, check_circle_constants},
        {2, "ellipse limit coefficients", 600.0, check_ellipse_coefficients},
        {3, "variance scaling orders", 1800.0, check_variance_orders},
        {4, "circle bounded vertex variance", 0.0, check_circle_variance_flat},
        {5, "hull oracle equivalence", 120.0, check_oracle_equivalence},
        {6, "hull property suite", 0.0, check_hull_properties},
        {7, "disc-cap scalings", 0.0, check_cap_scalings},
        {8, "arc-triangle variance order", 0.0, check_arc_triangle_variance_order},
        {9, "closed-form constants", 0.0, check_closed_forms},
        {10, "worker-count determinism", 0.0, check_determinism},
    };

    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const Criterion& c : criteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool pass = out.pass;
        std::string budget_note;
        if (c.budget_seconds > 0.0) {
            budget_note = ", budget " + fmt(c.budget_seconds) + " s";
            if (secs > c.budget_seconds) pass = false;
        }
        std::printf("criterion %02d [%s] %-32s (%.1f s%s) %s\n", c.id, pass ? "PASS" : "FAIL",
                    c.name, secs, budget_note.c_str(), out.detail.c_str());
        std::fflush(stdout);
        if (!pass) ++failures;
    }
    if (failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criterion(s) FAILED\n", failures);
    return failures;
}
