#ifndef SPINDLE_EXPERIMENT_HPP
#define SPINDLE_EXPERIMENT_HPP

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "spindle/errors.hpp"
#include "spindle/hull.hpp"
#include "spindle/rng.hpp"
#include "spindle/shape.hpp"
#include "spindle/stats.hpp"

namespace spindle {

struct ExperimentConfig {
    double r = 0.0;
    std::vector<std::size_t> n_grid;
    std::size_t reps = 0;  // replications per grid point
    std::uint64_t seed = 0;
    std::size_t workers = 1;

    // Rejects inadmissible radii and malformed grids. Radii equal to the
    // model's free rolling radius are allowed (the circle r = rho regime).
    void validate(const ConvexDisc& model) const {
        const double r_m = model.free_rolling_radius();
        if (!(r > 0.0) || r < r_m * (1.0 - 1e-12))
            throw ConfigError("config: r = " + std::to_string(r) +
                              " is below the model's free rolling radius r_M = " +
                              std::to_string(r_m) + " (need r >= r_M)");
        if (n_grid.empty()) throw ConfigError("config: empty n grid");
        for (std::size_t i = 0; i < n_grid.size(); ++i) {
            if (n_grid[i] < 1) throw ConfigError("config: n must be >= 1");
            if (i > 0 && n_grid[i] <= n_grid[i - 1])
                throw ConfigError("config: n grid must be strictly increasing");
        }
        if (reps < 1) throw ConfigError("config: reps must be >= 1");
    }
};

struct SampleRecord {
    std::size_t n = 0;
    std::size_t rep = 0;
    std::size_t f0 = 0;
    double hull_area = 0.0;
    double missed_area = 0.0;
};

struct MomentEstimate {
    std::size_t n = 0;
    std::size_t m = 0;
    double mean_f0 = 0.0, se_mean_f0 = 0.0, var_f0 = 0.0, se_var_f0 = 0.0;
    double mean_missed = 0.0, se_mean_missed = 0.0, var_missed = 0.0, se_var_missed = 0.0;
    // Jackknife cross-checks for the variance standard errors (diagnostics).
    double jack_se_var_f0 = 0.0, jack_se_var_missed = 0.0;
};

struct Incident {
    std::size_t n = 0;
    std::size_t rep = 0;
    std::string what;
};

struct RunResult {
    std::vector<SampleRecord> records;  // sorted by (n, rep)
    std::vector<Incident> incidents;
};

// Runs the full replication grid. Each replication draws its own counter-based
// stream from (seed, n, rep), so results are bit-identical for any worker
// count; records are gathered in task order. A replication whose fast hull
// fails its certificate (or throws) is retried under the pairwise oracle and
// logged as an incident; more than 0.1% incidents fail the run.
inline RunResult run_experiment(const ConvexDisc& model, const ExperimentConfig& cfg) {
    cfg.validate(model);
    struct Task {
        std::size_t n, rep;
    };
    std::vector<Task> tasks;
    tasks.reserve(cfg.n_grid.size() * cfg.reps);
    for (std::size_t n : cfg.n_grid)
        for (std::size_t rep = 0; rep < cfg.reps; ++rep) tasks.push_back({n, rep});

    std::vector<SampleRecord> records(tasks.size());
    std::vector<std::vector<Incident>> incident_slots(tasks.size());
    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mu;

    const auto worker = [&]() {
        std::vector<Point> pts;
        for (;;) {
            const std::size_t k = cursor.fetch_add(1);
            if (k >= tasks.size() || failed.load()) break;
            const Task task = tasks[k];
            try {
                Rng rng(cfg.seed, replication_stream(task.n, task.rep));
                pts.clear();
                model.sample_uniform_into(rng, task.n, pts);
                HullStats hs;
                DiscPolygon poly;
                try {
                    poly = hull_fast(pts, cfg.r, &hs);
                } catch (const Error& e) {
                    hs.used_fallback = true;
                    hs.fallback_reason = "exception";
                    incident_slots[k].push_back({task.n, task.rep, e.what()});
                    if (task.n > 4096) throw;  // cubic oracle is off the table here
                    poly = hull_oracle(pts, cfg.r);
                }
                if (hs.used_fallback && incident_slots[k].empty())
                    incident_slots[k].push_back({task.n, task.rep, hs.fallback_reason});
                const HullSummary sum = summarize(model, poly);
                records[k] = {task.n, task.rep, sum.f0, sum.hull_area, sum.missed_area};
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                break;
            }
        }
    };

    const std::size_t nworkers = std::max<std::size_t>(1, cfg.workers);
    if (nworkers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nworkers);
        for (std::size_t i = 0; i < nworkers; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    RunResult out;
    out.records = std::move(records);
    for (auto& slot : incident_slots)
        for (auto& inc : slot) out.incidents.push_back(std::move(inc));
    const double rate =
        static_cast<double>(out.incidents.size()) / static_cast<double>(tasks.size());
    if (rate > 1e-3)
        throw Error("run_experiment: hull fallback incident rate " + std::to_string(rate) +
                    " exceeds 0.1%");
    return out;
}

// Per-n moment estimates from the record stream (needs >= 2 records per n).
inline std::vector<MomentEstimate> estimate_moments(std::span<const SampleRecord> records) {
    std::vector<std::size_t> ns;
    for (const SampleRecord& r : records)
        if (ns.empty() || ns.back() != r.n) ns.push_back(r.n);

    std::vector<MomentEstimate> out;
    for (std::size_t n : ns) {
        std::vector<double> f0s, missed;
        for (const SampleRecord& r : records) {
            if (r.n != n) continue;
            f0s.push_back(static_cast<double>(r.f0));
            missed.push_back(r.missed_area);
        }
        const Moments mf = compute_moments(f0s);
        const Moments mm = compute_moments(missed);
        MomentEstimate e;
        e.n = n;
        e.m = f0s.size();
        e.mean_f0 = mf.mean;
        e.se_mean_f0 = mf.se_mean;
        e.var_f0 = mf.var;
        e.se_var_f0 = mf.se_var;
        e.jack_se_var_f0 = mf.se_var_jackknife;
        e.mean_missed = mm.mean;
        e.se_mean_missed = mm.se_mean;
        e.var_missed = mm.var;
        e.se_var_missed = mm.se_var;
        e.jack_se_var_missed = mm.se_var_jackknife;
        out.push_back(e);
    }
    return out;
}

}  // namespace spindle

#endif  // SPINDLE_EXPERIMENT_HPP
