// Command-line front end: seeded experiments, hulls, cap geometry, limit
// constants and scaling-exponent fits over CSV/JSON files.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "spindle/caps.hpp"
#include "spindle/csv.hpp"
#include "spindle/experiment.hpp"
#include "spindle/hull.hpp"
#include "spindle/log.hpp"
#include "spindle/shape.hpp"
#include "spindle/stats.hpp"
#include "spindle/theory.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Options {
    std::string config_path;
    std::string out_dir;
    std::string model_kind;
    double rho = 1.0;
    double a = 1.0;
    double b = 1.0;
    double r = 0.0;
    std::string n_list;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    std::size_t workers = 0;
    double theta = 0.0;
    std::string t_grid;
    std::size_t samples = 100000;
    std::string input_path;
    std::string y_column = "var_f0";
    std::string x_column = "n";
    std::string se_column;
};

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    if (out.empty()) throw spindle::ConfigError("empty list: '" + s + "'");
    return out;
}

std::vector<std::size_t> parse_count_list(const std::string& s) {
    std::vector<std::size_t> out;
    for (double v : parse_double_list(s)) {
        if (v < 1.0) throw spindle::ConfigError("counts must be >= 1 in '" + s + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

// Adopt config-file values for flags the user did not pass on the command
// line, so the resolved union is what runs and what the manifest echoes.
void merge_config(CLI::App* cmd, Options& opt) {
    if (opt.config_path.empty()) return;
    const json cfg = json::parse(spindle::read_file(opt.config_path));
    const auto absent = [&](const std::string& flag) {
        return cmd->get_option_no_throw(flag) == nullptr || cmd->count(flag) == 0;
    };
    if (cfg.contains("model")) {
        const json& m = cfg["model"];
        if (absent("--model") && m.contains("kind")) opt.model_kind = m["kind"];
        if (absent("--rho") && m.contains("rho")) opt.rho = m["rho"];
        if (absent("--a") && m.contains("a")) opt.a = m["a"];
        if (absent("--b") && m.contains("b")) opt.b = m["b"];
    }
    const auto take = [&](const char* flag, const char* key, auto& slot) {
        using T = std::decay_t<decltype(slot)>;
        if (absent(flag) && cfg.contains(key)) slot = cfg[key].get<T>();
    };
    take("--r", "r", opt.r);
    take("--reps", "reps", opt.reps);
    take("--seed", "seed", opt.seed);
    take("--workers", "workers", opt.workers);
    take("--theta", "theta", opt.theta);
    take("--samples", "samples", opt.samples);
    take("--out", "out", opt.out_dir);
    take("--input", "input", opt.input_path);
    take("--y", "y", opt.y_column);
    take("--x", "x", opt.x_column);
    take("--se", "se", opt.se_column);
    if (absent("--n") && cfg.contains("n")) {
        std::string joined;
        for (const auto& v : cfg["n"]) {
            if (!joined.empty()) joined += ',';
            joined += std::to_string(v.get<std::size_t>());
        }
        opt.n_list = joined;
    }
    if (absent("--t-grid") && cfg.contains("t_grid")) {
        std::string joined;
        for (const auto& v : cfg["t_grid"]) {
            if (!joined.empty()) joined += ',';
            joined += spindle::fmt_double(v.get<double>());
        }
        opt.t_grid = joined;
    }
}

spindle::ConvexDisc make_model(const Options& opt) {
    if (opt.model_kind == "circle") return spindle::ConvexDisc::circle(opt.rho);
    if (opt.model_kind == "ellipse") return spindle::ConvexDisc::ellipse(opt.a, opt.b);
    if (opt.model_kind.empty()) throw spindle::ConfigError("--model is required");
    return spindle::make_registered_model(opt.model_kind);
}

json model_json(const Options& opt) {
    json m;
    m["kind"] = opt.model_kind;
    if (opt.model_kind == "circle") m["rho"] = opt.rho;
    if (opt.model_kind == "ellipse") {
        m["a"] = opt.a;
        m["b"] = opt.b;
    }
    return m;
}

void write_manifest(const std::string& out_dir, const json& manifest) {
    fs::create_directories(out_dir);
    spindle::write_file((fs::path(out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
}

int cmd_simulate(const Options& opt) {
    if (opt.out_dir.empty()) throw spindle::ConfigError("simulate: --out is required");
    const spindle::ConvexDisc model = make_model(opt);
    spindle::ExperimentConfig cfg;
    cfg.r = opt.r;
    if (opt.n_list.empty()) {
        // Default grid: geometric, n = 2^k for k = 10..17.
        for (int k = 10; k <= 17; ++k) cfg.n_grid.push_back(std::size_t{1} << k);
    } else {
        cfg.n_grid = parse_count_list(opt.n_list);
    }
    cfg.reps = opt.reps;
    cfg.seed = opt.seed;
    cfg.workers = opt.workers > 0 ? opt.workers : std::thread::hardware_concurrency();
    cfg.validate(model);

    json manifest;
    manifest["subcommand"] = "simulate";
    manifest["model"] = model_json(opt);
    manifest["r"] = cfg.r;
    manifest["n"] = cfg.n_grid;
    manifest["reps"] = cfg.reps;
    manifest["seed"] = cfg.seed;
    manifest["workers"] = cfg.workers;
    manifest["out"] = opt.out_dir;
    write_manifest(opt.out_dir, manifest);

    const auto start = std::chrono::steady_clock::now();
    const spindle::RunResult run = spindle::run_experiment(model, cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    spindle::log_info("simulate: " + std::to_string(run.records.size()) + " replications in " +
                      std::to_string(secs) + " s");

    const fs::path out(opt.out_dir);
    spindle::write_file((out / "records.csv").string(), spindle::records_csv(run.records));

    json diag;
    diag["incidents"] = run.incidents.size();
    if (cfg.reps >= 2) {
        const auto moments = spindle::estimate_moments(run.records);
        spindle::write_file((out / "moments.csv").string(), spindle::moments_csv(moments));
        json jk = json::array();
        for (const auto& e : moments) {
            json row;
            row["n"] = e.n;
            row["jack_se_var_f0"] = e.jack_se_var_f0;
            row["jack_se_var_missed"] = e.jack_se_var_missed;
            jk.push_back(row);
        }
        diag["jackknife_se_var"] = jk;
    }
    spindle::write_file((out / "diagnostics.json").string(), diag.dump(2) + "\n");
    if (!run.incidents.empty()) {
        std::string log;
        for (const auto& inc : run.incidents)
            log += std::to_string(inc.n) + "," + std::to_string(inc.rep) + "," + inc.what + "\n";
        spindle::write_file((out / "incidents.log").string(), log);
    }
    return 0;
}

int cmd_hull(const Options& opt) {
    if (opt.input_path.empty()) throw spindle::ConfigError("hull: --input is required");
    if (opt.out_dir.empty()) throw spindle::ConfigError("hull: --out is required");
    const spindle::ConvexDisc model = make_model(opt);
    if (!(opt.r > 0.0)) throw spindle::ConfigError("hull: --r must be positive");

    std::vector<spindle::Point> pts;
    {
        std::istringstream in(spindle::read_file(opt.input_path));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            double x = 0.0, y = 0.0;
            if (std::sscanf(line.c_str(), "%lf,%lf", &x, &y) == 2) pts.push_back({x, y});
        }
    }
    if (pts.empty()) throw spindle::ConfigError("hull: no x,y rows in " + opt.input_path);

    json manifest;
    manifest["subcommand"] = "hull";
    manifest["model"] = model_json(opt);
    manifest["r"] = opt.r;
    manifest["input"] = opt.input_path;
    manifest["out"] = opt.out_dir;
    write_manifest(opt.out_dir, manifest);

    const spindle::DiscPolygon poly = spindle::hull_fast(pts, opt.r);
    const spindle::HullSummary sum = spindle::summarize(model, poly);

    std::string vcsv = "x,y\n";
    for (const spindle::Point& v : poly.vertices)
        vcsv += spindle::fmt_double(v.x) + "," + spindle::fmt_double(v.y) + "\n";
    const fs::path out(opt.out_dir);
    spindle::write_file((out / "vertices.csv").string(), vcsv);

    json summary;
    summary["f0"] = sum.f0;
    summary["hull_area"] = sum.hull_area;
    summary["missed_area"] = sum.missed_area;
    summary["edge_count"] = sum.edge_count;
    spindle::write_file((out / "summary.json").string(), summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_cap(const Options& opt) {
    const spindle::ConvexDisc model = make_model(opt);
    const std::vector<double> ts = parse_double_list(opt.t_grid);
    std::string csv = "theta,t,area,arc_length\n";
    for (double t : ts) {
        const spindle::DiscCap cap = spindle::cap_from_normal_height(model, opt.theta, t, opt.r);
        csv += spindle::fmt_double(opt.theta) + "," + spindle::fmt_double(t) + "," +
               spindle::fmt_double(cap.area) + "," + spindle::fmt_double(cap.arc_length) + "\n";
    }
    if (!opt.out_dir.empty()) {
        json manifest;
        manifest["subcommand"] = "cap";
        manifest["model"] = model_json(opt);
        manifest["r"] = opt.r;
        manifest["theta"] = opt.theta;
        json tg = json::array();
        for (double t : ts) tg.push_back(t);
        manifest["t_grid"] = tg;
        manifest["out"] = opt.out_dir;
        write_manifest(opt.out_dir, manifest);
        spindle::write_file((fs::path(opt.out_dir) / "caps.csv").string(), csv);
    }
    std::cout << csv;
    return 0;
}

int cmd_lemma1(const Options& opt) {
    const spindle::ConvexDisc model = make_model(opt);
    const std::vector<double> ts = parse_double_list(opt.t_grid);
    std::string csv = "t,var_ahat,se\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        spindle::Rng rng(opt.seed, spindle::replication_stream(1, i));
        const spindle::VarianceEstimate est =
            spindle::arc_triangle_variance(model, opt.theta, ts[i], opt.samples, rng);
        csv += spindle::fmt_double(ts[i]) + "," + spindle::fmt_double(est.variance) + "," +
               spindle::fmt_double(est.se) + "\n";
    }
    if (!opt.out_dir.empty()) {
        json manifest;
        manifest["subcommand"] = "lemma1";
        manifest["model"] = model_json(opt);
        manifest["r"] = opt.r;
        manifest["theta"] = opt.theta;
        json tg = json::array();
        for (double t : ts) tg.push_back(t);
        manifest["t_grid"] = tg;
        manifest["samples"] = opt.samples;
        manifest["seed"] = opt.seed;
        manifest["out"] = opt.out_dir;
        write_manifest(opt.out_dir, manifest);
        spindle::write_file((fs::path(opt.out_dir) / "lemma1.csv").string(), csv);
    }
    std::cout << csv;
    return 0;
}

int cmd_constants(const Options& opt) {
    const spindle::ConvexDisc model = make_model(opt);
    const spindle::LimitConstants lc = spindle::limit_constants(model, opt.r);
    json out;
    out["c1"] = lc.c1;
    out["vertex_coeff"] = lc.vertex_coeff;
    out["area_coeff"] = lc.area_coeff;
    out["gamma_5_3"] = lc.gamma_5_3;
    if (!opt.out_dir.empty()) {
        json manifest;
        manifest["subcommand"] = "constants";
        manifest["model"] = model_json(opt);
        manifest["r"] = opt.r;
        manifest["out"] = opt.out_dir;
        write_manifest(opt.out_dir, manifest);
        spindle::write_file((fs::path(opt.out_dir) / "constants.json").string(),
                            out.dump(2) + "\n");
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_fit(const Options& opt) {
    if (opt.input_path.empty()) throw spindle::ConfigError("fit: --input is required");
    const spindle::CsvTable table = spindle::parse_csv(spindle::read_file(opt.input_path));
    const std::size_t xi = table.column_index(opt.x_column);
    const std::size_t yi = table.column_index(opt.y_column);
    std::vector<std::pair<double, double>> pairs;
    std::vector<double> weights;
    for (const auto& row : table.rows) pairs.push_back({row[xi], row[yi]});
    if (!opt.se_column.empty()) {
        // Column holds standard errors of y; log-residuals get weighted by
        // the squared relative precision.
        const std::size_t si = table.column_index(opt.se_column);
        for (const auto& row : table.rows) {
            const double rel = row[si] / row[yi];
            weights.push_back(1.0 / (rel * rel));
        }
    }
    const spindle::FitResult fit = spindle::fit_exponent(pairs, weights);
    json out;
    out["slope"] = fit.slope;
    out["intercept"] = fit.intercept;
    out["slope_stderr"] = fit.slope_stderr;
    out["points_used"] = fit.points_used;
    if (!opt.out_dir.empty()) {
        json manifest;
        manifest["subcommand"] = "fit";
        manifest["input"] = opt.input_path;
        manifest["x"] = opt.x_column;
        manifest["y"] = opt.y_column;
        if (!opt.se_column.empty()) manifest["se"] = opt.se_column;
        manifest["out"] = opt.out_dir;
        write_manifest(opt.out_dir, manifest);
        spindle::write_file((fs::path(opt.out_dir) / "fit.json").string(), out.dump(2) + "\n");
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"r-spindle hulls, disc-cap geometry and seeded scaling experiments"};
    app.require_subcommand(1);

    const auto add_common = [&](CLI::App* cmd, bool with_model) {
        cmd->add_option("--config", opt.config_path, "JSON config; flags override its values");
        cmd->add_option("--out", opt.out_dir, "output directory");
        if (with_model) {
            cmd->add_option("--model", opt.model_kind, "circle | ellipse | registered name");
            cmd->add_option("--rho", opt.rho, "circle radius");
            cmd->add_option("--a", opt.a, "ellipse semi-axis a");
            cmd->add_option("--b", opt.b, "ellipse semi-axis b");
            cmd->add_option("--r", opt.r, "spindle radius r");
        }
    };

    CLI::App* sim = app.add_subcommand("simulate", "run a seeded hull experiment grid");
    add_common(sim, true);
    sim->add_option("--n", opt.n_list, "comma-separated sample sizes");
    sim->add_option("--reps", opt.reps, "replications per sample size");
    sim->add_option("--seed", opt.seed, "base seed");
    sim->add_option("--workers", opt.workers, "worker threads (default: hardware)");

    CLI::App* hull = app.add_subcommand("hull", "hull a CSV of x,y points");
    add_common(hull, true);
    hull->add_option("--input", opt.input_path, "points CSV");

    CLI::App* cap = app.add_subcommand("cap", "disc-cap areas and arc lengths over a t-grid");
    add_common(cap, true);
    cap->add_option("--theta", opt.theta, "boundary parameter of the cap vertex");
    cap->add_option("--t-grid", opt.t_grid, "comma-separated heights");

    CLI::App* lem = app.add_subcommand("lemma1", "arc-triangle variance over a t-grid");
    add_common(lem, true);
    lem->add_option("--theta", opt.theta, "boundary parameter of the cap vertex");
    lem->add_option("--t-grid", opt.t_grid, "comma-separated heights");
    lem->add_option("--samples", opt.samples, "Monte Carlo samples per height");
    lem->add_option("--seed", opt.seed, "base seed");

    CLI::App* con = app.add_subcommand("constants", "limit constants for a model and radius");
    add_common(con, true);

    CLI::App* fit = app.add_subcommand("fit", "log-log slope of a CSV column against n");
    add_common(fit, false);
    fit->add_option("--input", opt.input_path, "CSV with the data");
    fit->add_option("--x", opt.x_column, "x column (default n)");
    fit->add_option("--y", opt.y_column, "y column (default var_f0)");
    fit->add_option("--se", opt.se_column, "optional column of standard errors of y");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        CLI::App* cmd = app.get_subcommands().front();
        merge_config(cmd, opt);
        if (cmd == sim) return cmd_simulate(opt);
        if (cmd == hull) return cmd_hull(opt);
        if (cmd == cap) return cmd_cap(opt);
        if (cmd == lem) return cmd_lemma1(opt);
        if (cmd == con) return cmd_constants(opt);
        if (cmd == fit) return cmd_fit(opt);
        return 2;
    } catch (const spindle::Error& e) {
        // Bad configuration or bad input data exits 2; runtime failures 1.
        const bool validation = dynamic_cast<const spindle::ConfigError*>(&e) ||
                                dynamic_cast<const spindle::RadiusNotAdmissible*>(&e) ||
                                dynamic_cast<const spindle::PointsOutsideModel*>(&e) ||
                                dynamic_cast<const spindle::VertexOutsideModel*>(&e) ||
                                dynamic_cast<const spindle::InsufficientPoints*>(&e) ||
                                dynamic_cast<const spindle::InsufficientReplications*>(&e) ||
                                dynamic_cast<const spindle::NonpositiveValue*>(&e) ||
                                dynamic_cast<const spindle::OutOfRange*>(&e);
        std::cerr << (validation ? "config error: " : "error: ") << e.what() << "\n";
        return validation ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
