#ifndef SPINDLE_CSV_HPP
#define SPINDLE_CSV_HPP

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "spindle/errors.hpp"
#include "spindle/experiment.hpp"

namespace spindle {

// Full round-trip decimal formatting, so equal doubles always serialize to
// identical bytes.
inline std::string fmt_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string records_csv(std::span<const SampleRecord> records) {
    std::string out = "n,rep,f0,hull_area,missed_area\n";
    for (const SampleRecord& r : records) {
        out += std::to_string(r.n);
        out += ',';
        out += std::to_string(r.rep);
        out += ',';
        out += std::to_string(r.f0);
        out += ',';
        out += fmt_double(r.hull_area);
        out += ',';
        out += fmt_double(r.missed_area);
        out += '\n';
    }
    return out;
}

inline std::string moments_csv(std::span<const MomentEstimate> moments) {
    std::string out =
        "n,M,mean_f0,se_mean_f0,var_f0,se_var_f0,"
        "mean_missed,se_mean_missed,var_missed,se_var_missed\n";
    for (const MomentEstimate& e : moments) {
        out += std::to_string(e.n);
        out += ',';
        out += std::to_string(e.m);
        for (double v : {e.mean_f0, e.se_mean_f0, e.var_f0, e.se_var_f0, e.mean_missed,
                         e.se_mean_missed, e.var_missed, e.se_var_missed}) {
            out += ',';
            out += fmt_double(v);
        }
        out += '\n';
    }
    return out;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    f << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Minimal CSV reader: header line with named columns, numeric body.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column_index(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        throw ConfigError("csv: no column named '" + name + "'");
    }
};

inline CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("csv: empty input");
    std::istringstream head(line);
    std::string cell;
    while (std::getline(head, cell, ',')) table.columns.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::vector<double> vals;
        while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.size() != table.columns.size())
            throw ConfigError("csv: ragged row");
        table.rows.push_back(std::move(vals));
    }
    return table;
}

}  // namespace spindle

#endif  // SPINDLE_CSV_HPP
