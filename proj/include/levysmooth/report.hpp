#pragma once

#include "levysmooth/common.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace levysmooth {

// One verified inequality: LHS, RHS, tolerance slack, pass/fail plus the
// sampling metadata needed to reproduce the row.
struct EstimateReport {
    std::string check;
    std::string model_id;
    std::string f_id;
    double x = 0.0;
    double t = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    bool pass = false;
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// CSV schema v1: a comment header line, then fixed columns. All doubles are
// printed with %.17g so identical runs produce identical bytes.
inline void write_report_csv(const std::vector<EstimateReport>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << "# levysmooth-report v1\n";
    out << "check,model,f,x,t,lhs,rhs,se,n,seed,pass\n";
    for (const auto& r : rows) {
        out << r.check << ',' << r.model_id << ',' << r.f_id << ',' << format_double(r.x) << ','
            << format_double(r.t) << ',' << format_double(r.lhs) << ',' << format_double(r.rhs)
            << ',' << format_double(r.std_error) << ',' << r.n_samples << ',' << r.seed << ','
            << (r.pass ? "1" : "0") << "\n";
    }
}

inline std::vector<EstimateReport> read_report_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::string line;
    std::getline(in, line);
    if (line.rfind("# levysmooth-report", 0) != 0)
        throw ConfigError("not a levysmooth report: " + path);
    std::getline(in, line);  // column header
    std::vector<EstimateReport> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        EstimateReport r;
        auto next = [&]() {
            if (!std::getline(ss, tok, ',')) throw ConfigError("short report row: " + line);
            return tok;
        };
        r.check = next();
        r.model_id = next();
        r.f_id = next();
        r.x = std::stod(next());
        r.t = std::stod(next());
        r.lhs = std::stod(next());
        r.rhs = std::stod(next());
        r.std_error = std::stod(next());
        r.n_samples = std::stoull(next());
        r.seed = std::stoull(next());
        r.pass = next() == "1";
        rows.push_back(std::move(r));
    }
    return rows;
}

inline bool all_pass(const std::vector<EstimateReport>& rows) {
    for (const auto& r : rows)
        if (!r.pass) return false;
    return true;
}

}  // namespace levysmooth
