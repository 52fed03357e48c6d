// SPDX-License-Identifier: Apache-2.0
#include "adaf/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

namespace adaf {
namespace {

const char* kHeader =
    "scenario_id,estimator,snr_db,user_index,mse_numerical,mse_eq24,mse_eq28,mse_eq38,mse_eq39,"
    "ser,trials,failures,seed";

std::string number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_number(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw IoError("malformed number in CSV: '" + s + "'");
    return v;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "': " + std::strerror(errno));
}

}  // namespace

std::string format_csv(const SweepResult& result) {
    std::string out = kHeader;
    out += '\n';
    for (const auto& p : result.points) {
        out += result.scenario_id + ',' + result.estimator + ',' + number(p.snr_db) + ',' +
               std::to_string(p.user) + ',' + number(p.mse_numerical) + ',' + number(p.mse_eq24) + ',' +
               number(p.mse_eq28) + ',' + number(p.mse_eq38) + ',' + number(p.mse_eq39) + ',' +
               number(p.ser) + ',' + std::to_string(p.trials) + ',' + std::to_string(p.failures) + ',' +
               std::to_string(result.seed) + '\n';
    }
    return out;
}

void emit_csv(const SweepResult& result, const std::string& path) { write_file(path, format_csv(result)); }

SweepResult parse_csv(const std::string& text) {
    std::stringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kHeader) throw IoError("CSV header does not match");
    SweepResult result;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) f.push_back(item);
        if (f.size() != 13) throw IoError("CSV row has " + std::to_string(f.size()) + " fields");
        try {
            if (first) {
                result.scenario_id = f[0];
                result.estimator = f[1];
                result.seed = std::stoull(f[12]);
                first = false;
            }
            PointResult p;
            p.snr_db = parse_number(f[2]);
            p.user = std::stoi(f[3]);
            p.mse_numerical = parse_number(f[4]);
            p.mse_eq24 = parse_number(f[5]);
            p.mse_eq28 = parse_number(f[6]);
            p.mse_eq38 = parse_number(f[7]);
            p.mse_eq39 = parse_number(f[8]);
            p.ser = parse_number(f[9]);
            p.trials = std::stol(f[10]);
            p.failures = std::stol(f[11]);
            result.points.push_back(p);
        } catch (const std::logic_error& e) {
            throw IoError(std::string("malformed CSV row: ") + e.what());
        }
    }
    return result;
}

void emit_gnuplot(const SweepResult& result, const std::string& prefix) {
    std::map<int, std::vector<const PointResult*>> by_user;
    for (const auto& p : result.points) by_user[p.user].push_back(&p);
    struct Curve {
        const char* name;
        double PointResult::*field;
    };
    const Curve curves[] = {{"numerical", &PointResult::mse_numerical}, {"eq24", &PointResult::mse_eq24},
                            {"eq28", &PointResult::mse_eq28},           {"eq38", &PointResult::mse_eq38},
                            {"eq39", &PointResult::mse_eq39},           {"ser", &PointResult::ser}};
    for (const auto& [user, pts] : by_user) {
        for (const auto& c : curves) {
            bool any = false;
            std::string body;
            for (const PointResult* p : pts) {
                const double v = p->*(c.field);
                if (!std::isnan(v)) any = true;
                body += number(p->snr_db) + ' ' + number(v) + '\n';
            }
            if (any) write_file(prefix + "_u" + std::to_string(user) + '_' + c.name + ".dat", body);
        }
    }
}

}  // namespace adaf
