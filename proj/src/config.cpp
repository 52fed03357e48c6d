// SPDX-License-Identifier: Apache-2.0
#include "adaf/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace adaf {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError("'" + key + "': expected a number, got '" + text + "'");
    return value;
}

long long to_integer(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError("'" + key + "': expected an integer, got '" + text + "'");
    return value;
}

int to_int(const std::string& key, const std::string& text) {
    const long long v = to_integer(key, text);
    if (v < -2147483647LL || v > 2147483647LL) throw ConfigError("'" + key + "': value out of range");
    return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
    std::string t = trim(text);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
    if (t == "0" || t == "false" || t == "no" || t == "off") return false;
    throw ConfigError("'" + key + "': expected a boolean, got '" + text + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty()) continue;
        out.push_back(to_double(key, item));
    }
    return out;
}

Constellation to_constellation(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "qpsk") return Constellation::qpsk;
    if (t == "qam16" || t == "16qam") return Constellation::qam16;
    throw ConfigError("'" + key + "': unknown constellation '" + text + "'");
}

std::vector<UserSpec> users_from(const std::vector<double>& aoas) {
    std::vector<UserSpec> users;
    for (double a : aoas) users.push_back(UserSpec{a, std::nullopt});
    return users;
}

}  // namespace

std::string estimator_name(CostKind kind) {
    return kind == CostKind::adaptive ? "adaf" : "mf";
}

CostKind parse_estimator(const std::string& name) {
    const std::string t = trim(name);
    if (t == "adaf") return CostKind::adaptive;
    if (t == "mf" || t == "mf_baseline") return CostKind::matched_filter;
    throw ConfigError("unknown estimator '" + name + "' (expected adaf or mf)");
}

std::vector<double> parse_snr_range(const std::string& text) {
    const std::string t = trim(text);
    if (t.find(':') == std::string::npos) {
        auto list = to_list("snr", t);
        if (list.empty()) throw ConfigError("SNR list is empty");
        return list;
    }
    std::vector<std::string> parts;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw ConfigError("SNR range must look like start:stop:step");
    const double a = to_double("snr", parts[0]);
    const double b = to_double("snr", parts[1]);
    const double step = to_double("snr", parts[2]);
    if (!(step > 0.0) || b < a) throw ConfigError("SNR range needs step > 0 and stop >= start");
    std::vector<double> out;
    const int count = static_cast<int>(std::floor((b - a) / step + 1e-9));
    for (int i = 0; i <= count; ++i) out.push_back(a + i * step);
    return out;
}

void validate(const ExperimentConfig& cfg) {
    auto check = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError(msg);
    };
    check(cfg.geom.antennas >= 2 && cfg.geom.antennas % 2 == 0, "antennas must be even and >= 2");
    check(cfg.geom.spacing > 0.0 && cfg.geom.spacing <= 0.5, "spacing must lie in (0, 0.5]");
    check(!cfg.users.empty(), "at least one user is required");
    check(cfg.angular_spread_deg > 0.0, "angular spread must be positive");
    for (const auto& u : cfg.users) {
        check(u.aoa_deg - cfg.angular_spread_deg > 0.0 && u.aoa_deg + cfg.angular_spread_deg < 180.0,
              "user angular region must lie inside (0, 180) degrees");
        if (u.side_aoa_deg)
            check(*u.side_aoa_deg - cfg.side_spread_deg > 0.0 &&
                      *u.side_aoa_deg + cfg.side_spread_deg < 180.0,
                  "side cluster region must lie inside (0, 180) degrees");
    }
    check(cfg.subpaths >= 1, "subpaths must be >= 1");
    check(cfg.side_spread_deg > 0.0, "side cluster spread must be positive");
    check(!cfg.snr_db.empty(), "SNR grid is empty");
    check(cfg.cfo_range >= 0.0 && cfg.cfo_range < 0.5, "CFO range must lie in [0, 0.5)");
    check(cfg.trials >= 1, "trials must be >= 1");
    check(cfg.aoa_bias_deg >= 0.0, "AoA bias bound must be non-negative");
    check(cfg.grid_step > 0.0 && cfg.grid_step < 0.5, "grid step must lie in (0, 0.5)");
    check(cfg.newton_iterations >= 0, "Newton iteration cap must be non-negative");
    check(cfg.workers >= 0, "worker count must be non-negative");
    try {
        validate_frame(cfg.frame);
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
}

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig cfg;
    cfg.scenario_id = name;
    if (name == "fig3") {
        cfg.users = users_from({38, 50, 70, 75, 95, 97, 117, 122, 142});
        cfg.geom.antennas = 64;
        cfg.frame.blocks = 2;
        cfg.analysis.interference = InterferenceModel::realized;
    } else if (name == "fig4" || name == "fig5") {
        cfg.users = users_from({30, 45, 60, 75, 90, 105, 120, 135, 150});
        cfg.geom.antennas = 128;
        cfg.frame.blocks = 2;
        if (name == "fig5") cfg.aoa_bias_deg = 10.0;
    } else if (name == "fig7") {
        const double main[] = {36, 54, 72, 90, 108, 126, 144};
        const double side[] = {54, 72, 90, 108, 126, 144, 36};
        cfg.users.clear();
        for (int k = 0; k < 7; ++k) cfg.users.push_back(UserSpec{main[k], side[k]});
        cfg.geom.antennas = 128;
        cfg.side_spread_deg = 2.0;
        cfg.smpr_db = 0.0;
        cfg.smpr_sweep_db = {0.0, -3.0, -5.0, -10.0, -15.0};
        cfg.frame.blocks = 2;
    } else {
        throw ConfigError("unknown preset '" + name + "' (expected fig3, fig4, fig5 or fig7)");
    }
    return cfg;
}

void apply_config_text(ExperimentConfig& cfg, const std::string& text) {
    std::stringstream in(text);
    std::string line;
    int line_no = 0;
    std::vector<double> side_aoas;
    bool side_given = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "scenario_id") cfg.scenario_id = value;
        else if (key == "preset") cfg = preset(value);
        else if (key == "antennas") cfg.geom.antennas = to_int(key, value);
        else if (key == "spacing") cfg.geom.spacing = to_double(key, value);
        else if (key == "aoas_deg") cfg.users = users_from(to_list(key, value));
        else if (key == "side_aoas_deg") {
            side_aoas = to_list(key, value);
            side_given = true;
        }
        else if (key == "angular_spread_deg") cfg.angular_spread_deg = to_double(key, value);
        else if (key == "subpaths") cfg.subpaths = to_int(key, value);
        else if (key == "side_spread_deg") cfg.side_spread_deg = to_double(key, value);
        else if (key == "smpr_db") cfg.smpr_db = to_double(key, value);
        else if (key == "smpr_sweep_db") cfg.smpr_sweep_db = to_list(key, value);
        else if (key == "subcarriers") cfg.frame.subcarriers = to_int(key, value);
        else if (key == "cp") cfg.frame.cp = to_int(key, value);
        else if (key == "blocks") cfg.frame.blocks = to_int(key, value);
        else if (key == "taps") cfg.frame.taps = to_int(key, value);
        else if (key == "pilot") cfg.frame.pilot = to_constellation(key, value);
        else if (key == "data") cfg.frame.data = to_constellation(key, value);
        else if (key == "snr_db") cfg.snr_db = parse_snr_range(value);
        else if (key == "cfo_range") cfg.cfo_range = to_double(key, value);
        else if (key == "trials") cfg.trials = to_int(key, value);
        else if (key == "seed") {
            const long long s = to_integer(key, value);
            if (s < 0) throw ConfigError("'seed' must be non-negative");
            cfg.seed = static_cast<std::uint64_t>(s);
        }
        else if (key == "aoa_bias_deg") cfg.aoa_bias_deg = to_double(key, value);
        else if (key == "estimator") cfg.estimator = parse_estimator(value);
        else if (key == "analysis") {
            const InterferenceModel model = cfg.analysis.interference;
            cfg.analysis = AnalysisSelection{false, false, false, false, model};
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                if (item == "eq24") cfg.analysis.eq24 = true;
                else if (item == "eq28") cfg.analysis.eq28 = true;
                else if (item == "eq38") cfg.analysis.eq38 = true;
                else if (item == "eq39") cfg.analysis.eq39 = true;
                else if (!item.empty()) throw ConfigError("unknown analysis mode '" + item + "'");
            }
        }
        else if (key == "interference_model") {
            if (value == "statistical") cfg.analysis.interference = InterferenceModel::statistical;
            else if (value == "realized") cfg.analysis.interference = InterferenceModel::realized;
            else throw ConfigError("'interference_model': expected statistical or realized");
        }
        else if (key == "grid_step") cfg.grid_step = to_double(key, value);
        else if (key == "newton_iterations") cfg.newton_iterations = to_int(key, value);
        else if (key == "workers") cfg.workers = to_int(key, value);
        else if (key == "perfect_cfo") cfg.perfect_cfo = to_bool(key, value);
        else throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (side_given) {
        if (side_aoas.size() != cfg.users.size())
            throw ConfigError("side_aoas_deg must list one angle per user");
        for (std::size_t k = 0; k < side_aoas.size(); ++k) cfg.users[k].side_aoa_deg = side_aoas[k];
    }
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("failed reading config file '" + path + "'");
    apply_config_text(cfg, buffer.str());
}

}  // namespace adaf
