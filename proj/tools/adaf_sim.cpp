// SPDX-License-Identifier: Apache-2.0
// Command-line driver for the CFO estimation simulator.
#include "adaf/checks.hpp"
#include "adaf/config.hpp"
#include "adaf/csv.hpp"
#include "adaf/sweep.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kNumerical = 2, kIo = 3 };

struct Options {
    std::string preset;
    std::string config_path;
    std::string snr;
    std::optional<int> trials;
    std::optional<long long> seed;
    std::optional<int> antennas;
    std::string estimator;
    std::string out;
    std::string gnuplot;
    std::optional<int> workers;
    std::string mode = "aoa-bias";
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--preset", o.preset, "Scenario preset")->check(CLI::IsMember({"fig3", "fig4", "fig5", "fig7"}));
    cmd->add_option("--config", o.config_path, "Key = value configuration file");
    cmd->add_option("--snr", o.snr, "SNR grid in dB as start:stop:step or a comma list");
    cmd->add_option("--trials", o.trials, "Monte Carlo trials per SNR point");
    cmd->add_option("--seed", o.seed, "Base random seed");
    cmd->add_option("--antennas", o.antennas, "Number of base-station antennas");
    cmd->add_option("--estimator", o.estimator, "adaf or mf")->check(CLI::IsMember({"adaf", "mf"}));
    cmd->add_option("--out", o.out, "CSV output path (stdout when omitted)");
    cmd->add_option("--gnuplot", o.gnuplot, "Also write two-column curve files with this prefix");
    cmd->add_option("--workers", o.workers, "Worker threads (0 = all cores)");
}

adaf::ExperimentConfig build_config(const Options& o) {
    adaf::ExperimentConfig cfg = o.preset.empty() ? adaf::ExperimentConfig{} : adaf::preset(o.preset);
    if (!o.config_path.empty()) adaf::apply_config_file(cfg, o.config_path);
    if (!o.snr.empty()) cfg.snr_db = adaf::parse_snr_range(o.snr);
    if (o.trials) cfg.trials = *o.trials;
    if (o.seed) {
        if (*o.seed < 0) throw adaf::ConfigError("seed must be non-negative");
        cfg.seed = static_cast<std::uint64_t>(*o.seed);
    }
    if (o.antennas) cfg.geom.antennas = *o.antennas;
    if (!o.estimator.empty()) cfg.estimator = adaf::parse_estimator(o.estimator);
    if (o.workers) cfg.workers = *o.workers;
    adaf::validate(cfg);
    return cfg;
}

void write_output(const std::string& csv, const Options& o) {
    if (o.out.empty()) {
        std::cout << csv;
        std::cout.flush();
        if (!std::cout) throw adaf::IoError("failed writing to standard output");
        return;
    }
    std::ofstream file(o.out, std::ios::binary | std::ios::trunc);
    if (!file) throw adaf::IoError("cannot open '" + o.out + "' for writing");
    file << csv;
    file.flush();
    if (!file) throw adaf::IoError("failed writing '" + o.out + "'");
}

void report(const adaf::SweepResult& r) {
    long failures = 0;
    for (const auto& p : r.points) failures += p.failures;
    std::fprintf(stderr, "%s [%s]: %zu rows, %ld failures, %.1f s\n", r.scenario_id.c_str(),
                 r.estimator.c_str(), r.points.size(), failures, r.wall_seconds);
}

std::string without_header(const std::string& csv) {
    const auto nl = csv.find('\n');
    return nl == std::string::npos ? std::string{} : csv.substr(nl + 1);
}

int run(int argc, char** argv) {
    CLI::App app{"Frequency-offset estimation simulator for multiuser uplink massive MIMO"};
    app.require_subcommand(1);
    Options o;

    auto* mse = app.add_subcommand("mse-sweep", "Monte Carlo CFO MSE versus SNR");
    auto* ser = app.add_subcommand("ser-sweep", "Full receive chain, CFO MSE and symbol error rate");
    auto* rob = app.add_subcommand("robustness", "AoA bias or side-cluster robustness sweep");
    auto* ana = app.add_subcommand("analyze", "Closed-form MSE curves only");
    auto* chk = app.add_subcommand("check", "Run the built-in property checks");
    for (auto* cmd : {mse, ser, rob, ana}) add_common(cmd, o);
    rob->add_option("--mode", o.mode, "aoa-bias or side-cluster")
        ->check(CLI::IsMember({"aoa-bias", "side-cluster"}));
    chk->add_option("--seed", o.seed, "Base random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    if (chk->parsed()) {
        bool ok = true;
        for (const auto& c : adaf::run_all_checks(o.seed ? static_cast<std::uint64_t>(*o.seed) : 1)) {
            std::printf("%-20s %s  %s\n", c.name.c_str(), c.passed ? "PASS" : "FAIL", c.detail.c_str());
            ok = ok && c.passed;
        }
        return ok ? kOk : kNumerical;
    }

    const adaf::ExperimentConfig cfg = build_config(o);
    std::vector<adaf::SweepResult> results;
    if (mse->parsed()) {
        results.push_back(adaf::run_mse_sweep(cfg));
    } else if (ser->parsed()) {
        results.push_back(adaf::run_ser_sweep(cfg));
    } else if (ana->parsed()) {
        results.push_back(adaf::run_analysis(cfg));
    } else if (o.mode == "aoa-bias") {
        results.push_back(adaf::run_robustness_sweep(cfg, adaf::RobustnessMode::aoa_bias));
    } else {
        std::vector<double> levels = cfg.smpr_sweep_db;
        if (levels.empty()) levels.push_back(cfg.smpr_db);
        for (double level : levels) {
            adaf::ExperimentConfig c = cfg;
            c.smpr_db = level;
            std::ostringstream id;
            id << cfg.scenario_id << "_smpr" << level;
            c.scenario_id = id.str();
            results.push_back(adaf::run_robustness_sweep(c, adaf::RobustnessMode::side_cluster));
        }
    }

    std::string csv;
    for (std::size_t i = 0; i < results.size(); ++i) {
        report(results[i]);
        const std::string part = adaf::format_csv(results[i]);
        csv += i == 0 ? part : without_header(part);
        if (!o.gnuplot.empty()) {
            const std::string prefix = results.size() == 1 ? o.gnuplot : o.gnuplot + "_" + results[i].scenario_id;
            adaf::emit_gnuplot(results[i], prefix);
        }
    }
    write_output(csv, o);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const adaf::InvalidInput& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kConfig;
    } catch (const adaf::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kNumerical;
    } catch (const adaf::IoError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return kIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kNumerical;
    }
}
