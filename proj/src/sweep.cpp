// SPDX-License-Identifier: Apache-2.0
#include "adaf/sweep.hpp"

#include "adaf/acm.hpp"
#include "adaf/analysis.hpp"
#include "adaf/detect.hpp"
#include "adaf/estimator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <thread>

namespace adaf {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Purposes for per-trial generators; each draws from its own stream so that
// switching one feature on or off leaves every other draw unchanged.
enum Purpose : std::uint32_t {
    kCfo = 1,
    kMainChannel = 2,
    kPilot = 3,
    kNoise = 4,
    kAoaBias = 5,
    kSideChannel = 6,
    kData = 7,
};

struct Plan {
    bool detect = false;
    bool bias = false;
    bool side = false;
};

struct Cell {
    double err2 = 0.0;
    bool counted = false;
    bool failed = false;
    bool fallback = false;
    long symbol_errors = 0;
    long symbols = 0;
    double eq24 = std::numeric_limits<double>::quiet_NaN();
};

struct TrialRecord {
    std::vector<Cell> cells;  // snr-major, then user
    std::vector<double> dk;   // per user
};

double smpr_linear(const ExperimentConfig& cfg) { return std::pow(10.0, cfg.smpr_db / 10.0); }

std::vector<CVector> draw_user_pilots(const ExperimentConfig& cfg, std::uint64_t trial) {
    Rng rng = trial_stream(cfg.seed, trial, kPilot);
    std::vector<CVector> out;
    for (std::size_t k = 0; k < cfg.users.size(); ++k)
        out.push_back(draw_symbols(cfg.frame.pilot, cfg.frame.subcarriers, rng));
    return out;
}

struct AnalyticalInputs {
    std::vector<CMatrix> own;           // per user R_k
    std::vector<CMatrix> interference;  // per user, sum over the others
    std::vector<AcmMatrix> acms;        // beams at the true AoA
    std::vector<CMatrix> own_beam;      // per user U^T R_k conj(U)
};

AnalyticalInputs analytical_inputs(const ExperimentConfig& cfg, const Plan& plan) {
    const double spread = deg2rad(cfg.angular_spread_deg);
    const auto users = cfg.users.size();
    const int m = cfg.geom.antennas;
    AnalyticalInputs in;
    std::vector<CMatrix> total(users);
    for (const auto& u : cfg.users) {
        in.own.push_back(angular_correlation(cfg.geom, deg2rad(u.aoa_deg), spread));
        in.acms.push_back(acm_for_user(cfg.geom, deg2rad(u.aoa_deg), spread));
        const CMatrix& uu = in.acms.back().u;
        in.own_beam.push_back(uu.transpose() * in.own.back() * uu.conjugate());
    }
    for (std::size_t k = 0; k < users; ++k) {
        total[k] = in.own[k];
        if (plan.side && cfg.users[k].side_aoa_deg)
            total[k] += smpr_linear(cfg) * angular_correlation(cfg.geom, deg2rad(*cfg.users[k].side_aoa_deg),
                                                               deg2rad(cfg.side_spread_deg));
    }
    for (std::size_t k = 0; k < users; ++k) {
        CMatrix sum = CMatrix::Zero(m, m);
        for (std::size_t j = 0; j < users; ++j)
            if (j != k) sum += total[j];
        in.interference.push_back(std::move(sum));
    }
    return in;
}

// `realized` is set when the general closed form is evaluated on each
// trial's own channels.
TrialRecord run_trial(const ExperimentConfig& cfg, const Plan& plan, std::uint64_t trial,
                      const AnalyticalInputs* realized) {
    const auto users = static_cast<int>(cfg.users.size());
    const int n = cfg.frame.subcarriers;
    const int l = cfg.frame.taps;
    const double spread = deg2rad(cfg.angular_spread_deg);
    const ArrayGeometry& geom = cfg.geom;

    Rng cfo_rng = trial_stream(cfg.seed, trial, kCfo);
    std::uniform_real_distribution<double> cfo_dist(-cfg.cfo_range, cfg.cfo_range);
    std::vector<double> cfos(users);
    for (auto& phi : cfos) phi = cfo_dist(cfo_rng);

    Rng main_rng = trial_stream(cfg.seed, trial, kMainChannel);
    Rng side_rng = trial_stream(cfg.seed, trial, kSideChannel);
    const RVector pdp = uniform_pdp(l);
    std::vector<ChannelRealization> channels;
    for (const auto& u : cfg.users) {
        ChannelRealization main =
            draw_channel(geom, ClusterSpec{deg2rad(u.aoa_deg), spread, cfg.subpaths}, pdp, main_rng);
        std::optional<ChannelRealization> side;
        if (plan.side && u.side_aoa_deg)
            side = draw_channel(geom,
                                ClusterSpec{deg2rad(*u.side_aoa_deg), deg2rad(cfg.side_spread_deg),
                                            cfg.subpaths},
                                uniform_pdp(l, smpr_linear(cfg)), side_rng);
        channels.push_back(composite_channel(main, side));
    }

    UplinkFrame frame;
    frame.config = cfg.frame;
    frame.config.blocks = plan.detect ? cfg.frame.blocks : 1;
    const std::vector<CVector> pilots = draw_user_pilots(cfg, trial);
    Rng data_rng = trial_stream(cfg.seed, trial, kData);
    for (int k = 0; k < users; ++k) {
        UserFrame uf;
        uf.cfo = cfos[k];
        uf.symbols.push_back(pilots[k]);
        uf.blocks.push_back(build_pilot_matrix(pilots[k], l));
        for (int i = 1; i < frame.config.blocks; ++i) {
            uf.symbols.push_back(draw_symbols(cfg.frame.data, n, data_rng));
            uf.blocks.push_back(build_pilot_matrix(uf.symbols.back(), l));
        }
        frame.users.push_back(std::move(uf));
    }
    const std::vector<CMatrix> clean = noiseless_received(frame, channels);

    std::vector<CMatrix> unit_noise(clean.size(), CMatrix::Zero(n, geom.antennas));
    Rng noise_rng = trial_stream(cfg.seed, trial, kNoise);
    add_noise(unit_noise, 1.0, noise_rng);

    Rng bias_rng = trial_stream(cfg.seed, trial, kAoaBias);
    std::uniform_real_distribution<double> bias_dist(-cfg.aoa_bias_deg, cfg.aoa_bias_deg);
    std::vector<AcmMatrix> acms;
    for (const auto& u : cfg.users) {
        const double bias = plan.bias && cfg.aoa_bias_deg > 0.0 ? bias_dist(bias_rng) : 0.0;
        acms.push_back(acm_for_user(geom, deg2rad(u.aoa_deg + bias), spread));
    }

    TrialRecord rec;
    rec.cells.resize(cfg.snr_db.size() * users);
    for (int k = 0; k < users; ++k) rec.dk.push_back(pilot_dk(frame.users[k].blocks[0]));

    // interference seen through each user's true-AoA beams, from the drawn channels
    std::vector<CMatrix> interference_beam;
    if (realized) {
        for (int k = 0; k < users; ++k) {
            const CMatrix& uc = realized->acms[k].u;
            const auto q = uc.cols();
            CMatrix sum = CMatrix::Zero(q, q);
            for (int j = 0; j < users; ++j) {
                if (j == k) continue;
                const CMatrix hu = channels[j].h * uc.conjugate();
                sum.noalias() += hu.adjoint() * hu;
            }
            interference_beam.push_back(std::move(sum));
        }
    }

    const EstimateOptions opts{cfg.grid_step, cfg.newton_iterations, 1e-7};
    std::vector<CMatrix> received(clean.size());
    for (std::size_t s = 0; s < cfg.snr_db.size(); ++s) {
        const double sigma = std::sqrt(std::pow(10.0, -cfg.snr_db[s] / 10.0));
        for (std::size_t i = 0; i < clean.size(); ++i) received[i] = clean[i] + sigma * unit_noise[i];

        for (int k = 0; k < users; ++k) {
            Cell& cell = rec.cells[s * users + k];
            const UserFrame& uf = frame.users[k];
            if (realized) {
                try {
                    cell.eq24 = analytical_mse(beam_domain_ingredients(
                        interference_beam[k], realized->own_beam[k], sigma * sigma, n, l, rec.dk[k]));
                } catch (const Error&) {
                }
            }
            std::optional<AdafSolution> sol;
            try {
                if (cfg.perfect_cfo) {
                    const AdafProblem problem(received[0], uf.blocks[0], acms[k]);
                    sol = branch_solution(problem, uf.cfo, cfg.estimator);
                } else {
                    sol = estimate(received[0], uf.blocks[0], acms[k], opts, cfg.estimator);
                }
            } catch (const NumericalError&) {
                cell.failed = true;
            }

            double phi_hat = kNaN;
            if (sol) {
                phi_hat = sol->phi_hat;
                cell.fallback = sol->fell_back;
            } else {
                try {
                    const AdafProblem problem(received[0], uf.blocks[0], acms[k]);
                    phi_hat = coarse_cfo_search(problem, cfg.grid_step, cfg.estimator);
                } catch (const NumericalError&) {
                }
            }
            if (std::isfinite(phi_hat)) {
                cell.err2 = (phi_hat - uf.cfo) * (phi_hat - uf.cfo);
                cell.counted = true;
            }

            if (plan.detect) {
                const long total = static_cast<long>(n) * (frame.config.blocks - 1);
                cell.symbols = total;
                if (!sol) {
                    cell.symbol_errors = total;
                    continue;
                }
                try {
                    BranchObservations obs =
                        beamform_compensate(received, sol->omega, sol->phi_hat, cfg.frame.cp);
                    estimate_branch_channels(obs, uf.blocks[0]);
                    const std::vector<CVector> truth(uf.symbols.begin() + 1, uf.symbols.end());
                    const DetectionReport report = mrc_detect(obs, cfg.frame.data, truth);
                    cell.symbol_errors = report.errors;
                } catch (const NumericalError&) {
                    cell.symbol_errors = total;
                    cell.failed = true;
                }
            }
        }
    }
    return rec;
}

std::vector<TrialRecord> run_trials(const ExperimentConfig& cfg, const Plan& plan,
                                    const AnalyticalInputs* realized) {
    std::vector<TrialRecord> records(cfg.trials);
    int workers = cfg.workers > 0 ? cfg.workers : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, cfg.trials);

    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= cfg.trials) return;
            try {
                records[t] = run_trial(cfg, plan, static_cast<std::uint64_t>(t), realized);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(cfg.trials);
                return;
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
    return records;
}

template <typename F>
double or_nan(bool enabled, F&& f) {
    if (!enabled) return kNaN;
    try {
        const double v = f();
        return std::isfinite(v) ? v : kNaN;
    } catch (const Error&) {
        return kNaN;
    }
}

bool any_analysis(const AnalysisSelection& sel) { return sel.eq24 || sel.eq28 || sel.eq38 || sel.eq39; }

// `realized_general` (one entry per point) replaces the statistical evaluation
// when non-empty.
void attach_analysis(const ExperimentConfig& cfg, const AnalyticalInputs* inputs,
                     const std::vector<double>& mean_dk, const std::vector<double>& realized_general,
                     std::vector<PointResult>& points) {
    const AnalysisSelection& sel = cfg.analysis;
    if (!inputs) {
        for (auto& p : points) p.mse_eq24 = p.mse_eq28 = p.mse_eq38 = p.mse_eq39 = kNaN;
        return;
    }
    const AnalyticalInputs& in = *inputs;
    const int n = cfg.frame.subcarriers;
    const int l = cfg.frame.taps;
    const int m = cfg.geom.antennas;
    const double spread = deg2rad(cfg.angular_spread_deg);
    for (std::size_t idx = 0; idx < points.size(); ++idx) {
        PointResult& p = points[idx];
        const double s2 = std::pow(10.0, -p.snr_db / 10.0);
        const int k = p.user;
        const int q = in.acms[k].branches();
        const double theta = deg2rad(cfg.users[k].aoa_deg);
        const double dk = mean_dk[k];
        p.mse_eq24 = or_nan(sel.eq24, [&] {
            if (!realized_general.empty()) return realized_general[idx];
            return analytical_mse(mse_ingredients(in.acms[k], in.interference[k], in.own[k], s2, n, l, dk));
        });
        p.mse_eq28 = or_nan(sel.eq28, [&] { return mse_no_overlap(n, l, q, s2, theta, spread, dk); });
        p.mse_eq38 = or_nan(sel.eq38, [&] { return mse_overlap_asymptotic(n, l, q, s2, theta, spread, dk); });
        p.mse_eq39 = or_nan(sel.eq39, [&] {
            return mse_large_limit(m, n, s2, spread, alpha_no_overlap(n, l, q));
        });
    }
}

std::vector<std::size_t> snr_order(const ExperimentConfig& cfg) {
    std::vector<std::size_t> order(cfg.snr_db.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cfg.snr_db[a] < cfg.snr_db[b]; });
    return order;
}

SweepResult run_sweep(const ExperimentConfig& cfg, const Plan& plan) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    std::optional<AnalyticalInputs> inputs;
    if (any_analysis(cfg.analysis)) inputs = analytical_inputs(cfg, plan);
    const bool realized = inputs && cfg.analysis.eq24 &&
                          cfg.analysis.interference == InterferenceModel::realized;
    const std::vector<TrialRecord> records = run_trials(cfg, plan, realized ? &*inputs : nullptr);
    const auto users = static_cast<int>(cfg.users.size());

    std::vector<double> mean_dk(users, 0.0);
    for (const auto& r : records)
        for (int k = 0; k < users; ++k) mean_dk[k] += r.dk[k];
    for (auto& d : mean_dk) d /= static_cast<double>(records.size());

    SweepResult result;
    result.scenario_id = cfg.scenario_id;
    result.estimator = estimator_name(cfg.estimator);
    result.seed = cfg.seed;
    std::vector<double> realized_general;
    for (std::size_t s : snr_order(cfg)) {
        for (int k = 0; k < users; ++k) {
            PointResult p;
            p.snr_db = cfg.snr_db[s];
            p.user = k;
            if (realized) {
                double acc = 0.0;
                long used = 0;
                for (const auto& r : records) {
                    const double v = r.cells[s * users + k].eq24;
                    if (std::isfinite(v)) {
                        acc += v;
                        ++used;
                    }
                }
                realized_general.push_back(used > 0 ? acc / used : kNaN);
            }
            double sum = 0.0, sum_sq = 0.0;
            long counted = 0, symbol_errors = 0, symbols = 0;
            for (const auto& r : records) {
                const Cell& c = r.cells[s * users + k];
                if (c.counted) {
                    sum += c.err2;
                    sum_sq += c.err2 * c.err2;
                    ++counted;
                }
                if (c.failed) ++p.failures;
                if (c.fallback) ++p.fallbacks;
                symbol_errors += c.symbol_errors;
                symbols += c.symbols;
            }
            p.trials = static_cast<long>(records.size());
            if (counted > 0) {
                p.mse_numerical = sum / counted;
                const double var = std::max(0.0, sum_sq / counted - p.mse_numerical * p.mse_numerical);
                p.mse_stderr = counted > 1 ? std::sqrt(var / (counted - 1)) : 0.0;
            } else {
                p.mse_numerical = kNaN;
                p.mse_stderr = kNaN;
            }
            p.ser = plan.detect && symbols > 0 ? static_cast<double>(symbol_errors) / symbols : kNaN;
            result.points.push_back(p);
        }
    }
    attach_analysis(cfg, inputs ? &*inputs : nullptr, mean_dk, realized_general, result.points);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace

Rng trial_stream(std::uint64_t seed, std::uint64_t trial, std::uint32_t purpose) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                      purpose};
    return Rng(seq);
}

SweepResult run_mse_sweep(const ExperimentConfig& cfg) { return run_sweep(cfg, Plan{false, false, false}); }

SweepResult run_ser_sweep(const ExperimentConfig& cfg) {
    if (cfg.frame.blocks < 2) throw ConfigError("SER sweep needs at least one data block (blocks >= 2)");
    return run_sweep(cfg, Plan{true, false, false});
}

SweepResult run_robustness_sweep(const ExperimentConfig& cfg, RobustnessMode mode) {
    Plan plan;
    plan.detect = cfg.frame.blocks >= 2;
    if (mode == RobustnessMode::aoa_bias) {
        plan.bias = true;
    } else {
        const bool any_side = std::any_of(cfg.users.begin(), cfg.users.end(),
                                          [](const UserSpec& u) { return u.side_aoa_deg.has_value(); });
        if (!any_side) throw ConfigError("side-cluster mode needs side_aoas_deg");
        plan.side = true;
    }
    return run_sweep(cfg, plan);
}

SweepResult run_analysis(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    const auto users = static_cast<int>(cfg.users.size());
    std::vector<double> mean_dk(users, 0.0);
    for (int t = 0; t < cfg.trials; ++t) {
        const auto pilots = draw_user_pilots(cfg, static_cast<std::uint64_t>(t));
        for (int k = 0; k < users; ++k) mean_dk[k] += pilot_dk(build_pilot_matrix(pilots[k], cfg.frame.taps));
    }
    for (auto& d : mean_dk) d /= cfg.trials;

    SweepResult result;
    result.scenario_id = cfg.scenario_id;
    result.estimator = estimator_name(cfg.estimator);
    result.seed = cfg.seed;
    for (std::size_t s : snr_order(cfg)) {
        for (int k = 0; k < users; ++k) {
            PointResult p;
            p.snr_db = cfg.snr_db[s];
            p.user = k;
            p.mse_numerical = kNaN;
            p.mse_stderr = kNaN;
            p.ser = kNaN;
            result.points.push_back(p);
        }
    }
    if (cfg.analysis.interference == InterferenceModel::realized && cfg.analysis.eq24)
        throw ConfigError("the analyze command supports only the statistical interference model");
    std::optional<AnalyticalInputs> inputs;
    if (any_analysis(cfg.analysis)) inputs = analytical_inputs(cfg, Plan{});
    attach_analysis(cfg, inputs ? &*inputs : nullptr, mean_dk, {}, result.points);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace adaf
