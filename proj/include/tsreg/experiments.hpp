#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "tsreg/cov_methods.hpp"
#include "tsreg/errors.hpp"
#include "tsreg/inference.hpp"
#include "tsreg/ols.hpp"
#include "tsreg/processes.hpp"
#include "tsreg/rng.hpp"
#include "tsreg/special_functions.hpp"

namespace tsreg {

/// Classical overall F test under the i.i.d. error assumption (the
/// uncorrected baseline). Returns the p-value.
inline double classical_f_test(const OlsFit& fit) {
    if (!fit.intercept) throw InvalidArgumentError("classical_f_test: intercept required");
    const int n = fit.n();
    const int p = fit.p();
    if (p < 2 || n <= p) throw InvalidArgumentError("classical_f_test: need n > p >= 2");
    if (fit.rss <= 0.0) return 0.0;  // exact fit
    const double f = ((fit.tss - fit.rss) / (p - 1)) / (fit.rss / (n - p));
    return 1.0 - f_cdf(f, p - 1, n - p);
}

/// One Monte Carlo calibration run: a process, a design, a sample size
/// and the methods whose rejection frequency under the null is estimated.
struct ExperimentConfig {
    ProcessKind process = ProcessKind::ar1;
    double process_sigma2 = 25.0;       // nonmixing
    double process_map_exponent = 0.25; // sysdyn
    int n = 1000;
    int replicates = 500;
    double nominal_level = 0.05;
    std::uint64_t base_seed = 1;
    double design_ar_coeff = 0.5;
    bool include_fisher = true;
    std::vector<MethodConfig> methods;
};

inline void validate(const ExperimentConfig& config) {
    if (config.n < 4) throw InvalidArgumentError("experiment: n must be >= 4");
    if (config.replicates < 1) throw InvalidArgumentError("experiment: replicates must be >= 1");
    if (!(config.nominal_level > 0.0 && config.nominal_level < 1.0)) {
        throw InvalidArgumentError("experiment: nominal level must lie in (0,1)");
    }
    if (config.process == ProcessKind::nonmixing && !(config.process_sigma2 > 0.0)) {
        throw InvalidArgumentError("experiment: nonmixing sigma2 must be > 0");
    }
    if (config.process == ProcessKind::sysdyn &&
        !(config.process_map_exponent > 0.0 && config.process_map_exponent < 0.5)) {
        throw InvalidArgumentError("experiment: sysdyn exponent must lie in (0, 1/2)");
    }
}

/// Estimated level of one method column.
struct MethodLevel {
    std::string label;
    int rejections = 0;
    int failures = 0;
    int used = 0;
    double frequency = 0.0;
    /// Monte Carlo standard error sqrt(p(1-p)/used).
    double mc_se = 0.0;
    /// Distribution of the selected order / lag / dimension (hac records
    /// the rounded bandwidth).
    std::map<int, int> selected_histogram;
};

struct LevelReport {
    int replicates = 0;
    int n = 0;
    std::string process;
    double nominal_level = 0.05;
    std::vector<MethodLevel> cells;  // Fisher first when enabled
};

namespace detail {

struct ReplicateData {
    OlsFit fit;
};

/// Simulates one replicate under the null (beta_2 = beta_3 = 0,
/// intercept 3) and fits it. The design is drawn before the errors from
/// the replicate's own stream.
inline OlsFit simulate_null_fit(const ExperimentConfig& config, std::uint64_t replicate_seed) {
    Rng rng(replicate_seed);
    const Eigen::MatrixXd design = gen_design_mod2(config.n, rng, config.design_ar_coeff);
    const Eigen::VectorXd errors =
        generate_process(config.process, config.n, rng, config.process_sigma2,
                         config.process_map_exponent);

    RegressionData data;
    data.y = errors.array() + 3.0;
    data.x.resize(config.n, 3);
    data.x.col(0).setOnes();
    data.x.col(1) = design.col(0);
    data.x.col(2) = design.col(1);
    data.column_names = {"(Intercept)", "X1", "X2"};
    data.intercept = true;
    return fit_ols(data);
}

struct CellAccumulator {
    long long rejections = 0;
    long long failures = 0;
    long long used = 0;
    std::map<int, int> selected;

    void merge(const CellAccumulator& other) {
        rejections += other.rejections;
        failures += other.failures;
        used += other.used;
        for (const auto& [key, count] : other.selected) selected[key] += count;
    }
};

}  // namespace detail

/// Runs the calibration experiment. Replicates are independent and may be
/// spread over `threads` workers; every replicate derives its own RNG
/// stream from (base_seed, index) and all methods within a replicate see
/// the same simulated data, so the report is a pure function of the
/// configuration regardless of the thread count.
inline LevelReport run_level_experiment(const ExperimentConfig& config, int threads = 1) {
    validate(config);
    const int t_total = config.replicates;
    const int n_methods = static_cast<int>(config.methods.size());
    const int n_cells = n_methods + (config.include_fisher ? 1 : 0);
    if (n_cells == 0) throw InvalidArgumentError("experiment: no methods configured");
    threads = std::clamp(threads, 1, std::max(1, t_total));

    std::vector<std::vector<detail::CellAccumulator>> partial(
        static_cast<std::size_t>(threads),
        std::vector<detail::CellAccumulator>(static_cast<std::size_t>(n_cells)));
    std::vector<std::string> worker_errors(static_cast<std::size_t>(threads));

    auto worker = [&](int worker_index) {
        auto& cells = partial[static_cast<std::size_t>(worker_index)];
        try {
            for (int rep = worker_index; rep < t_total; rep += threads) {
                const std::uint64_t replicate_seed = derive_stream(config.base_seed,
                                                                   static_cast<std::uint64_t>(rep));
                const OlsFit fit = detail::simulate_null_fit(config, replicate_seed);
                int cell = 0;
                if (config.include_fisher) {
                    auto& acc = cells[static_cast<std::size_t>(cell++)];
                    acc.used += 1;
                    if (classical_f_test(fit) < config.nominal_level) acc.rejections += 1;
                }
                for (int m = 0; m < n_methods; ++m, ++cell) {
                    auto& acc = cells[static_cast<std::size_t>(cell)];
                    try {
                        Rng method_rng(derive_stream(replicate_seed,
                                                     static_cast<std::uint64_t>(m) + 1));
                        const CovPlugin plug =
                            estimate_covariance(fit, config.methods[static_cast<std::size_t>(m)],
                                                method_rng);
                        const ChiSquareResult test = overall_significance(fit, plug);
                        acc.used += 1;
                        if (test.p_value < config.nominal_level) acc.rejections += 1;
                        const int selected =
                            plug.selected >= 0
                                ? plug.selected
                                : static_cast<int>(std::lround(plug.bandwidth));
                        acc.selected[selected] += 1;
                    } catch (const Error&) {
                        acc.failures += 1;
                    }
                }
            }
        } catch (const std::exception& e) {
            worker_errors[static_cast<std::size_t>(worker_index)] = e.what();
        }
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w);
        for (std::thread& t : pool) t.join();
    }
    for (const std::string& message : worker_errors) {
        if (!message.empty()) throw Error("experiment replicate failed: " + message);
    }

    LevelReport report;
    report.replicates = t_total;
    report.n = config.n;
    report.process = process_kind_name(config.process);
    report.nominal_level = config.nominal_level;
    for (int cell = 0; cell < n_cells; ++cell) {
        detail::CellAccumulator total;
        for (int w = 0; w < threads; ++w) {
            total.merge(partial[static_cast<std::size_t>(w)][static_cast<std::size_t>(cell)]);
        }
        MethodLevel level;
        const bool is_fisher = config.include_fisher && cell == 0;
        level.label = is_fisher
                          ? "fisher"
                          : cov_method_name(
                                config.methods[static_cast<std::size_t>(
                                                   cell - (config.include_fisher ? 1 : 0))]
                                    .method);
        level.rejections = static_cast<int>(total.rejections);
        level.failures = static_cast<int>(total.failures);
        level.used = static_cast<int>(total.used);
        if (total.failures * 100 > t_total) {
            throw Error("experiment: method '" + level.label + "' failed on more than 1% of "
                        "replicates (" + std::to_string(total.failures) + "/" +
                        std::to_string(t_total) + ")");
        }
        if (level.used > 0) {
            level.frequency = static_cast<double>(level.rejections) / level.used;
            level.mc_se = std::sqrt(level.frequency * (1.0 - level.frequency) / level.used);
        }
        level.selected_histogram = std::move(total.selected);
        report.cells.push_back(std::move(level));
    }
    return report;
}

/// Estimated level as a function of the forced AR order, plus the
/// distribution of the order the AIC criterion would select.
struct LevelCurve {
    std::vector<int> orders;
    std::vector<double> levels;
    std::map<int, int> aic_histogram;
};

inline LevelCurve level_vs_order_curve(ProcessKind process, int n, int max_order, int t_total,
                                       std::uint64_t base_seed, double alpha = 0.05,
                                       double design_ar_coeff = 0.5) {
    if (max_order < 1 || max_order > 50) {
        throw InvalidArgumentError("level_vs_order_curve: max_order must lie in [1, 50]");
    }
    ExperimentConfig config;
    config.process = process;
    config.n = n;
    config.replicates = t_total;
    config.nominal_level = alpha;
    config.base_seed = base_seed;
    config.design_ar_coeff = design_ar_coeff;
    validate(config);

    LevelCurve curve;
    curve.orders.resize(static_cast<std::size_t>(max_order));
    for (int order = 1; order <= max_order; ++order) {
        curve.orders[static_cast<std::size_t>(order - 1)] = order;
    }
    std::vector<long long> rejections(static_cast<std::size_t>(max_order), 0);

    Rng unused_rng(0);
    for (int rep = 0; rep < t_total; ++rep) {
        const std::uint64_t replicate_seed =
            derive_stream(base_seed, static_cast<std::uint64_t>(rep));
        const OlsFit fit = detail::simulate_null_fit(config, replicate_seed);
        for (int order = 1; order <= max_order; ++order) {
            MethodConfig method;
            method.method = CovMethod::fit_ar;
            method.model_selec = order;
            const CovPlugin plug = estimate_covariance(fit, method, unused_rng);
            if (overall_significance(fit, plug).p_value < alpha) {
                rejections[static_cast<std::size_t>(order - 1)] += 1;
            }
        }
        curve.aic_histogram[select_ar_order_aic(fit.residuals, max_order)] += 1;
    }

    curve.levels.resize(static_cast<std::size_t>(max_order));
    for (int i = 0; i < max_order; ++i) {
        curve.levels[static_cast<std::size_t>(i)] =
            static_cast<double>(rejections[static_cast<std::size_t>(i)]) / t_total;
    }
    return curve;
}

}  // namespace tsreg
