// tsreg command line: fit a regression with stationary-error corrected
// inference, simulate the generative processes, or run a Monte Carlo
// level-calibration experiment.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsreg/tsreg.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct CliError {
    int code;
    std::string message;
};

tsreg::CovMethod parse_method_flag(const std::string& name) {
    if (name == "fitar") return tsreg::CovMethod::fit_ar;
    if (name == "kernel") return tsreg::CovMethod::kernel;
    if (name == "efromovich") return tsreg::CovMethod::efromovich;
    if (name == "hac") return tsreg::CovMethod::hac;
    if (name == "spectralproj") return tsreg::CovMethod::spectral_proj;
    if (name == "select") return tsreg::CovMethod::select_lags;
    if (name == "manual") return tsreg::CovMethod::manual;
    throw CliError{kExitUsage, "unknown method '" + name + "'"};
}

tsreg::KernelKind parse_kernel_flag(const std::string& name) {
    if (name == "rectangular") return tsreg::KernelKind::rectangular;
    if (name == "triangle") return tsreg::KernelKind::triangle;
    if (name == "trapeze") return tsreg::KernelKind::trapeze;
    throw CliError{kExitUsage, "unknown kernel '" + name + "'"};
}

/// --model-selec accepts -1, a single lag/order, or a comma list (select).
struct ModelSelec {
    int single = -1;
    std::vector<int> list;
};

ModelSelec parse_model_selec(const std::string& text) {
    ModelSelec out;
    if (text.find(',') == std::string::npos) {
        try {
            out.single = std::stoi(text);
        } catch (const std::exception&) {
            throw CliError{kExitUsage, "--model-selec expects an integer or comma list"};
        }
        return out;
    }
    std::istringstream stream(text);
    std::string piece;
    while (std::getline(stream, piece, ',')) {
        try {
            out.list.push_back(std::stoi(piece));
        } catch (const std::exception&) {
            throw CliError{kExitUsage, "--model-selec list entry '" + piece + "' is not an integer"};
        }
    }
    out.single = 0;
    return out;
}

std::vector<double> load_vector_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw tsreg::FileNotFoundError("cannot open '" + path.string() + "'");
    std::vector<double> values;
    std::string token;
    while (std::getline(in, token)) {
        std::istringstream line(token);
        std::string field;
        while (std::getline(line, field, ',')) {
            const auto value = tsreg::detail::parse_field(field);
            if (value) values.push_back(*value);
        }
    }
    if (values.empty()) {
        throw tsreg::EmptyAfterFilteringError("no numeric values in '" + path.string() + "'");
    }
    return values;
}

int run_fit(const std::string& data_path, const std::string& formula_text,
            const std::string& method_name, const std::string& model_selec_text,
            int model_max, const std::string& kernel_name, double trapeze_delta,
            int block_size, int block_n, const std::string& cov_vector_path,
            std::optional<double> level, std::uint64_t seed, const std::string& out_format,
            const std::string& plot_dir) {
    const tsreg::Formula formula = tsreg::parse_formula(formula_text);
    const tsreg::CsvLoadResult loaded = tsreg::load_csv(data_path, formula);
    if (loaded.rows_dropped > 0) {
        std::cerr << "note: dropped " << loaded.rows_dropped
                  << " row(s) with missing or non-numeric values\n";
    }
    const tsreg::OlsFit fit = tsreg::fit_ols(loaded.data);

    tsreg::MethodConfig config;
    config.method = parse_method_flag(method_name);
    const ModelSelec selec = parse_model_selec(model_selec_text);
    config.model_selec = selec.single;
    if (config.method == tsreg::CovMethod::select_lags) {
        config.lag_set = selec.list;
        if (selec.list.empty() && selec.single > 0) config.lag_set = {selec.single};
    } else if (!selec.list.empty()) {
        throw CliError{kExitUsage, "--model-selec list is only valid with --method select"};
    }
    config.model_max = model_max;
    config.kernel.kind = parse_kernel_flag(kernel_name);
    config.kernel.trapeze_delta = trapeze_delta;
    config.block_size = block_size;
    config.block_n = block_n;
    if (config.method == tsreg::CovMethod::manual) {
        if (cov_vector_path.empty()) {
            throw CliError{kExitUsage, "--method manual requires --cov-vector"};
        }
        config.user_gamma = load_vector_file(cov_vector_path);
    }

    tsreg::Rng rng(seed);
    const tsreg::CovPlugin cov = tsreg::estimate_covariance(fit, config, rng);
    if (cov.indefinite_warning) {
        std::cerr << "warning: plugged covariance matrix is not positive definite\n";
    }
    const tsreg::SummaryReport report = tsreg::summary_report(fit, cov);

    if (out_format == "json") {
        nlohmann::json j = tsreg::summary_to_json(report);
        j["formula"] = formula.pretty();
        if (level) {
            const auto intervals = tsreg::confint(fit, cov, *level);
            nlohmann::json ci;
            ci["level"] = *level;
            std::vector<double> lower, upper;
            for (const auto& interval : intervals) {
                lower.push_back(interval.lower);
                upper.push_back(interval.upper);
            }
            ci["lower"] = lower;
            ci["upper"] = upper;
            j["confint"] = ci;
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "Formula: " << formula.pretty() << "\n";
        std::cout << "Method: " << cov.method_tag;
        if (cov.selected >= 0) std::cout << " (selected " << cov.selected << ")";
        if (!cov.selected_lags.empty()) {
            std::cout << " (lags";
            for (int lag : cov.selected_lags) std::cout << " " << lag;
            std::cout << ")";
        }
        if (cov.bandwidth > 0.0) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), " (bandwidth %.4g)", cov.bandwidth);
            std::cout << buf;
        }
        std::cout << "\n\n" << tsreg::format_summary_text(report);
        if (level) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "\nConfidence intervals (level %g):\n", *level);
            std::cout << buf;
            for (const auto& interval : tsreg::confint(fit, cov, *level)) {
                std::snprintf(buf, sizeof(buf), "  %-16s %14.6g %14.6g\n",
                              interval.name.c_str(), interval.lower, interval.upper);
                std::cout << buf;
            }
        }
    }

    if (!plot_dir.empty()) {
        const std::vector<tsreg::PlotData> plots = tsreg::plots_for_fit(fit, cov);
        if (plots.empty()) {
            std::cerr << "note: no plot available for method '" << cov.method_tag << "'\n";
        }
        for (const tsreg::PlotData& plot : plots) {
            tsreg::write_plot_csv(plot, plot_dir);
        }
    }
    return kExitOk;
}

int run_simulate(const std::string& process_name, int n, std::uint64_t seed, double sigma2,
                 double map_exponent, double ar_coeff) {
    char buf[64];
    if (process_name == "mod2") {
        tsreg::Rng rng(seed);
        const Eigen::MatrixXd design = tsreg::gen_design_mod2(n, rng, ar_coeff);
        std::cout << "X1,X2\n";
        for (int i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", design(i, 0), design(i, 1));
            std::cout << buf;
        }
        return kExitOk;
    }
    tsreg::ProcessSpec spec;
    if (process_name == "ar1") spec.kind = tsreg::ProcessKind::ar1;
    else if (process_name == "ar12") spec.kind = tsreg::ProcessKind::ar12;
    else if (process_name == "ma12") spec.kind = tsreg::ProcessKind::ma12;
    else if (process_name == "nonmixing") spec.kind = tsreg::ProcessKind::nonmixing;
    else if (process_name == "sysdyn") spec.kind = tsreg::ProcessKind::sysdyn;
    else if (process_name == "iid") spec.kind = tsreg::ProcessKind::iid_student_sq;
    else throw CliError{kExitUsage, "unknown process '" + process_name + "'"};
    spec.n = n;
    spec.seed = seed;
    spec.sigma2 = sigma2;
    spec.map_exponent = map_exponent;
    const Eigen::VectorXd series = tsreg::generate_process(spec);
    std::cout << "value\n";
    for (int i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", series[i]);
        std::cout << buf;
    }
    return kExitOk;
}

int run_experiment(const std::string& config_path, const std::string& out_csv,
                   const std::string& out_json, int threads) {
    std::ifstream in(config_path);
    if (!in) throw tsreg::FileNotFoundError("cannot open '" + config_path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw tsreg::ConfigError(std::string("invalid JSON: ") + e.what(), "/");
    }
    const tsreg::ExperimentConfig config = tsreg::experiment_config_from_json(j);
    const tsreg::LevelReport report = tsreg::run_level_experiment(config, threads);

    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-10s %-6s %-14s %-9s %-9s %s\n", "process", "n", "method",
                  "level", "mc_se", "failures");
    std::cout << buf;
    for (const tsreg::MethodLevel& cell : report.cells) {
        std::snprintf(buf, sizeof(buf), "%-10s %-6d %-14s %-9.4g %-9.3g %d\n",
                      report.process.c_str(), report.n, cell.label.c_str(), cell.frequency,
                      cell.mc_se, cell.failures);
        std::cout << buf;
    }

    if (!out_csv.empty()) {
        std::ofstream csv(out_csv);
        if (!csv) throw tsreg::FileNotFoundError("cannot write '" + out_csv + "'");
        csv << tsreg::level_report_to_csv(report);
    }
    if (!out_json.empty()) {
        std::ofstream json_file(out_json);
        if (!json_file) throw tsreg::FileNotFoundError("cannot write '" + out_json + "'");
        json_file << tsreg::level_report_to_json(report).dump(2) << "\n";
    }
    return kExitOk;
}

int classify_and_report(const std::exception& e) {
    if (dynamic_cast<const tsreg::ParseError*>(&e) ||
        dynamic_cast<const tsreg::ConfigError*>(&e) ||
        dynamic_cast<const tsreg::InvalidLevelError*>(&e) ||
        dynamic_cast<const tsreg::LagOutOfRangeError*>(&e) ||
        dynamic_cast<const tsreg::BlockTooSmallError*>(&e) ||
        dynamic_cast<const tsreg::InvalidArgumentError*>(&e)) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    if (dynamic_cast<const tsreg::FileNotFoundError*>(&e) ||
        dynamic_cast<const tsreg::UnknownColumnError*>(&e) ||
        dynamic_cast<const tsreg::EmptyAfterFilteringError*>(&e) ||
        dynamic_cast<const tsreg::DimensionMismatchError*>(&e) ||
        dynamic_cast<const tsreg::NotSymmetricError*>(&e)) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear regression with stationary, serially correlated errors"};
    app.require_subcommand(1);

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "Fit a regression from a CSV file");
    std::string data_path, formula_text;
    std::string method_name = "fitar";
    std::string model_selec_text = "-1";
    int model_max = 0;
    std::string kernel_name = "triangle";
    double trapeze_delta = 0.5;
    int block_size = 0, block_n = 0;
    std::string cov_vector_path;
    double level_value = 0.0;
    bool level_set = false;
    std::uint64_t seed = 12345;
    std::string out_format = "text";
    std::string plot_dir;
    fit_cmd->add_option("--data", data_path, "CSV input path")->required();
    fit_cmd->add_option("--formula", formula_text, "Model formula, e.g. 'y ~ t + I(t^2)'")
        ->required();
    fit_cmd->add_option("--method", method_name,
                        "fitar|kernel|efromovich|hac|spectralproj|select|manual");
    fit_cmd->add_option("--model-selec", model_selec_text,
                        "Order/lag/dimension, -1 for automatic, or comma list (select)");
    fit_cmd->add_option("--model-max", model_max, "Cap for automatic selection");
    fit_cmd->add_option("--kernel", kernel_name, "rectangular|triangle|trapeze");
    fit_cmd->add_option("--trapeze-delta", trapeze_delta, "Trapeze plateau width (0,1)");
    fit_cmd->add_option("--block-size", block_size, "Bootstrap block size");
    fit_cmd->add_option("--block-n", block_n, "Bootstrap block count");
    fit_cmd->add_option("--cov-vector", cov_vector_path, "Autocovariance vector file (manual)");
    fit_cmd->add_option("--level", level_value, "Confidence level for intervals")
        ->check(CLI::Range(0.0, 1.0))
        ->each([&](const std::string&) { level_set = true; });
    fit_cmd->add_option("--seed", seed, "RNG seed (bootstrap)");
    fit_cmd->add_option("--out", out_format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));
    fit_cmd->add_option("--plot-data", plot_dir, "Directory for plot-data CSV files");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Draw an error process or design as CSV");
    std::string process_name;
    int sim_n = 0;
    std::uint64_t sim_seed = 1;
    double sigma2 = 25.0, map_exponent = 0.25, ar_coeff = 0.5;
    sim_cmd->add_option("--process", process_name, "ar1|ar12|ma12|nonmixing|sysdyn|iid|mod2")
        ->required();
    sim_cmd->add_option("--n", sim_n, "Series length")->required()->check(CLI::PositiveNumber);
    sim_cmd->add_option("--seed", sim_seed, "RNG seed");
    sim_cmd->add_option("--sigma2", sigma2, "Marginal variance (nonmixing)");
    sim_cmd->add_option("--map-exponent", map_exponent, "Intermittent map exponent (sysdyn)");
    sim_cmd->add_option("--ar-coeff", ar_coeff, "Latent AR(1) coefficient (mod2)");

    // experiment
    auto* exp_cmd = app.add_subcommand("experiment", "Run a level-calibration experiment");
    std::string config_path, out_csv, out_json;
    int threads = 1;
    exp_cmd->add_option("--config", config_path, "JSON experiment configuration")->required();
    exp_cmd->add_option("--out-csv", out_csv, "Write the report table as CSV");
    exp_cmd->add_option("--out-json", out_json, "Write the full report as JSON");
    exp_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
        if (fit_cmd->parsed()) {
            std::optional<double> level;
            if (level_set) level = level_value;
            return run_fit(data_path, formula_text, method_name, model_selec_text, model_max,
                           kernel_name, trapeze_delta, block_size, block_n, cov_vector_path,
                           level, seed, out_format, plot_dir);
        }
        if (sim_cmd->parsed()) {
            return run_simulate(process_name, sim_n, sim_seed, sigma2, map_exponent, ar_coeff);
        }
        if (exp_cmd->parsed()) {
            return run_experiment(config_path, out_csv, out_json, threads);
        }
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const tsreg::Error& e) {
        return classify_and_report(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
