#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsreg/cov_methods.hpp"
#include "tsreg/errors.hpp"
#include "tsreg/experiments.hpp"
#include "tsreg/inference.hpp"

namespace tsreg {

/// Machine-readable summary record. Field names are part of the external
/// interface and must stay stable.
inline nlohmann::json summary_to_json(const SummaryReport& report) {
    nlohmann::json j;
    std::vector<std::string> names;
    std::vector<double> estimates, std_errors, z_values, p_values;
    for (const CoefficientEntry& row : report.coefficients.rows) {
        names.push_back(row.name);
        estimates.push_back(row.estimate);
        std_errors.push_back(row.std_error);
        z_values.push_back(row.z_value);
        p_values.push_back(row.p_value);
    }
    j["columns"] = names;
    j["estimates"] = estimates;
    j["std_errors"] = std_errors;
    j["z_values"] = z_values;
    j["p_values"] = p_values;
    j["chi2"] = report.overall.statistic;
    j["df"] = report.overall.df;
    j["p_value_global"] = report.overall.p_value;
    j["r_squared"] = report.r_squared;
    j["sigma_hat"] = report.sigma_hat;
    j["method"] = report.method_tag;
    j["selected"] = report.selected;
    j["n"] = report.n;
    j["p"] = report.p;
    return j;
}

namespace detail {

template <typename T>
T require_field(const nlohmann::json& j, const std::string& pointer, const char* type_name) {
    const nlohmann::json::json_pointer ptr(pointer);
    if (!j.contains(ptr)) throw ConfigError("missing required field", pointer);
    try {
        return j.at(ptr).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("expected ") + type_name, pointer);
    }
}

template <typename T>
T optional_field(const nlohmann::json& j, const std::string& pointer, T fallback,
                 const char* type_name) {
    const nlohmann::json::json_pointer ptr(pointer);
    if (!j.contains(ptr)) return fallback;
    try {
        return j.at(ptr).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("expected ") + type_name, pointer);
    }
}

inline ProcessKind parse_process_kind(const std::string& name, const std::string& pointer) {
    if (name == "ar1") return ProcessKind::ar1;
    if (name == "ar12") return ProcessKind::ar12;
    if (name == "ma12") return ProcessKind::ma12;
    if (name == "nonmixing") return ProcessKind::nonmixing;
    if (name == "sysdyn") return ProcessKind::sysdyn;
    if (name == "iid") return ProcessKind::iid_student_sq;
    throw ConfigError("unknown process '" + name + "'", pointer);
}

inline CovMethod parse_cov_method(const std::string& name, const std::string& pointer) {
    if (name == "fitar") return CovMethod::fit_ar;
    if (name == "kernel") return CovMethod::kernel;
    if (name == "efromovich") return CovMethod::efromovich;
    if (name == "hac") return CovMethod::hac;
    if (name == "spectralproj") return CovMethod::spectral_proj;
    if (name == "select") return CovMethod::select_lags;
    if (name == "manual") return CovMethod::manual;
    throw ConfigError("unknown method '" + name + "'", pointer);
}

inline KernelKind parse_kernel_kind(const std::string& name, const std::string& pointer) {
    if (name == "rectangular") return KernelKind::rectangular;
    if (name == "triangle") return KernelKind::triangle;
    if (name == "trapeze") return KernelKind::trapeze;
    throw ConfigError("unknown kernel '" + name + "'", pointer);
}

}  // namespace detail

/// Parses one method entry at /methods/<index>.
inline MethodConfig method_config_from_json(const nlohmann::json& root,
                                            const std::string& base_pointer) {
    MethodConfig config;
    config.method = detail::parse_cov_method(
        detail::require_field<std::string>(root, base_pointer + "/method", "string"),
        base_pointer + "/method");
    config.model_selec =
        detail::optional_field<int>(root, base_pointer + "/model_selec", -1, "integer");
    config.model_max =
        detail::optional_field<int>(root, base_pointer + "/model_max", 0, "integer");
    config.block_size =
        detail::optional_field<int>(root, base_pointer + "/block_size", 0, "integer");
    config.block_n = detail::optional_field<int>(root, base_pointer + "/block_n", 0, "integer");
    const std::string kernel_name = detail::optional_field<std::string>(
        root, base_pointer + "/kernel", "triangle", "string");
    config.kernel.kind = detail::parse_kernel_kind(kernel_name, base_pointer + "/kernel");
    config.kernel.trapeze_delta = detail::optional_field<double>(
        root, base_pointer + "/trapeze_delta", 0.5, "number");
    config.lag_set = detail::optional_field<std::vector<int>>(
        root, base_pointer + "/lags", {}, "integer array");
    config.user_gamma = detail::optional_field<std::vector<double>>(
        root, base_pointer + "/gamma", {}, "number array");
    return config;
}

/// Parses a full experiment configuration; errors carry JSON pointers.
inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
    ExperimentConfig config;
    config.process = detail::parse_process_kind(
        detail::require_field<std::string>(j, "/process", "string"), "/process");
    config.process_sigma2 =
        detail::optional_field<double>(j, "/process_sigma2", 25.0, "number");
    config.process_map_exponent =
        detail::optional_field<double>(j, "/process_map_exponent", 0.25, "number");
    config.n = detail::require_field<int>(j, "/n", "integer");
    config.replicates = detail::require_field<int>(j, "/replicates", "integer");
    config.nominal_level =
        detail::optional_field<double>(j, "/nominal_level", 0.05, "number");
    config.base_seed =
        detail::optional_field<std::uint64_t>(j, "/base_seed", 1, "integer");
    config.design_ar_coeff =
        detail::optional_field<double>(j, "/design_ar_coeff", 0.5, "number");
    config.include_fisher =
        detail::optional_field<bool>(j, "/include_fisher", true, "boolean");

    const nlohmann::json::json_pointer methods_ptr("/methods");
    if (!j.contains(methods_ptr)) throw ConfigError("missing required field", "/methods");
    if (!j.at(methods_ptr).is_array() || j.at(methods_ptr).empty()) {
        throw ConfigError("expected non-empty array", "/methods");
    }
    for (std::size_t i = 0; i < j.at(methods_ptr).size(); ++i) {
        config.methods.push_back(
            method_config_from_json(j, "/methods/" + std::to_string(i)));
    }

    try {
        validate(config);
    } catch (const InvalidArgumentError& e) {
        throw ConfigError(e.what(), "/");
    }
    return config;
}

inline nlohmann::json level_report_to_json(const LevelReport& report) {
    nlohmann::json j;
    j["process"] = report.process;
    j["n"] = report.n;
    j["replicates"] = report.replicates;
    j["nominal_level"] = report.nominal_level;
    nlohmann::json cells = nlohmann::json::array();
    for (const MethodLevel& cell : report.cells) {
        nlohmann::json c;
        c["method"] = cell.label;
        c["frequency"] = cell.frequency;
        c["mc_se"] = cell.mc_se;
        c["rejections"] = cell.rejections;
        c["used"] = cell.used;
        c["failures"] = cell.failures;
        nlohmann::json histogram = nlohmann::json::object();
        for (const auto& [selected, count] : cell.selected_histogram) {
            histogram[std::to_string(selected)] = count;
        }
        c["selected_histogram"] = histogram;
        cells.push_back(std::move(c));
    }
    j["cells"] = cells;
    return j;
}

/// One CSV row per (process, n) with a frequency and SE column per method.
inline std::string level_report_to_csv(const LevelReport& report) {
    std::ostringstream out;
    out << "process,n";
    for (const MethodLevel& cell : report.cells) {
        out << "," << cell.label << "," << cell.label << "_se";
    }
    out << "\n" << report.process << "," << report.n;
    char buf[64];
    for (const MethodLevel& cell : report.cells) {
        std::snprintf(buf, sizeof(buf), ",%.6g,%.6g", cell.frequency, cell.mc_se);
        out << buf;
    }
    out << "\n";
    return out.str();
}

}  // namespace tsreg
