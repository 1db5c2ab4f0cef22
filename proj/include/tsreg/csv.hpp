#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tsreg/errors.hpp"
#include "tsreg/formula.hpp"
#include "tsreg/ols.hpp"

namespace tsreg {

struct CsvLoadResult {
    RegressionData data;
    int rows_dropped = 0;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

/// Full-string numeric parse; empty and non-numeric fields are missing.
inline std::optional<double> parse_field(const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty() || s == "NA" || s == "NaN" || s == "nan") return std::nullopt;
    char* end = nullptr;
    const double value = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return std::nullopt;
    if (!std::isfinite(value)) return std::nullopt;
    return value;
}

}  // namespace detail

/// Loads a CSV (header row, comma separator, '.' decimal point) and
/// builds the design described by the formula; the intercept column comes
/// first. Rows with a missing or non-numeric value in any referenced
/// column are dropped and counted.
inline CsvLoadResult load_csv(const std::filesystem::path& path, const Formula& formula) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError("cannot open '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line)) throw EmptyAfterFilteringError("empty file");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    const std::vector<std::string> header = detail::split_csv_line(line);
    std::map<std::string, std::size_t> column_index;
    for (std::size_t i = 0; i < header.size(); ++i) {
        column_index[detail::trim(header[i])] = i;
    }

    auto require_column = [&](const std::string& name) -> std::size_t {
        const auto found = column_index.find(name);
        if (found == column_index.end()) {
            throw UnknownColumnError("column '" + name + "' not found in '" +
                                     path.string() + "'");
        }
        return found->second;
    };

    const std::size_t response_index = require_column(formula.response);
    std::vector<std::size_t> term_index;
    term_index.reserve(formula.terms.size());
    for (const FormulaTerm& term : formula.terms) {
        term_index.push_back(require_column(term.column));
    }

    std::vector<double> response;
    std::vector<std::vector<double>> term_values(formula.terms.size());
    int dropped = 0;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) continue;
        const std::vector<std::string> fields = detail::split_csv_line(line);
        auto field_at = [&](std::size_t i) -> std::optional<double> {
            if (i >= fields.size()) return std::nullopt;
            return detail::parse_field(fields[i]);
        };

        std::vector<double> row(formula.terms.size());
        const std::optional<double> y = field_at(response_index);
        bool ok = y.has_value();
        for (std::size_t t = 0; ok && t < term_index.size(); ++t) {
            const std::optional<double> v = field_at(term_index[t]);
            if (!v) {
                ok = false;
            } else {
                row[t] = *v;
            }
        }
        if (!ok) {
            ++dropped;
            continue;
        }
        response.push_back(*y);
        for (std::size_t t = 0; t < row.size(); ++t) term_values[t].push_back(row[t]);
    }

    const int n = static_cast<int>(response.size());
    if (n == 0) {
        throw EmptyAfterFilteringError("no usable rows in '" + path.string() + "'");
    }

    CsvLoadResult result;
    result.rows_dropped = dropped;
    RegressionData& data = result.data;
    data.intercept = formula.intercept;
    const int p = static_cast<int>(formula.terms.size()) + (formula.intercept ? 1 : 0);
    data.y.resize(n);
    for (int i = 0; i < n; ++i) data.y[i] = response[static_cast<std::size_t>(i)];
    data.x.resize(n, p);
    int col = 0;
    if (formula.intercept) {
        data.x.col(col++).setOnes();
        data.column_names.push_back("(Intercept)");
    }
    for (std::size_t t = 0; t < formula.terms.size(); ++t, ++col) {
        const FormulaTerm& term = formula.terms[t];
        for (int i = 0; i < n; ++i) {
            data.x(i, col) = term.eval(term_values[t][static_cast<std::size_t>(i)]);
        }
        data.column_names.push_back(term.label());
    }
    return result;
}

}  // namespace tsreg
