#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tsreg/errors.hpp"
#include "tsreg/ols.hpp"
#include "tsreg/special_functions.hpp"

namespace tsreg {

struct CoefficientEntry {
    std::string name;
    double estimate = 0.0;
    double std_error = 0.0;
    double z_value = 0.0;
    double p_value = 1.0;
};

struct CoefficientTable {
    std::vector<CoefficientEntry> rows;
};

/// Per-coefficient Z statistics Z_j = d_j(n) beta_j / sqrt(C_jj) with
/// two-sided standard normal p-values.
inline CoefficientTable z_statistics(const OlsFit& fit, const CovPlugin& cov) {
    const int p = fit.p();
    if (cov.c_hat.rows() != p || cov.c_hat.cols() != p) {
        throw DimensionMismatchError("z_statistics: covariance must be p x p");
    }
    CoefficientTable table;
    table.rows.resize(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) {
        const double c_jj = cov.c_hat(j, j);
        if (!(c_jj > 0.0)) {
            throw NoPositiveEigenvalueError("z_statistics: nonpositive diagonal in C_hat");
        }
        CoefficientEntry& row = table.rows[static_cast<std::size_t>(j)];
        row.name = j < static_cast<int>(fit.column_names.size()) ? fit.column_names[j]
                                                                 : "b" + std::to_string(j);
        row.estimate = fit.beta_hat[j];
        row.std_error = std::sqrt(c_jj) / fit.d_n[j];
        row.z_value = row.estimate / row.std_error;
        row.p_value = normal_two_sided_p(row.z_value);
    }
    return table;
}

struct ConfidenceInterval {
    std::string name;
    double lower = 0.0;
    double upper = 0.0;
};

/// Confidence intervals beta_j -/+ q_{(1+level)/2} sqrt(C_jj)/d_j(n).
inline std::vector<ConfidenceInterval> confint(const OlsFit& fit, const CovPlugin& cov,
                                               double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw InvalidLevelError("confint: level must lie in (0,1)");
    }
    const CoefficientTable table = z_statistics(fit, cov);
    const double q = normal_quantile(0.5 * (1.0 + level));
    std::vector<ConfidenceInterval> intervals;
    intervals.reserve(table.rows.size());
    for (const CoefficientEntry& row : table.rows) {
        intervals.push_back(
            {row.name, row.estimate - q * row.std_error, row.estimate + q * row.std_error});
    }
    return intervals;
}

struct ChiSquareResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
};

/// Wald chi-square statistic || (A C A^t)^{-1/2} A D(n) beta_hat ||^2 for
/// a k x p contrast matrix A of full row rank; for selector contrasts
/// this tests A beta = 0 with df = k.
inline ChiSquareResult chi2_test(const OlsFit& fit, const CovPlugin& cov,
                                 const Eigen::MatrixXd& a) {
    const int p = fit.p();
    const int k = static_cast<int>(a.rows());
    if (static_cast<int>(a.cols()) != p) {
        throw DimensionMismatchError("chi2_test: contrast must have p columns");
    }
    if (k < 1 || k > p) {
        throw RankDeficientContrastError("chi2_test: need 1 <= k <= p rows");
    }
    {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
        const Eigen::VectorXd& sv = svd.singularValues();
        if (sv[0] <= 0.0 || sv[k - 1] / sv[0] < 1e-10) {
            throw RankDeficientContrastError("chi2_test: contrast rows are rank deficient");
        }
    }

    const Eigen::MatrixXd sandwich = a * cov.c_hat * a.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (sandwich + sandwich.transpose()));
    const Eigen::VectorXd& values = solver.eigenvalues();
    const double threshold = 1e-12 * std::abs(sandwich.trace());
    if (values.minCoeff() <= threshold) {
        throw RankDeficientContrastError("chi2_test: A C A^t is not positive definite");
    }
    const Eigen::MatrixXd inv_sqrt = solver.eigenvectors() *
                                     values.array().rsqrt().matrix().asDiagonal() *
                                     solver.eigenvectors().transpose();

    const Eigen::VectorXd v = a * fit.d_n.cwiseProduct(fit.beta_hat);
    ChiSquareResult result;
    result.statistic = (inv_sqrt * v).squaredNorm();
    result.df = k;
    result.p_value = 1.0 - chi2_cdf(result.statistic, k);
    return result;
}

/// Overall model-significance test: the contrast selects every
/// non-intercept coefficient (df = p - 1). Without an intercept the test
/// falls back to A = I_p with df = p.
inline ChiSquareResult overall_significance(const OlsFit& fit, const CovPlugin& cov) {
    const int p = fit.p();
    if (!fit.intercept) {
        return chi2_test(fit, cov, Eigen::MatrixXd::Identity(p, p));
    }
    if (p < 2) {
        throw InvalidArgumentError("overall_significance: no non-intercept coefficients");
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p - 1, p);
    a.rightCols(p - 1).setIdentity();
    return chi2_test(fit, cov, a);
}

/// Residual quantiles (type-7, the R default).
inline double quantile_type7(std::vector<double> sorted, double prob) {
    const std::size_t n = sorted.size();
    if (n == 0) throw InvalidArgumentError("quantile: empty sample");
    const double h = (static_cast<double>(n) - 1.0) * prob;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, n - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct SummaryReport {
    double residual_min = 0.0;
    double residual_q1 = 0.0;
    double residual_median = 0.0;
    double residual_q3 = 0.0;
    double residual_max = 0.0;
    CoefficientTable coefficients;
    double sigma_hat = 0.0;
    double r_squared = 0.0;
    ChiSquareResult overall;
    std::string method_tag;
    int selected = -1;
    int n = 0;
    int p = 0;
};

inline SummaryReport summary_report(const OlsFit& fit, const CovPlugin& cov) {
    SummaryReport report;
    std::vector<double> sorted(fit.residuals.data(), fit.residuals.data() + fit.residuals.size());
    std::sort(sorted.begin(), sorted.end());
    report.residual_min = sorted.front();
    report.residual_q1 = quantile_type7(sorted, 0.25);
    report.residual_median = quantile_type7(sorted, 0.5);
    report.residual_q3 = quantile_type7(sorted, 0.75);
    report.residual_max = sorted.back();
    report.coefficients = z_statistics(fit, cov);
    report.sigma_hat = std::sqrt(fit.rss / (fit.n() - fit.p()));
    report.r_squared = fit.r_squared;
    report.overall = overall_significance(fit, cov);
    report.method_tag = cov.method_tag;
    report.selected = cov.selected;
    report.n = fit.n();
    report.p = fit.p();
    return report;
}

namespace detail {

inline std::string significance_stars(double p) {
    if (p <= 0.001) return "***";
    if (p <= 0.01) return "**";
    if (p <= 0.05) return "*";
    if (p <= 0.1) return ".";
    return " ";
}

inline std::string format_number(double x, const char* spec) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, x);
    return buf;
}

inline std::string format_coefficient(double x) {
    if (x == 0.0) return "0.000000";
    const double mag = std::abs(x);
    if (mag >= 1e-4 && mag < 1e5) return format_number(x, "%.6f");
    return format_number(x, "%.3e");
}

inline std::string format_cell_pvalue(double p) {
    if (p < 2e-16) return "< 2e-16";
    if (p >= 1e-4) return format_number(p, "%.6f");
    return format_number(p, "%.2e");
}

inline std::string format_global_pvalue(double p) {
    if (p < 2.2e-16) return "< 2.2e-16";
    return format_number(p, "%.4g");
}

}  // namespace detail

/// Renders the summary in the classic layout: residual quantiles,
/// coefficient table with significance stars, residual standard error,
/// R-squared and the overall chi-square line.
inline std::string format_summary_text(const SummaryReport& report) {
    std::ostringstream out;

    out << "Residuals:\n";
    const char* quantile_names[5] = {"Min", "1Q", "Median", "3Q", "Max"};
    const double quantiles[5] = {report.residual_min, report.residual_q1,
                                 report.residual_median, report.residual_q3,
                                 report.residual_max};
    std::string header_line, value_line;
    for (int i = 0; i < 5; ++i) {
        const std::string value = detail::format_number(quantiles[i], "%.4f");
        const std::size_t width = std::max(value.size(), std::string(quantile_names[i]).size()) + 2;
        std::ostringstream h, v;
        h << std::setw(static_cast<int>(width)) << quantile_names[i];
        v << std::setw(static_cast<int>(width)) << value;
        header_line += h.str();
        value_line += v.str();
    }
    out << header_line << "\n" << value_line << "\n\n";

    out << "Coefficients:\n";
    std::size_t name_width = 0;
    for (const CoefficientEntry& row : report.coefficients.rows) {
        name_width = std::max(name_width, row.name.size());
    }
    std::vector<std::array<std::string, 4>> cells;
    std::array<std::size_t, 4> widths = {std::string("Estimate").size(),
                                         std::string("Std. Error").size(),
                                         std::string("z value").size(),
                                         std::string("Pr(>|z|)").size()};
    for (const CoefficientEntry& row : report.coefficients.rows) {
        std::array<std::string, 4> cell = {
            detail::format_coefficient(row.estimate), detail::format_coefficient(row.std_error),
            detail::format_number(row.z_value, "%.3f"), detail::format_cell_pvalue(row.p_value)};
        for (int i = 0; i < 4; ++i) widths[static_cast<std::size_t>(i)] =
            std::max(widths[static_cast<std::size_t>(i)], cell[static_cast<std::size_t>(i)].size());
        cells.push_back(std::move(cell));
    }
    out << std::left << std::setw(static_cast<int>(name_width)) << "" << std::right;
    const char* column_names[4] = {"Estimate", "Std. Error", "z value", "Pr(>|z|)"};
    for (int i = 0; i < 4; ++i) {
        out << " " << std::setw(static_cast<int>(widths[static_cast<std::size_t>(i)]))
            << column_names[i];
    }
    out << "\n";
    for (std::size_t r = 0; r < cells.size(); ++r) {
        const CoefficientEntry& row = report.coefficients.rows[r];
        out << std::left << std::setw(static_cast<int>(name_width)) << row.name << std::right;
        for (int i = 0; i < 4; ++i) {
            out << " " << std::setw(static_cast<int>(widths[static_cast<std::size_t>(i)]))
                << cells[r][static_cast<std::size_t>(i)];
        }
        out << " " << detail::significance_stars(row.p_value) << "\n";
    }
    out << "---\n";
    out << "Signif. codes:  0 '***' 0.001 '**' 0.01 '*' 0.05 '.' 0.1 ' ' 1\n\n";

    out << "Residual standard error: " << detail::format_number(report.sigma_hat, "%.4g") << "\n";
    out << "Multiple R-squared:  " << detail::format_number(report.r_squared, "%.4g") << "\n";
    out << "chi2-statistic: " << detail::format_number(report.overall.statistic, "%.4g")
        << " on " << report.overall.df
        << " DF,  p-value: " << detail::format_global_pvalue(report.overall.p_value) << "\n";
    return out.str();
}

}  // namespace tsreg
