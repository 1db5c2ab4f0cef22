#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tsreg/ar.hpp"
#include "tsreg/autocov.hpp"
#include "tsreg/cov_methods.hpp"
#include "tsreg/errors.hpp"
#include "tsreg/ols.hpp"
#include "tsreg/spectral.hpp"

namespace tsreg {

enum class PlotKind { acf, pacf, risk_curve, spectral_density, selected_acf };

inline const char* plot_kind_name(PlotKind kind) {
    switch (kind) {
        case PlotKind::acf: return "acf";
        case PlotKind::pacf: return "pacf";
        case PlotKind::risk_curve: return "risk_curve";
        case PlotKind::spectral_density: return "spectral_density";
        case PlotKind::selected_acf: return "selected_acf";
    }
    return "?";
}

/// Numeric payload of one diagnostic plot; rendering is out of scope.
struct PlotData {
    PlotKind kind = PlotKind::acf;
    std::vector<double> x;
    std::vector<double> y;
    std::string method;
    int selected = -1;
    /// +-1.96/sqrt(n) band for autocorrelation plots, 0 otherwise.
    double conf_band = 0.0;
};

namespace detail {

inline int default_acf_lag(int n) {
    return std::max(1, std::min(n - 1, static_cast<int>(10.0 * std::log10(n))));
}

inline PlotData residual_acf(const OlsFit& fit, int max_lag, PlotKind kind,
                             const std::string& method, int selected) {
    const AutocovSequence acv = empirical_autocov(fit.residuals, max_lag);
    PlotData plot;
    plot.kind = kind;
    plot.method = method;
    plot.selected = selected;
    plot.conf_band = 1.96 / std::sqrt(static_cast<double>(fit.n()));
    for (int k = 0; k <= max_lag; ++k) {
        plot.x.push_back(k);
        plot.y.push_back(acv.gamma[static_cast<std::size_t>(k)] / acv.gamma[0]);
    }
    return plot;
}

}  // namespace detail

/// Diagnostic plots mapped from the estimation method: fitar gives the
/// residual ACF and PACF, kernel the ACF (plus the bootstrap risk curve
/// when automatic), spectralproj the estimated density, select and
/// efromovich the ACF up to the selected order, hac nothing.
inline std::vector<PlotData> plots_for_fit(const OlsFit& fit, const CovPlugin& cov) {
    std::vector<PlotData> plots;
    const int n = fit.n();
    const int lag = detail::default_acf_lag(n);

    if (cov.method_tag == "fitar") {
        plots.push_back(detail::residual_acf(fit, lag, PlotKind::acf, cov.method_tag,
                                             cov.selected));
        const std::vector<double> pacf = partial_autocorrelations(fit.residuals, lag);
        PlotData plot;
        plot.kind = PlotKind::pacf;
        plot.method = cov.method_tag;
        plot.selected = cov.selected;
        plot.conf_band = 1.96 / std::sqrt(static_cast<double>(n));
        for (int k = 1; k <= lag; ++k) {
            plot.x.push_back(k);
            plot.y.push_back(pacf[static_cast<std::size_t>(k - 1)]);
        }
        plots.push_back(std::move(plot));
    } else if (cov.method_tag == "kernel") {
        plots.push_back(detail::residual_acf(fit, lag, PlotKind::acf, cov.method_tag,
                                             cov.selected));
        if (!cov.risk_curve.empty()) {
            PlotData risk;
            risk.kind = PlotKind::risk_curve;
            risk.method = cov.method_tag;
            risk.selected = cov.selected;
            for (std::size_t m = 0; m < cov.risk_curve.size(); ++m) {
                risk.x.push_back(static_cast<double>(m));
                risk.y.push_back(cov.risk_curve[m]);
            }
            plots.push_back(std::move(risk));
            plots.push_back(detail::residual_acf(fit, std::max(1, cov.selected),
                                                 PlotKind::selected_acf, cov.method_tag,
                                                 cov.selected));
        }
    } else if (cov.method_tag == "spectralproj") {
        PlotData density;
        density.kind = PlotKind::spectral_density;
        density.method = cov.method_tag;
        density.selected = cov.selected;
        const int d = cov.selected;
        const double scale = std::sqrt(d / M_PI);
        for (int j = 0; j < d; ++j) {
            density.x.push_back(M_PI * (j + 0.5) / d);
            density.y.push_back(cov.spectral_coeffs[static_cast<std::size_t>(j)] * scale);
        }
        plots.push_back(std::move(density));
    } else if (cov.method_tag == "select" || cov.method_tag == "efromovich") {
        int top = cov.selected;
        if (cov.method_tag == "select") {
            top = cov.selected_lags.empty() ? 0 : cov.selected_lags.back();
        }
        plots.push_back(detail::residual_acf(fit, std::max(1, top), PlotKind::selected_acf,
                                             cov.method_tag, top));
    }
    // hac, manual: no plot available.
    return plots;
}

/// Writes one plot as `<kind>.csv` in the given directory: commented
/// metadata lines, then an x,y table.
inline std::filesystem::path write_plot_csv(const PlotData& plot,
                                            const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);
    const std::filesystem::path file =
        directory / (std::string(plot_kind_name(plot.kind)) + ".csv");
    std::ofstream out(file);
    if (!out) throw FileNotFoundError("cannot write '" + file.string() + "'");
    out << "# kind=" << plot_kind_name(plot.kind) << "\n";
    out << "# method=" << plot.method << "\n";
    if (plot.selected >= 0) out << "# selected=" << plot.selected << "\n";
    if (plot.conf_band > 0.0) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", plot.conf_band);
        out << "# band=" << buf << "\n";
    }
    out << "x,y\n";
    char buf[64];
    for (std::size_t i = 0; i < plot.x.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g", plot.x[i], plot.y[i]);
        out << buf << "\n";
    }
    return file;
}

}  // namespace tsreg
