#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tsreg/ar.hpp"
#include "tsreg/autocov.hpp"
#include "tsreg/errors.hpp"
#include "tsreg/ols.hpp"
#include "tsreg/rng.hpp"
#include "tsreg/spectral.hpp"

namespace tsreg {

enum class CovMethod { fit_ar, kernel, efromovich, hac, spectral_proj, select_lags, manual };

inline const char* cov_method_name(CovMethod method) {
    switch (method) {
        case CovMethod::fit_ar: return "fitar";
        case CovMethod::kernel: return "kernel";
        case CovMethod::efromovich: return "efromovich";
        case CovMethod::hac: return "hac";
        case CovMethod::spectral_proj: return "spectralproj";
        case CovMethod::select_lags: return "select";
        case CovMethod::manual: return "manual";
    }
    return "?";
}

/// Configuration of a covariance-estimation strategy. Only the fields
/// relevant to `method` are consulted.
struct MethodConfig {
    CovMethod method = CovMethod::fit_ar;
    /// Order / lag / dimension; -1 requests the automatic selection.
    int model_selec = -1;
    /// Positive lags kept by the select method (lag 0 is always kept).
    std::vector<int> lag_set;
    /// Kernel of the kernel method; its bandwidth field is derived from
    /// the selected lag (h = lag + 1) and need not be set.
    KernelSpec kernel{KernelKind::triangle, 1.0, 0.5, nullptr};
    /// Cap on the order / lag / dimension search; 0 picks a default.
    int model_max = 0;
    /// Bootstrap block size; 0 picks the default floor(n/2).
    int block_size = 0;
    /// Number of bootstrap blocks; 0 picks the default 100.
    int block_n = 0;
    /// Manual method: autocovariance vector (lags 0..len-1)...
    std::vector<double> user_gamma;
    /// ...or a full n x n covariance matrix (takes precedence if non-empty).
    Eigen::MatrixXd user_matrix;
};

namespace detail {

inline int default_ar_model_max(int n) {
    const int cap = (n - 1) / 2;  // AIC search requires max_order < n/2
    const int rule = static_cast<int>(10.0 * std::log10(static_cast<double>(n)));
    return std::max(1, std::min(rule, cap));
}

inline int default_lag_model_max(int n, int block_size) {
    return std::max(1, std::min({n - 2, 30, block_size - 1}));
}

inline int default_spectral_model_max(int n) {
    return std::max(1, std::min(50, n / 2));
}

/// Drops the exactly-zero tail so the banded plug-in path only walks the
/// effective bandwidth.
inline AutocovSequence trim_zero_tail(AutocovSequence acv) {
    std::size_t last = acv.gamma.size();
    while (last > 1 && acv.gamma[last - 1] == 0.0) --last;
    acv.gamma.resize(last);
    return acv;
}

inline void apply_projection(CovPlugin& plug) {
    auto [projected_matrix, changed] = pd_projection(plug.c_hat);
    plug.c_hat = std::move(projected_matrix);
    plug.projected = changed;
}

}  // namespace detail

/// Bootstrap risk curve and selected lag for banded/tapered covariance
/// estimation. For every candidate lag m the risk is
///   (1/block_n) sum_b sum_{k=0}^{model_max}
///       (K(k/(m+1)) gamma_k^(b) - gamma_k)^2,
/// where gamma^(b) are the autocovariances of a uniformly drawn
/// contiguous block of length block_size (divisor block_size) and gamma
/// the full-sample autocovariances. The same blocks are reused for every
/// candidate, so the curve is smooth in m and deterministic given the rng.
struct BootstrapSelection {
    int lag = 0;
    std::vector<double> risk;
};

inline BootstrapSelection bootstrap_bandwidth(const Eigen::VectorXd& residuals,
                                              const KernelSpec& kernel, int model_max,
                                              int block_size, int block_n, Rng& rng) {
    const int n = static_cast<int>(residuals.size());
    if (block_size < 1 || block_size > n) {
        throw BlockTooSmallError("bootstrap_bandwidth: block_size must lie in [1, n]");
    }
    if (model_max > block_size - 1) {
        throw BlockTooSmallError("bootstrap_bandwidth: need model_max <= block_size - 1");
    }
    if (block_n < 1) throw InvalidArgumentError("bootstrap_bandwidth: block_n must be >= 1");
    if (model_max < 0) throw InvalidArgumentError("bootstrap_bandwidth: model_max must be >= 0");
    validate_kernel(kernel);

    const AutocovSequence full = empirical_autocov(residuals, model_max);

    std::vector<AutocovSequence> block_acv;
    block_acv.reserve(static_cast<std::size_t>(block_n));
    const std::uint64_t starts = static_cast<std::uint64_t>(n - block_size + 1);
    for (int b = 0; b < block_n; ++b) {
        const auto start = static_cast<Eigen::Index>(rng.uniform_below(starts));
        block_acv.push_back(
            empirical_autocov(residuals.segment(start, block_size), model_max));
    }

    BootstrapSelection selection;
    selection.risk.resize(static_cast<std::size_t>(model_max) + 1);
    double best = std::numeric_limits<double>::infinity();
    for (int m = 0; m <= model_max; ++m) {
        const double h = static_cast<double>(m) + 1.0;
        double risk = 0.0;
        for (const AutocovSequence& blk : block_acv) {
            for (int k = 0; k <= model_max; ++k) {
                const double diff = taper_weight(kernel, k, h) *
                                        blk.gamma[static_cast<std::size_t>(k)] -
                                    full.gamma[static_cast<std::size_t>(k)];
                risk += diff * diff;
            }
        }
        risk /= block_n;
        selection.risk[static_cast<std::size_t>(m)] = risk;
        if (risk < best) {
            best = risk;
            selection.lag = m;
        }
    }
    return selection;
}

/// Least-squares estimate of the regularity index r from the decay of the
/// residual autocovariances: fits ln|gamma_k| ~ a - k/(2r) over the lags
/// with |gamma_k| > 2 gamma_0 / sqrt(n). Falls back to r = 1 when fewer
/// than two lags qualify or no decay is detected.
inline double efromovich_regularity(const Eigen::VectorXd& residuals) {
    const int n = static_cast<int>(residuals.size());
    const AutocovSequence acv = empirical_autocov(residuals, n - 1);
    if (!(acv.gamma[0] > 0.0)) return 1.0;
    const double floor_level = 2.0 * acv.gamma[0] / std::sqrt(static_cast<double>(n));

    std::vector<std::pair<double, double>> points;
    for (int k = 1; k <= n - 1; ++k) {
        const double g = std::abs(acv.gamma[static_cast<std::size_t>(k)]);
        if (g > floor_level) points.emplace_back(static_cast<double>(k), std::log(g));
    }
    if (points.size() < 2) return 1.0;

    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& [x, y] : points) {
        mean_x += x;
        mean_y += y;
    }
    mean_x /= static_cast<double>(points.size());
    mean_y /= static_cast<double>(points.size());
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [x, y] : points) {
        sxy += (x - mean_x) * (y - mean_y);
        sxx += (x - mean_x) * (x - mean_x);
    }
    if (!(sxx > 0.0)) return 1.0;
    const double slope = sxy / sxx;
    if (!(slope < 0.0)) return 1.0;
    return -1.0 / (2.0 * slope);
}

/// J_nr = log(n)/(2r) [1 + log(n)^{-1/2}], floored and clamped to
/// [1, model_max].
inline int efromovich_lag_from_r(double r, int n, int model_max) {
    if (n < 8) throw InvalidArgumentError("efromovich: n must be >= 8");
    if (!(r > 0.0)) throw InvalidArgumentError("efromovich: r must be > 0");
    const double log_n = std::log(static_cast<double>(n));
    const double j = log_n / (2.0 * r) * (1.0 + 1.0 / std::sqrt(log_n));
    const int lag = static_cast<int>(std::floor(j));
    return std::clamp(lag, 1, std::max(1, model_max));
}

/// Lag choice of the Efromovich method (estimated regularity index,
/// rectangular kernel downstream).
inline int efromovich_lag(const Eigen::VectorXd& residuals, int model_max) {
    const int n = static_cast<int>(residuals.size());
    return efromovich_lag_from_r(efromovich_regularity(residuals), n, model_max);
}

/// Data-driven quadratic spectral bandwidth of Andrews (1991) for a
/// single AR(1)-fitted series with unit weight:
///   alpha(2) = 4 phi^2 / (1-phi)^4,  S = 1.3221 (alpha(2) n)^{1/5},
/// floored at 1 so the white-noise edge stays well defined.
inline double andrews_bandwidth(double phi, int n) {
    if (std::abs(1.0 - phi) < 1e-6) {
        throw DegenerateVarianceError("hac: AR(1) coefficient numerically 1");
    }
    const double one_minus = 1.0 - phi;
    const double alpha2 = 4.0 * phi * phi / (one_minus * one_minus * one_minus * one_minus);
    const double s = 1.3221 * std::pow(alpha2 * static_cast<double>(n), 0.2);
    return std::max(s, 1.0);
}

namespace detail {

inline CovPlugin finish_tapered(const OlsFit& fit, const AutocovSequence& tapered,
                                const char* tag) {
    CovPlugin plug = plugin_covariance(fit, trim_zero_tail(tapered));
    plug.method_tag = tag;
    apply_projection(plug);
    return plug;
}

}  // namespace detail

/// fitAR: AR fit on the residuals (explicit order or AIC), theoretical
/// autocovariances to lag n-1, plug-in.
inline CovPlugin method_fit_ar(const OlsFit& fit, const MethodConfig& config) {
    const int n = fit.n();
    int order = config.model_selec;
    if (order >= 0) {
        if (2 * order >= n) {
            throw InvalidArgumentError("fitar: order must be below n/2");
        }
    } else {
        const int cap = config.model_max > 0 ? config.model_max
                                             : detail::default_ar_model_max(n);
        order = select_ar_order_aic(fit.residuals, cap);
    }
    const ArModel model = fit_ar_yule_walker(fit.residuals, order);
    const AutocovSequence acv = ar_theoretical_autocov(model, n - 1);
    CovPlugin plug = plugin_covariance(fit, detail::trim_zero_tail(acv));
    plug.method_tag = cov_method_name(CovMethod::fit_ar);
    plug.selected = order;
    detail::apply_projection(plug);  // AR covariance is PD; expected no-op
    return plug;
}

/// kernel: tapered empirical autocovariances with h = lag + 1; the lag is
/// explicit or chosen by the block bootstrap.
inline CovPlugin method_kernel(const OlsFit& fit, const MethodConfig& config, Rng& rng) {
    const int n = fit.n();
    KernelSpec kernel = config.kernel;
    int lag = config.model_selec;
    std::vector<double> risk;
    if (lag < 0) {
        const int block_size = config.block_size > 0 ? config.block_size : n / 2;
        const int block_n = config.block_n > 0 ? config.block_n : 100;
        const int model_max = config.model_max > 0
                                  ? config.model_max
                                  : detail::default_lag_model_max(n, block_size);
        BootstrapSelection selection =
            bootstrap_bandwidth(fit.residuals, kernel, model_max, block_size, block_n, rng);
        lag = selection.lag;
        risk = std::move(selection.risk);
    } else if (lag > n - 1) {
        throw LagOutOfRangeError("kernel: lag must lie in [0, n-1]");
    }
    kernel.bandwidth = static_cast<double>(lag) + 1.0;
    const AutocovSequence tapered =
        tapered_sequence(empirical_autocov(fit.residuals, n - 1), kernel);
    CovPlugin plug = detail::finish_tapered(fit, tapered, cov_method_name(CovMethod::kernel));
    plug.selected = lag;
    plug.risk_curve = std::move(risk);
    return plug;
}

/// efromovich: rectangular kernel with the minimax lag rule.
inline CovPlugin method_efromovich(const OlsFit& fit, const MethodConfig& config) {
    const int n = fit.n();
    const int model_max = config.model_max > 0 ? config.model_max
                                               : std::max(1, std::min(50, n - 1));
    const int lag = config.model_selec >= 0
                        ? std::clamp(config.model_selec, 1, model_max)
                        : efromovich_lag(fit.residuals, model_max);
    KernelSpec kernel{KernelKind::rectangular, static_cast<double>(lag) + 1.0, 0.5, nullptr};
    const AutocovSequence tapered =
        tapered_sequence(empirical_autocov(fit.residuals, n - 1), kernel);
    CovPlugin plug =
        detail::finish_tapered(fit, tapered, cov_method_name(CovMethod::efromovich));
    plug.selected = lag;
    return plug;
}

/// hac: quadratic spectral kernel over all lags with the Andrews
/// plug-in bandwidth.
inline CovPlugin hac_andrews(const OlsFit& fit) {
    const int n = fit.n();
    const AutocovSequence head = empirical_autocov(fit.residuals, 1);
    if (!(head.gamma[0] > 0.0)) {
        throw DegenerateVarianceError("hac: residual variance is zero");
    }
    const double phi = head.gamma[1] / head.gamma[0];
    const double bandwidth = andrews_bandwidth(phi, n);

    KernelSpec kernel{KernelKind::quadratic_spectral, bandwidth, 0.5, nullptr};
    const AutocovSequence tapered =
        tapered_sequence(empirical_autocov(fit.residuals, n - 1), kernel);
    CovPlugin plug = detail::finish_tapered(fit, tapered, cov_method_name(CovMethod::hac));
    plug.bandwidth = bandwidth;
    return plug;
}

/// select: masked empirical autocovariances, keeping lag 0 plus the given
/// positive lags.
inline CovPlugin method_select_lags(const OlsFit& fit, const std::vector<int>& lags) {
    const int n = fit.n();
    std::set<int> kept;
    for (int lag : lags) {
        if (lag < 1 || lag > n - 1) {
            throw LagOutOfRangeError("select: lags must lie in [1, n-1]");
        }
        if (!kept.insert(lag).second) {
            throw InvalidArgumentError("select: duplicate lag " + std::to_string(lag));
        }
    }
    const int top = kept.empty() ? 0 : *kept.rbegin();
    const AutocovSequence full = empirical_autocov(fit.residuals, top);
    AutocovSequence masked;
    masked.n_source = full.n_source;
    masked.gamma.assign(static_cast<std::size_t>(top) + 1, 0.0);
    masked.gamma[0] = full.gamma[0];
    for (int lag : kept) {
        masked.gamma[static_cast<std::size_t>(lag)] = full.gamma[static_cast<std::size_t>(lag)];
    }

    CovPlugin plug = plugin_covariance(fit, masked);
    plug.method_tag = cov_method_name(CovMethod::select_lags);
    detail::apply_projection(plug);
    plug.selected_lags.push_back(0);
    plug.selected_lags.insert(plug.selected_lags.end(), kept.begin(), kept.end());
    return plug;
}

/// spectralproj: histogram-basis density projection, dimension explicit
/// or chosen by the slope heuristic, autocovariances reconstructed from
/// the projection.
inline CovPlugin method_spectral_proj(const OlsFit& fit, const MethodConfig& config) {
    const int n = fit.n();
    const AutocovSequence acv = empirical_autocov(fit.residuals, n - 1);
    int d = config.model_selec;
    const int model_max = config.model_max > 0 ? config.model_max
                                               : detail::default_spectral_model_max(n);
    if (d < 1) d = select_spectral_dim(acv, model_max, n);
    const SpectralProjection proj = spectral_proj_coeffs(acv, d);
    AutocovSequence rebuilt = spectral_reconstruct_autocov(proj, n - 1);
    rebuilt.n_source = n;

    CovPlugin plug = plugin_covariance(fit, rebuilt);
    plug.method_tag = cov_method_name(CovMethod::spectral_proj);
    plug.selected = d;
    plug.spectral_coeffs = proj.coeffs;
    detail::apply_projection(plug);
    return plug;
}

/// manual: direct plug-in of a user autocovariance vector or full matrix.
/// No projection is applied; an indefinite result only raises a warning
/// flag.
inline CovPlugin method_manual(const OlsFit& fit, const MethodConfig& config) {
    const int n = fit.n();
    CovPlugin plug;
    if (config.user_matrix.size() > 0) {
        plug = plugin_covariance(fit, config.user_matrix);
    } else {
        if (config.user_gamma.empty() ||
            static_cast<int>(config.user_gamma.size()) > n) {
            throw InvalidArgumentError("manual: gamma vector must have length in [1, n]");
        }
        AutocovSequence acv;
        acv.n_source = n;
        acv.gamma = config.user_gamma;
        plug = plugin_covariance(fit, acv);
    }
    plug.method_tag = cov_method_name(CovMethod::manual);
    plug.projected = false;
    const Eigen::VectorXd eigenvalues =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(plug.c_hat).eigenvalues();
    plug.indefinite_warning = eigenvalues.minCoeff() <= 0.0;
    return plug;
}

/// Dispatch on the configured method. The rng is consumed only by the
/// kernel method with automatic lag selection.
inline CovPlugin estimate_covariance(const OlsFit& fit, const MethodConfig& config, Rng& rng) {
    switch (config.method) {
        case CovMethod::fit_ar: return method_fit_ar(fit, config);
        case CovMethod::kernel: return method_kernel(fit, config, rng);
        case CovMethod::efromovich: return method_efromovich(fit, config);
        case CovMethod::hac: return hac_andrews(fit);
        case CovMethod::spectral_proj: return method_spectral_proj(fit, config);
        case CovMethod::select_lags: return method_select_lags(fit, config.lag_set);
        case CovMethod::manual: return method_manual(fit, config);
    }
    throw InvalidArgumentError("estimate_covariance: unknown method");
}

}  // namespace tsreg
