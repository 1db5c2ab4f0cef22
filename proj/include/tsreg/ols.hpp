#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tsreg/autocov.hpp"
#include "tsreg/errors.hpp"

namespace tsreg {

/// Response vector and design matrix of a linear model. When an intercept
/// is requested the all-ones column is the first column of x and is
/// treated like any other column.
struct RegressionData {
    Eigen::VectorXd y;
    Eigen::MatrixXd x;
    std::vector<std::string> column_names;
    bool intercept = false;
};

/// A fitted least-squares regression together with everything downstream
/// inference needs: the column norms d_j(n), (X^t X)^{-1} and the design
/// itself (kept for the covariance plug-in).
struct OlsFit {
    Eigen::VectorXd beta_hat;
    Eigen::VectorXd residuals;
    Eigen::VectorXd d_n;
    Eigen::MatrixXd xtx_inv;
    double rss = 0.0;
    double tss = 0.0;
    double r_squared = 0.0;

    Eigen::MatrixXd x;
    std::vector<std::string> column_names;
    bool intercept = false;

    int n() const { return static_cast<int>(x.rows()); }
    int p() const { return static_cast<int>(x.cols()); }
};

/// Least-squares fit via a thin SVD (orthogonal decomposition; the normal
/// equations are never formed). Numerical rank is checked through the
/// singular-value ratio with tolerance 1e-10.
inline OlsFit fit_ols(const RegressionData& data) {
    const int n = static_cast<int>(data.x.rows());
    const int p = static_cast<int>(data.x.cols());
    if (static_cast<int>(data.y.size()) != n) {
        throw DimensionMismatchError("fit_ols: len(y) = " + std::to_string(data.y.size()) +
                                     " but design has " + std::to_string(n) + " rows");
    }
    if (p < 1 || n <= p) {
        throw DimensionMismatchError("fit_ols: need n > p >= 1, got n = " +
                                     std::to_string(n) + ", p = " + std::to_string(p));
    }
    if (!data.y.allFinite() || !data.x.allFinite()) {
        throw InvalidArgumentError("fit_ols: non-finite entries in y or x");
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(data.x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (sv[0] <= 0.0 || sv[p - 1] / sv[0] < 1e-10) {
        throw RankDeficientError("fit_ols: design is numerically rank deficient "
                                 "(singular-value ratio below 1e-10)");
    }

    OlsFit fit;
    fit.beta_hat = svd.solve(data.y);
    fit.residuals = data.y - data.x * fit.beta_hat;
    fit.d_n = data.x.colwise().norm();
    fit.xtx_inv = svd.matrixV() * sv.array().square().inverse().matrix().asDiagonal() *
                  svd.matrixV().transpose();
    fit.rss = fit.residuals.squaredNorm();
    if (data.intercept) {
        fit.tss = (data.y.array() - data.y.mean()).matrix().squaredNorm();
    } else {
        fit.tss = data.y.squaredNorm();
    }
    if (fit.tss > 0.0) {
        fit.r_squared = std::max(0.0, 1.0 - fit.rss / fit.tss);
    } else {
        // Constant-zero response: the fit is exact.
        fit.r_squared = 1.0;
    }
    fit.x = data.x;
    fit.column_names = data.column_names;
    fit.intercept = data.intercept;
    return fit;
}

/// Symmetric p x p covariance estimate of D(n) (beta_hat - beta).
struct CovPlugin {
    Eigen::MatrixXd c_hat;
    bool projected = false;
    /// Set by the manual method when the unprojected estimate is indefinite.
    bool indefinite_warning = false;
    std::string method_tag;
    /// Selected order / lag / dimension, -1 when not applicable.
    int selected = -1;
    /// Selected lag set of the masked-covariance method (always holds 0).
    std::vector<int> selected_lags;
    /// Data-driven bandwidth of the hac method.
    double bandwidth = 0.0;
    /// Autocovariance sequence actually plugged in (empty for full-matrix input).
    std::vector<double> gamma_used;
    /// Bootstrap risk per candidate lag (kernel method, automatic selection).
    std::vector<double> risk_curve;
    /// Histogram-basis projection coefficients (spectralproj method).
    std::vector<double> spectral_coeffs;
};

namespace detail {

/// X^t Gamma X for a banded Toeplitz Gamma given by an autocovariance
/// vector; cost O(n m p + n p^2), Gamma is never materialized.
inline Eigen::MatrixXd design_sandwich_banded(const Eigen::MatrixXd& x,
                                              const AutocovSequence& acv) {
    const int n = static_cast<int>(x.rows());
    const int m = std::min(acv.max_lag(), n - 1);
    Eigen::MatrixXd wx = acv.gamma[0] * x;
    for (int k = 1; k <= m; ++k) {
        const double g = acv.gamma[static_cast<std::size_t>(k)];
        if (g == 0.0) continue;
        wx.topRows(n - k) += g * x.bottomRows(n - k);
        wx.bottomRows(n - k) += g * x.topRows(n - k);
    }
    return x.transpose() * wx;
}

inline Eigen::MatrixXd sandwich_to_c_hat(const OlsFit& fit, const Eigen::MatrixXd& xtgx) {
    Eigen::MatrixXd c = fit.d_n.asDiagonal() * fit.xtx_inv * xtgx * fit.xtx_inv *
                        fit.d_n.asDiagonal();
    return 0.5 * (c + c.transpose());
}

}  // namespace detail

/// Plug-in covariance D(n) (X^t X)^{-1} X^t Gamma X (X^t X)^{-1} D(n) for a
/// Toeplitz Gamma described by an autocovariance vector (banded path).
inline CovPlugin plugin_covariance(const OlsFit& fit, const AutocovSequence& acv) {
    if (acv.gamma.empty()) throw InvalidArgumentError("plugin_covariance: empty sequence");
    CovPlugin plug;
    plug.c_hat = detail::sandwich_to_c_hat(fit, detail::design_sandwich_banded(fit.x, acv));
    plug.gamma_used = acv.gamma;
    return plug;
}

/// Plug-in covariance for a user-supplied full n x n matrix Gamma.
inline CovPlugin plugin_covariance(const OlsFit& fit, const Eigen::MatrixXd& gamma_full) {
    const int n = fit.n();
    if (gamma_full.rows() != n || gamma_full.cols() != n) {
        throw DimensionMismatchError("plugin_covariance: Gamma must be n x n");
    }
    const double scale = gamma_full.cwiseAbs().maxCoeff();
    const double asym = (gamma_full - gamma_full.transpose()).cwiseAbs().maxCoeff();
    if (scale > 0.0 && asym > 1e-8 * scale) {
        throw NotSymmetricError("plugin_covariance: Gamma deviates from symmetry beyond "
                                "1e-8 relative");
    }
    CovPlugin plug;
    plug.c_hat = detail::sandwich_to_c_hat(fit, fit.x.transpose() * gamma_full * fit.x);
    return plug;
}

/// Report of the rescaling sanity check: refitting with c*y must scale
/// beta_hat by c and leave R^2 unchanged.
struct ScaleFreeReport {
    double max_beta_rel_err = 0.0;
    double r_squared_delta = 0.0;
    bool pass = false;
};

inline ScaleFreeReport scale_free_check(const OlsFit& fit, double c) {
    if (!(c > 0.0)) throw InvalidArgumentError("scale_free_check: c must be > 0");
    RegressionData scaled;
    scaled.y = c * (fit.x * fit.beta_hat + fit.residuals);
    scaled.x = fit.x;
    scaled.column_names = fit.column_names;
    scaled.intercept = fit.intercept;
    const OlsFit refit = fit_ols(scaled);

    ScaleFreeReport report;
    const double beta_scale = std::max(c * fit.beta_hat.cwiseAbs().maxCoeff(), 1e-300);
    for (int j = 0; j < fit.p(); ++j) {
        const double expected = c * fit.beta_hat[j];
        const double denom = std::max(std::abs(expected), 1e-6 * beta_scale);
        report.max_beta_rel_err =
            std::max(report.max_beta_rel_err, std::abs(refit.beta_hat[j] - expected) / denom);
    }
    report.r_squared_delta = std::abs(refit.r_squared - fit.r_squared);
    report.pass = report.max_beta_rel_err < 1e-9 && report.r_squared_delta < 1e-10;
    return report;
}

}  // namespace tsreg
