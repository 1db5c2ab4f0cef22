#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tsreg/autocov.hpp"
#include "tsreg/errors.hpp"

namespace tsreg {

/// Causal autoregressive model e_i = sum_j phi[j-1] e_{i-j} + W_i with
/// innovation variance sigma2.
struct ArModel {
    std::vector<double> phi;
    double sigma2 = 0.0;

    int order() const { return static_cast<int>(phi.size()); }
};

namespace detail {

struct LevinsonPath {
    std::vector<double> phi;         // coefficients at the final order
    std::vector<double> sigma2;      // prediction variance for orders 0..reached
    std::vector<double> reflection;  // kappa_1..kappa_reached
    int reached = 0;                 // highest order with a valid solution
};

/// Levinson-Durbin recursion on gamma[0..order]. Stops early if the
/// prediction variance degenerates (non-PD sequence); `reached` records
/// the last valid order.
inline LevinsonPath levinson_durbin(const std::vector<double>& gamma, int order) {
    LevinsonPath path;
    path.sigma2.reserve(static_cast<std::size_t>(order) + 1);
    path.sigma2.push_back(gamma[0]);
    std::vector<double> phi;
    std::vector<double> prev;
    for (int m = 1; m <= order; ++m) {
        const double err = path.sigma2.back();
        if (!(err > 0.0)) break;
        double acc = gamma[static_cast<std::size_t>(m)];
        for (int j = 1; j < m; ++j) {
            acc -= phi[static_cast<std::size_t>(j - 1)] * gamma[static_cast<std::size_t>(m - j)];
        }
        const double kappa = acc / err;
        if (!(std::abs(kappa) < 1.0)) break;
        prev = phi;
        phi.resize(static_cast<std::size_t>(m));
        phi[static_cast<std::size_t>(m - 1)] = kappa;
        for (int j = 1; j < m; ++j) {
            phi[static_cast<std::size_t>(j - 1)] =
                prev[static_cast<std::size_t>(j - 1)] - kappa * prev[static_cast<std::size_t>(m - 1 - j)];
        }
        path.reflection.push_back(kappa);
        path.sigma2.push_back(err * (1.0 - kappa * kappa));
        path.reached = m;
        path.phi = phi;
    }
    return path;
}

}  // namespace detail

/// Fits an AR(order) model to a residual series by solving the
/// Yule-Walker equations on the divisor-n empirical autocovariances via
/// Levinson-Durbin. The returned model is causal by construction
/// (reflection coefficients inside the unit interval). order = 0 returns
/// white noise with sigma2 = gamma_0.
inline ArModel fit_ar_yule_walker(const Eigen::VectorXd& residuals, int order) {
    const int n = static_cast<int>(residuals.size());
    if (order < 0 || order >= n) {
        throw InvalidArgumentError("fit_ar_yule_walker: order must lie in [0, n-1]");
    }
    const AutocovSequence acv = empirical_autocov(residuals, order);
    if (!(acv.gamma[0] > 0.0)) {
        throw DegenerateVarianceError("fit_ar_yule_walker: gamma_0 <= 0");
    }
    ArModel model;
    if (order == 0) {
        model.sigma2 = acv.gamma[0];
        return model;
    }
    const detail::LevinsonPath path = detail::levinson_durbin(acv.gamma, order);
    if (path.reached < order) {
        throw DegenerateVarianceError("fit_ar_yule_walker: Yule-Walker system degenerate at "
                                      "order " + std::to_string(path.reached + 1));
    }
    model.phi = path.phi;
    model.sigma2 = path.sigma2.back();
    return model;
}

/// Selects the AR order by AIC(p) = n ln(sigma2_p) + 2p over p in
/// [0, max_order], breaking ties toward the smaller order. Orders beyond
/// a degenerate Levinson-Durbin step are skipped.
inline int select_ar_order_aic(const Eigen::VectorXd& residuals, int max_order) {
    const int n = static_cast<int>(residuals.size());
    if (max_order < 0 || 2 * max_order >= n) {
        throw InvalidArgumentError("select_ar_order_aic: need 0 <= max_order < n/2");
    }
    const AutocovSequence acv = empirical_autocov(residuals, max_order);
    if (!(acv.gamma[0] > 0.0)) {
        throw DegenerateVarianceError("select_ar_order_aic: gamma_0 <= 0");
    }
    const detail::LevinsonPath path = detail::levinson_durbin(acv.gamma, max_order);
    int best = 0;
    double best_aic = n * std::log(acv.gamma[0]);
    for (int p = 1; p <= path.reached; ++p) {
        const double s2 = path.sigma2[static_cast<std::size_t>(p)];
        if (!(s2 > 0.0)) break;
        const double aic = n * std::log(s2) + 2.0 * p;
        if (aic < best_aic) {
            best_aic = aic;
            best = p;
        }
    }
    return best;
}

/// Theoretical autocovariances gamma(0..max_lag) of a causal AR model:
/// the Yule-Walker linear system gives gamma(0..p), the AR recursion
/// gamma(k) = sum_j phi_j gamma(k-j) extends beyond.
inline AutocovSequence ar_theoretical_autocov(const ArModel& model, int max_lag) {
    if (max_lag < 0) throw InvalidArgumentError("ar_theoretical_autocov: max_lag < 0");
    const int p = model.order();
    AutocovSequence acv;
    acv.n_source = max_lag + 1;
    acv.gamma.assign(static_cast<std::size_t>(max_lag) + 1, 0.0);

    if (p == 0) {
        acv.gamma[0] = model.sigma2;
        return acv;
    }

    // Rows k = 0..p of: gamma(k) - sum_j phi_j gamma(|k-j|) = sigma2 * 1{k=0}.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p + 1, p + 1);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(p + 1);
    b[0] = model.sigma2;
    for (int k = 0; k <= p; ++k) {
        a(k, k) += 1.0;
        for (int j = 1; j <= p; ++j) {
            a(k, std::abs(k - j)) -= model.phi[static_cast<std::size_t>(j - 1)];
        }
    }
    const Eigen::VectorXd head = a.colPivHouseholderQr().solve(b);

    const int upto = std::min(max_lag, p);
    for (int k = 0; k <= upto; ++k) acv.gamma[static_cast<std::size_t>(k)] = head[k];
    for (int k = p + 1; k <= max_lag; ++k) {
        double value = 0.0;
        for (int j = 1; j <= p; ++j) {
            value += model.phi[static_cast<std::size_t>(j - 1)] *
                     acv.gamma[static_cast<std::size_t>(k - j)];
        }
        acv.gamma[static_cast<std::size_t>(k)] = value;
    }
    return acv;
}

/// Partial autocorrelations at lags 1..max_lag (the Levinson-Durbin
/// reflection coefficients of the empirical autocovariances).
inline std::vector<double> partial_autocorrelations(const Eigen::VectorXd& residuals,
                                                    int max_lag) {
    const AutocovSequence acv = empirical_autocov(residuals, max_lag);
    if (!(acv.gamma[0] > 0.0)) {
        throw DegenerateVarianceError("partial_autocorrelations: gamma_0 <= 0");
    }
    detail::LevinsonPath path = detail::levinson_durbin(acv.gamma, max_lag);
    path.reflection.resize(static_cast<std::size_t>(max_lag), 0.0);
    return path.reflection;
}

}  // namespace tsreg
