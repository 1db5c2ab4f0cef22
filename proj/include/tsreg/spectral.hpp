#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "tsreg/autocov.hpp"
#include "tsreg/errors.hpp"

namespace tsreg {

/// Projection of the spectral density onto the histogram basis
/// phi_j^(d) = sqrt(d/pi) * 1_{[pi j/d, pi (j+1)/d)}, j = 0..d-1.
struct SpectralProjection {
    int dimension = 1;
    std::vector<double> coeffs;

    /// Value of the projected density at frequency lambda in [0, pi).
    double density(double lambda) const {
        if (lambda < 0.0 || lambda >= M_PI) return 0.0;
        int j = static_cast<int>(lambda * dimension / M_PI);
        if (j >= dimension) j = dimension - 1;
        return coeffs[static_cast<std::size_t>(j)] * std::sqrt(dimension / M_PI);
    }
};

/// Projection coefficients computed from the full-lag residual
/// autocovariances:
///   a_j = sqrt(d/pi) (gamma_0/(2d)
///         + (1/pi) sum_{r>=1} (gamma_r/r) [sin(pi(j+1)r/d) - sin(pi j r/d)]).
inline SpectralProjection spectral_proj_coeffs(const AutocovSequence& acv, int d) {
    if (d < 1) throw InvalidArgumentError("spectral_proj_coeffs: d must be >= 1");
    if (acv.max_lag() != acv.n_source - 1) {
        throw InvalidArgumentError("spectral_proj_coeffs: sequence must carry all lags 0..n-1");
    }
    const int n = acv.n_source;
    const double scale = std::sqrt(d / M_PI);

    // s[j] = sum_r (gamma_r / r) sin(pi j r / d), j = 0..d; a_j uses s[j+1]-s[j].
    std::vector<double> s(static_cast<std::size_t>(d) + 1, 0.0);
    for (int j = 1; j <= d; ++j) {
        const double freq = M_PI * j / d;
        double acc = 0.0;
        for (int r = 1; r <= n - 1; ++r) {
            acc += acv.gamma[static_cast<std::size_t>(r)] / r * std::sin(freq * r);
        }
        s[static_cast<std::size_t>(j)] = acc;
    }

    SpectralProjection proj;
    proj.dimension = d;
    proj.coeffs.resize(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        proj.coeffs[static_cast<std::size_t>(j)] =
            scale * (acv.gamma[0] / (2.0 * d) +
                     (s[static_cast<std::size_t>(j + 1)] - s[static_cast<std::size_t>(j)]) / M_PI);
    }
    return proj;
}

/// Autocovariances of the projected density:
///   gamma_0 = 2 sqrt(pi/d) sum_j a_j,
///   gamma_k = (2/k) sqrt(d/pi) sum_j a_j [sin(k pi (j+1)/d) - sin(k pi j/d)].
inline AutocovSequence spectral_reconstruct_autocov(const SpectralProjection& proj,
                                                    int max_lag) {
    if (max_lag < 0) throw InvalidArgumentError("spectral_reconstruct_autocov: max_lag < 0");
    const int d = proj.dimension;
    AutocovSequence acv;
    acv.n_source = max_lag + 1;
    acv.gamma.resize(static_cast<std::size_t>(max_lag) + 1);

    double coeff_sum = 0.0;
    for (double a : proj.coeffs) coeff_sum += a;
    acv.gamma[0] = 2.0 * std::sqrt(M_PI / d) * coeff_sum;

    const double scale = std::sqrt(d / M_PI);
    for (int k = 1; k <= max_lag; ++k) {
        double acc = 0.0;
        for (int j = 0; j < d; ++j) {
            acc += proj.coeffs[static_cast<std::size_t>(j)] *
                   (std::sin(k * M_PI * (j + 1) / d) - std::sin(k * M_PI * j / d));
        }
        acv.gamma[static_cast<std::size_t>(k)] = 2.0 / k * scale * acc;
    }
    return acv;
}

/// Data-driven dimension choice by the penalized criterion
/// crit(d) = -sum_j a_j^2 + c d/n with the penalty constant calibrated by
/// the slope heuristic (regression variant): c = 2 |slope| where slope is
/// the least-squares slope of the contrast against d/n over the largest
/// half of the candidate dimensions. Ties break toward the smaller d.
inline int select_spectral_dim(const AutocovSequence& acv, int model_max, int n) {
    if (n < 1) throw InvalidArgumentError("select_spectral_dim: n must be >= 1");
    if (model_max < 1) throw InvalidArgumentError("select_spectral_dim: model_max must be >= 1");
    if (model_max == 1) return 1;

    std::vector<double> contrast(static_cast<std::size_t>(model_max) + 1, 0.0);
    for (int d = 1; d <= model_max; ++d) {
        const SpectralProjection proj = spectral_proj_coeffs(acv, d);
        double sq = 0.0;
        for (double a : proj.coeffs) sq += a * a;
        contrast[static_cast<std::size_t>(d)] = -sq;
    }

    const int half_start = model_max / 2 + 1;
    double mean_x = 0.0, mean_y = 0.0;
    int count = 0;
    for (int d = half_start; d <= model_max; ++d) {
        mean_x += static_cast<double>(d) / n;
        mean_y += contrast[static_cast<std::size_t>(d)];
        ++count;
    }
    mean_x /= count;
    mean_y /= count;
    double sxy = 0.0, sxx = 0.0;
    for (int d = half_start; d <= model_max; ++d) {
        const double dx = static_cast<double>(d) / n - mean_x;
        sxy += dx * (contrast[static_cast<std::size_t>(d)] - mean_y);
        sxx += dx * dx;
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    const double penalty = 2.0 * std::abs(slope);

    int best = 1;
    double best_crit = contrast[1] + penalty * 1.0 / n;
    for (int d = 2; d <= model_max; ++d) {
        const double crit = contrast[static_cast<std::size_t>(d)] + penalty * d / n;
        if (crit < best_crit) {
            best_crit = crit;
            best = d;
        }
    }
    return best;
}

}  // namespace tsreg
