#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tsreg/errors.hpp"

namespace tsreg {

/// Residual-based empirical autocovariances gamma[k], k = 0..max_lag.
///
/// n_source is the length of the series that produced the sequence and
/// bounds the size of any Toeplitz expansion.
struct AutocovSequence {
    std::vector<double> gamma;
    int n_source = 0;

    int max_lag() const { return static_cast<int>(gamma.size()) - 1; }

    /// Lag value, zero beyond max_lag.
    double at(int k) const {
        const int a = std::abs(k);
        return a <= max_lag() ? gamma[static_cast<std::size_t>(a)] : 0.0;
    }
};

enum class KernelKind { rectangular, triangle, trapeze, quadratic_spectral, user };

inline const char* kernel_kind_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::rectangular: return "rectangular";
        case KernelKind::triangle: return "triangle";
        case KernelKind::trapeze: return "trapeze";
        case KernelKind::quadratic_spectral: return "quadratic_spectral";
        case KernelKind::user: return "user";
    }
    return "?";
}

/// Taper kernel K plus its bandwidth h. K(0) = 1 for every kind;
/// compact-support kinds vanish for |x| > 1.
struct KernelSpec {
    KernelKind kind = KernelKind::triangle;
    double bandwidth = 1.0;
    double trapeze_delta = 0.5;
    std::function<double(double)> user_fn;

    bool compact_support() const {
        return kind == KernelKind::rectangular || kind == KernelKind::triangle ||
               kind == KernelKind::trapeze;
    }
};

/// Validates a kernel spec; user kernels must satisfy K(0) = 1.
inline void validate_kernel(const KernelSpec& spec) {
    if (!(spec.bandwidth > 0.0)) {
        throw InvalidArgumentError("kernel: bandwidth must be > 0");
    }
    if (spec.kind == KernelKind::trapeze &&
        !(spec.trapeze_delta > 0.0 && spec.trapeze_delta < 1.0)) {
        throw InvalidArgumentError("kernel: trapeze delta must lie in (0,1)");
    }
    if (spec.kind == KernelKind::user) {
        if (!spec.user_fn) throw InvalidArgumentError("kernel: user function missing");
        if (std::abs(spec.user_fn(0.0) - 1.0) > 1e-12) {
            throw InvalidArgumentError("kernel: user kernel must satisfy K(0) = 1");
        }
    }
}

/// Evaluates the kernel shape K(x).
inline double kernel_eval(const KernelSpec& spec, double x) {
    const double ax = std::abs(x);
    switch (spec.kind) {
        case KernelKind::rectangular:
            return ax <= 1.0 ? 1.0 : 0.0;
        case KernelKind::triangle:
            return ax <= 1.0 ? 1.0 - ax : 0.0;
        case KernelKind::trapeze: {
            const double delta = spec.trapeze_delta;
            if (ax <= delta) return 1.0;
            if (ax <= 1.0) return (1.0 - ax) / (1.0 - delta);
            return 0.0;
        }
        case KernelKind::quadratic_spectral: {
            // K(x) = 25/(12 pi^2 x^2) * (sin(6 pi x/5)/(6 pi x/5) - cos(6 pi x/5)).
            // Series about 0 avoids the 0/0; K(0) = 1.
            const double z = 1.2 * M_PI * ax;
            if (ax < 1e-4) {
                const double z2 = z * z;
                return 1.0 - z2 / 10.0 + z2 * z2 / 280.0;
            }
            return 3.0 / (z * z) * (std::sin(z) / z - std::cos(z));
        }
        case KernelKind::user:
            return spec.user_fn(x);
    }
    return 0.0;
}

/// Taper weight applied to lag k at bandwidth h. Compact-support kernels
/// cut to exactly zero from lag h on, which realizes the banded structure
/// (the rectangular kernel would otherwise keep lag k = h since K(1) = 1).
inline double taper_weight(const KernelSpec& spec, int k, double h) {
    if (spec.compact_support() && static_cast<double>(k) >= h) return 0.0;
    return kernel_eval(spec, static_cast<double>(k) / h);
}

/// Empirical autocovariances of a residual series with divisor n at every
/// lag: gamma[k] = (1/n) * sum_{j=1}^{n-k} e_j e_{j+k}.
inline AutocovSequence empirical_autocov(const Eigen::VectorXd& residuals, int max_lag) {
    const int n = static_cast<int>(residuals.size());
    if (n < 1) throw InvalidArgumentError("empirical_autocov: empty series");
    if (max_lag < 0 || max_lag > n - 1) {
        throw LagOutOfRangeError("empirical_autocov: max_lag must lie in [0, n-1], got " +
                                 std::to_string(max_lag) + " for n = " + std::to_string(n));
    }
    AutocovSequence acv;
    acv.n_source = n;
    acv.gamma.resize(static_cast<std::size_t>(max_lag) + 1);
    for (int k = 0; k <= max_lag; ++k) {
        acv.gamma[static_cast<std::size_t>(k)] =
            residuals.head(n - k).dot(residuals.tail(n - k)) / n;
    }
    return acv;
}

/// Applies K(k/h) to each lag of the sequence.
inline AutocovSequence tapered_sequence(const AutocovSequence& acv, const KernelSpec& spec) {
    validate_kernel(spec);
    AutocovSequence out;
    out.n_source = acv.n_source;
    out.gamma.resize(acv.gamma.size());
    for (int k = 0; k <= acv.max_lag(); ++k) {
        out.gamma[static_cast<std::size_t>(k)] =
            taper_weight(spec, k, spec.bandwidth) * acv.gamma[static_cast<std::size_t>(k)];
    }
    return out;
}

/// Constant-diagonal (Toeplitz) expansion: entry (j,l) = gamma[|j-l|].
inline Eigen::MatrixXd toeplitz_expand(const AutocovSequence& acv, int n) {
    if (n < 1 || n > acv.n_source) {
        throw InvalidArgumentError("toeplitz_expand: n must lie in [1, n_source]");
    }
    Eigen::MatrixXd m(n, n);
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) {
            m(j, l) = acv.at(j - l);
        }
    }
    return m;
}

/// Hard-thresholding projection onto the positive definite cone.
///
/// Every eigenvalue at or below the numerical-zero threshold
/// (1e-12 * |trace|) is replaced by the smallest eigenvalue above it;
/// eigenvectors are kept. Returns the (matrix, projected) pair where
/// projected records whether any replacement occurred. The input is
/// returned unchanged when no replacement is needed, which makes the
/// operation exactly idempotent.
inline std::pair<Eigen::MatrixXd, bool> pd_projection(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw InvalidArgumentError("pd_projection: matrix not square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) {
        throw InvalidArgumentError("pd_projection: eigendecomposition failed");
    }
    const Eigen::VectorXd& values = solver.eigenvalues();
    const double threshold = 1e-12 * std::abs(m.trace());
    double smallest_positive = std::numeric_limits<double>::infinity();
    bool any_replaced = false;
    for (int i = 0; i < values.size(); ++i) {
        if (values[i] > threshold) {
            smallest_positive = std::min(smallest_positive, values[i]);
        } else {
            any_replaced = true;
        }
    }
    if (!std::isfinite(smallest_positive)) {
        throw NoPositiveEigenvalueError("pd_projection: spectrum has no positive eigenvalue");
    }
    if (!any_replaced) return {m, false};
    Eigen::VectorXd clipped = values;
    for (int i = 0; i < clipped.size(); ++i) {
        if (clipped[i] <= threshold) clipped[i] = smallest_positive;
    }
    Eigen::MatrixXd projected =
        solver.eigenvectors() * clipped.asDiagonal() * solver.eigenvectors().transpose();
    return {std::move(projected), true};
}

}  // namespace tsreg
