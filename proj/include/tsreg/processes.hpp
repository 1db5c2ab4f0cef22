#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "tsreg/errors.hpp"
#include "tsreg/rng.hpp"
#include "tsreg/special_functions.hpp"

namespace tsreg {

enum class ProcessKind { ar1, ar12, ma12, nonmixing, sysdyn, iid_student_sq };

inline const char* process_kind_name(ProcessKind kind) {
    switch (kind) {
        case ProcessKind::ar1: return "ar1";
        case ProcessKind::ar12: return "ar12";
        case ProcessKind::ma12: return "ma12";
        case ProcessKind::nonmixing: return "nonmixing";
        case ProcessKind::sysdyn: return "sysdyn";
        case ProcessKind::iid_student_sq: return "iid";
    }
    return "?";
}

/// Declarative description of an error process draw.
struct ProcessSpec {
    ProcessKind kind = ProcessKind::ar1;
    int n = 0;
    std::uint64_t seed = 0;
    /// Marginal variance of the nonmixing process.
    double sigma2 = 25.0;
    /// Exponent of the intermittent map, in (0, 1/2).
    double map_exponent = 0.25;
};

namespace detail {
inline constexpr int kAr12BurnIn = 10 * 12 + 100;
inline constexpr int kSysdynBurnIn = 10000;
}

/// Gaussian AR(1): e_i - 0.7 e_{i-1} = W_i, stationary start.
inline Eigen::VectorXd gen_ar1(int n, Rng& rng) {
    if (n < 1) throw InvalidArgumentError("gen_ar1: n must be >= 1");
    Eigen::VectorXd e(n);
    e[0] = rng.normal() * std::sqrt(1.0 / (1.0 - 0.49));
    for (int i = 1; i < n; ++i) e[i] = 0.7 * e[i - 1] + rng.normal();
    return e;
}

/// Seasonal AR(12): e_i - 0.5 e_{i-1} - 0.2 e_{i-12} = W_i, burn-in of
/// 220 steps from zeros.
inline Eigen::VectorXd gen_ar12(int n, Rng& rng) {
    if (n < 1) throw InvalidArgumentError("gen_ar12: n must be >= 1");
    const int total = detail::kAr12BurnIn + n;
    Eigen::VectorXd buffer = Eigen::VectorXd::Zero(total + 12);
    for (int i = 12; i < total + 12; ++i) {
        buffer[i] = 0.5 * buffer[i - 1] + 0.2 * buffer[i - 12] + rng.normal();
    }
    return buffer.tail(n);
}

/// Seasonal MA(12): e_i = W_i + 0.5 W_{i-2} + 0.3 W_{i-3} + 0.2 W_{i-12},
/// Student-t(10) innovations; exact construction from 12 pre-samples.
inline Eigen::VectorXd gen_ma12(int n, Rng& rng) {
    if (n < 1) throw InvalidArgumentError("gen_ma12: n must be >= 1");
    Eigen::VectorXd w(n + 12);
    for (int i = 0; i < n + 12; ++i) w[i] = rng.student_t(10);
    Eigen::VectorXd e(n);
    for (int i = 0; i < n; ++i) {
        const int j = i + 12;
        e[i] = w[j] + 0.5 * w[j - 2] + 0.3 * w[j - 3] + 0.2 * w[j - 12];
    }
    return e;
}

/// Non-mixing stationary Markov chain: Z_{i+1} = (Z_i + eta_{i+1})/2 with
/// Bernoulli(1/2) eta and uniform Z_1; e_i = Q_{0,sigma2}(Z_i) where Q is
/// the Gaussian quantile function. The marginal is N(0, sigma2).
inline Eigen::VectorXd gen_nonmixing(int n, Rng& rng, double sigma2 = 25.0) {
    if (n < 1) throw InvalidArgumentError("gen_nonmixing: n must be >= 1");
    if (!(sigma2 > 0.0)) throw InvalidArgumentError("gen_nonmixing: sigma2 must be > 0");
    const double sigma = std::sqrt(sigma2);
    Eigen::VectorXd e(n);
    double z = rng.uniform();
    for (int i = 0; i < n; ++i) {
        const double clamped = std::min(std::max(z, 1e-15), 1.0 - 1e-15);
        e[i] = sigma * normal_quantile(clamped);
        const double eta = rng.uniform() < 0.5 ? 0.0 : 1.0;
        z = 0.5 * (z + eta);
    }
    return e;
}

/// One step of the intermittent (LSV) map.
inline double intermittent_map(double x, double gamma) {
    if (x < 0.5) return x * (1.0 + std::pow(2.0 * x, gamma));
    return 2.0 * x - 1.0;
}

/// Orbit of the intermittent map after a 1e4-step burn-in approximating
/// the invariant measure; correlations decay like k^{-(1-gamma)/gamma}.
/// Orbits that collapse numerically (underflow toward the neutral fixed
/// point, or landing exactly on 1) restart from a fresh uniform draw.
inline Eigen::VectorXd gen_sysdyn(int n, Rng& rng, double gamma = 0.25) {
    if (n < 1) throw InvalidArgumentError("gen_sysdyn: n must be >= 1");
    if (!(gamma > 0.0 && gamma < 0.5)) {
        throw InvalidArgumentError("gen_sysdyn: map exponent must lie in (0, 1/2)");
    }
    double x = rng.uniform();
    auto step = [&](double value) {
        double next = intermittent_map(value, gamma);
        if (next <= 1e-300 || next >= 1.0 || !std::isfinite(next)) next = rng.uniform();
        return next;
    };
    for (int i = 0; i < detail::kSysdynBurnIn; ++i) x = step(x);
    Eigen::VectorXd e(n);
    for (int i = 0; i < n; ++i) {
        x = step(x);
        e[i] = x;
    }
    return e;
}

/// Centered squared Student-t(10) noise: e_i = W_i^2 - 5/4 (E[W^2] = 5/4).
inline Eigen::VectorXd gen_iid_student_sq(int n, Rng& rng) {
    if (n < 1) throw InvalidArgumentError("gen_iid_student_sq: n must be >= 1");
    Eigen::VectorXd e(n);
    for (int i = 0; i < n; ++i) {
        const double w = rng.student_t(10);
        e[i] = w * w - 1.25;
    }
    return e;
}

inline Eigen::VectorXd generate_process(ProcessKind kind, int n, Rng& rng,
                                        double sigma2 = 25.0, double map_exponent = 0.25) {
    switch (kind) {
        case ProcessKind::ar1: return gen_ar1(n, rng);
        case ProcessKind::ar12: return gen_ar12(n, rng);
        case ProcessKind::ma12: return gen_ma12(n, rng);
        case ProcessKind::nonmixing: return gen_nonmixing(n, rng, sigma2);
        case ProcessKind::sysdyn: return gen_sysdyn(n, rng, map_exponent);
        case ProcessKind::iid_student_sq: return gen_iid_student_sq(n, rng);
    }
    throw InvalidArgumentError("generate_process: unknown kind");
}

inline Eigen::VectorXd generate_process(const ProcessSpec& spec) {
    Rng rng(spec.seed);
    return generate_process(spec.kind, spec.n, rng, spec.sigma2, spec.map_exponent);
}

/// Two-column regression design (no intercept): X1_i = log(i) + sin(i) + Z_i
/// with Z a stationary Gaussian AR(1), and X2_i = i.
inline Eigen::MatrixXd gen_design_mod2(int n, Rng& rng, double ar_coeff = 0.5) {
    if (n < 1) throw InvalidArgumentError("gen_design_mod2: n must be >= 1");
    if (!(std::abs(ar_coeff) < 1.0)) {
        throw InvalidArgumentError("gen_design_mod2: |ar_coeff| must be < 1");
    }
    Eigen::MatrixXd x(n, 2);
    double z = rng.normal() * std::sqrt(1.0 / (1.0 - ar_coeff * ar_coeff));
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i + 1);
        x(i, 0) = std::log(t) + std::sin(t) + z;
        x(i, 1) = t;
        z = ar_coeff * z + rng.normal();
    }
    return x;
}

struct DesignSpec {
    int n = 0;
    std::uint64_t seed = 0;
    double ar_coeff = 0.5;
};

inline Eigen::MatrixXd generate_design(const DesignSpec& spec) {
    Rng rng(spec.seed);
    return gen_design_mod2(spec.n, rng, spec.ar_coeff);
}

}  // namespace tsreg
