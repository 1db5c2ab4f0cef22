#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <Eigen/Dense>

#include "tsreg/autocov.hpp"
#include "tsreg/rng.hpp"

using namespace tsreg;

namespace {

Eigen::VectorXd from_list(std::initializer_list<double> values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v[i++] = x;
    return v;
}

// Direct double-loop oracle for the divisor-n autocovariance.
double autocov_oracle(const Eigen::VectorXd& e, int k) {
    const int n = static_cast<int>(e.size());
    double acc = 0.0;
    for (int j = 0; j + k < n; ++j) acc += e[j] * e[j + k];
    return acc / n;
}

}  // namespace

TEST_CASE("empirical autocovariance hand sums") {
    const Eigen::VectorXd ones = from_list({1, 1, 1, 1});
    const AutocovSequence a = empirical_autocov(ones, 1);
    CHECK(a.gamma[0] == Catch::Approx(1.0));
    CHECK(a.gamma[1] == Catch::Approx(0.75));

    const Eigen::VectorXd alternating = from_list({1, -1, 1, -1});
    const AutocovSequence b = empirical_autocov(alternating, 1);
    CHECK(b.gamma[1] == Catch::Approx(-0.75));

    const AutocovSequence z = empirical_autocov(Eigen::VectorXd::Zero(6), 5);
    for (double g : z.gamma) CHECK(g == 0.0);
}

TEST_CASE("empirical autocovariance agrees with the direct oracle") {
    Rng rng(11);
    Eigen::VectorXd e(40);
    for (int i = 0; i < 40; ++i) e[i] = rng.normal();
    const AutocovSequence acv = empirical_autocov(e, 39);
    for (int k = 0; k <= 39; ++k) {
        CHECK(acv.gamma[static_cast<std::size_t>(k)] ==
              Catch::Approx(autocov_oracle(e, k)).margin(1e-14));
    }
}

TEST_CASE("autocovariance lag bound is enforced") {
    const Eigen::VectorXd e = from_list({1, 2, 3});
    CHECK_THROWS_AS(empirical_autocov(e, 3), LagOutOfRangeError);
    CHECK_THROWS_AS(empirical_autocov(e, -1), LagOutOfRangeError);
}

TEST_CASE("lag-0 dominance holds on random series") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd e(60);
        for (int i = 0; i < 60; ++i) e[i] = rng.student_t(10);
        const AutocovSequence acv = empirical_autocov(e, 59);
        for (int k = 1; k <= 59; ++k) {
            CHECK(std::abs(acv.gamma[static_cast<std::size_t>(k)]) <= acv.gamma[0] + 1e-14);
        }
    }
}

TEST_CASE("kernel evaluations match the definitions") {
    KernelSpec triangle{KernelKind::triangle, 1.0, 0.5, nullptr};
    CHECK(kernel_eval(triangle, 0.5) == Catch::Approx(0.5));
    CHECK(kernel_eval(triangle, 2.0) == 0.0);
    CHECK(kernel_eval(triangle, 0.0) == 1.0);

    KernelSpec trapeze{KernelKind::trapeze, 1.0, 0.5, nullptr};
    CHECK(kernel_eval(trapeze, 0.25) == 1.0);
    CHECK(kernel_eval(trapeze, 0.75) == Catch::Approx(0.5));
    CHECK(kernel_eval(trapeze, 1.5) == 0.0);

    KernelSpec rect{KernelKind::rectangular, 1.0, 0.5, nullptr};
    CHECK(kernel_eval(rect, 0.999) == 1.0);
    CHECK(kernel_eval(rect, 1.0) == 1.0);
    CHECK(kernel_eval(rect, 1.001) == 0.0);

    KernelSpec qs{KernelKind::quadratic_spectral, 1.0, 0.5, nullptr};
    CHECK(kernel_eval(qs, 0.0) == Catch::Approx(1.0));
    // Series branch glues continuously onto the closed form.
    CHECK(kernel_eval(qs, 9.9e-5) == Catch::Approx(kernel_eval(qs, 1.01e-4)).epsilon(1e-9));
}

TEST_CASE("kernels are even functions") {
    for (KernelKind kind : {KernelKind::rectangular, KernelKind::triangle, KernelKind::trapeze,
                            KernelKind::quadratic_spectral}) {
        KernelSpec spec{kind, 1.0, 0.5, nullptr};
        for (double x : {0.1, 0.4, 0.77, 0.93, 1.7, 3.3}) {
            CHECK(kernel_eval(spec, x) == Catch::Approx(kernel_eval(spec, -x)).margin(1e-15));
        }
    }
}

TEST_CASE("user kernels must satisfy K(0) = 1") {
    KernelSpec bad{KernelKind::user, 1.0, 0.5, [](double) { return 0.5; }};
    CHECK_THROWS_AS(validate_kernel(bad), InvalidArgumentError);
    KernelSpec good{KernelKind::user, 1.0, 0.5, [](double x) { return std::exp(-x * x); }};
    CHECK_NOTHROW(validate_kernel(good));
}

TEST_CASE("tapering reproduces the hand example") {
    AutocovSequence acv;
    acv.n_source = 10;
    acv.gamma = {1.0, 0.5, 0.3};

    KernelSpec triangle{KernelKind::triangle, 2.0, 0.5, nullptr};
    const AutocovSequence tapered = tapered_sequence(acv, triangle);
    CHECK(tapered.gamma[0] == Catch::Approx(1.0));
    CHECK(tapered.gamma[1] == Catch::Approx(0.25));
    CHECK(tapered.gamma[2] == 0.0);

    // Rectangular kernel with h beyond the last lag keeps everything.
    KernelSpec rect{KernelKind::rectangular, 10.0, 0.5, nullptr};
    const AutocovSequence kept = tapered_sequence(acv, rect);
    CHECK(kept.gamma == acv.gamma);

    AutocovSequence zeros;
    zeros.n_source = 10;
    zeros.gamma = {0.0, 0.0, 0.0};
    const AutocovSequence still_zero = tapered_sequence(zeros, triangle);
    for (double g : still_zero.gamma) CHECK(g == 0.0);
}

TEST_CASE("compact-support tapering is exactly banded") {
    AutocovSequence acv;
    acv.n_source = 8;
    acv.gamma = {2.0, 1.0, 0.8, 0.6, 0.4};
    KernelSpec rect{KernelKind::rectangular, 3.0, 0.5, nullptr};
    const AutocovSequence tapered = tapered_sequence(acv, rect);
    CHECK(tapered.gamma[2] == Catch::Approx(0.8));
    CHECK(tapered.gamma[3] == 0.0);  // k = h cut even though K(1) = 1
    CHECK(tapered.gamma[4] == 0.0);
}

TEST_CASE("toeplitz expansion") {
    AutocovSequence unit;
    unit.n_source = 5;
    unit.gamma = {1.0};
    CHECK(toeplitz_expand(unit, 3).isApprox(Eigen::MatrixXd::Identity(3, 3)));

    AutocovSequence two;
    two.n_source = 5;
    two.gamma = {1.0, 0.5};
    const Eigen::MatrixXd m = toeplitz_expand(two, 3);
    CHECK(m(0, 0) == 1.0);
    CHECK(m(0, 1) == 0.5);
    CHECK(m(1, 0) == 0.5);
    CHECK(m(0, 2) == 0.0);
    CHECK(m(2, 1) == 0.5);

    CHECK_THROWS_AS(toeplitz_expand(two, 6), InvalidArgumentError);
}

TEST_CASE("full-lag empirical Toeplitz matrices are PSD") {
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 30 + 10 * trial;
        Eigen::VectorXd e(n);
        for (int i = 0; i < n; ++i) e[i] = rng.normal() + 0.3 * rng.student_t(10);
        const AutocovSequence acv = empirical_autocov(e, n - 1);
        const Eigen::MatrixXd m = toeplitz_expand(acv, n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
        CHECK(solver.eigenvalues().minCoeff() >= -1e-10 * acv.gamma[0]);
    }
}

TEST_CASE("triangle tapering preserves positive semidefiniteness") {
    Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 40 + 16 * trial;
        Eigen::VectorXd e(n);
        for (int i = 0; i < n; ++i) e[i] = rng.normal();
        AutocovSequence acv = empirical_autocov(e, n - 1);
        KernelSpec triangle{KernelKind::triangle, 7.0, 0.5, nullptr};
        const Eigen::MatrixXd m = toeplitz_expand(tapered_sequence(acv, triangle), n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
        CHECK(solver.eigenvalues().minCoeff() >= -1e-10 * acv.gamma[0]);
    }
}

TEST_CASE("pd projection replaces the nonpositive spectrum") {
    Eigen::MatrixXd d1 = Eigen::MatrixXd::Zero(2, 2);
    d1(0, 0) = 2.0;
    d1(1, 1) = -1.0;
    const auto [m1, projected1] = pd_projection(d1);
    CHECK(projected1);
    CHECK(m1(0, 0) == Catch::Approx(2.0));
    CHECK(m1(1, 1) == Catch::Approx(2.0));

    const auto [m2, projected2] = pd_projection(Eigen::MatrixXd::Identity(3, 3));
    CHECK_FALSE(projected2);
    CHECK(m2.isApprox(Eigen::MatrixXd::Identity(3, 3)));

    Eigen::MatrixXd d3 = Eigen::MatrixXd::Zero(3, 3);
    d3(0, 0) = 3.0;
    d3(1, 1) = 1e-3;
    d3(2, 2) = 0.0;
    const auto [m3, projected3] = pd_projection(d3);
    CHECK(projected3);
    CHECK(m3(1, 1) == Catch::Approx(1e-3));
    CHECK(m3(2, 2) == Catch::Approx(1e-3));

    Eigen::MatrixXd negative = -Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(pd_projection(negative), NoPositiveEigenvalueError);
}

TEST_CASE("pd projection is positive definite and idempotent") {
    Rng rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        const int p = 2 + static_cast<int>(rng.uniform_below(5));
        Eigen::MatrixXd raw(p, p);
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < p; ++j) raw(i, j) = rng.normal();
        }
        Eigen::MatrixXd symmetric = 0.5 * (raw + raw.transpose());
        symmetric(0, 0) += static_cast<double>(p);  // keep one positive eigenvalue likely
        Eigen::MatrixXd input = symmetric;
        try {
            const auto [once, projected_once] = pd_projection(input);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(once);
            CHECK(solver.eigenvalues().minCoeff() > 0.0);
            const auto [twice, projected_twice] = pd_projection(once);
            CHECK_FALSE(projected_twice);
            CHECK((twice - once).cwiseAbs().maxCoeff() == 0.0);
        } catch (const NoPositiveEigenvalueError&) {
            // acceptable draw: entirely nonpositive spectrum
        }
    }
}
