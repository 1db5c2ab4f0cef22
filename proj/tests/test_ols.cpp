#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "tsreg/autocov.hpp"
#include "tsreg/ols.hpp"
#include "tsreg/rng.hpp"

using namespace tsreg;

namespace {

RegressionData random_fixture(int n, int p, Rng& rng, bool intercept = true) {
    RegressionData data;
    data.intercept = intercept;
    data.x.resize(n, p);
    int col = 0;
    if (intercept) {
        data.x.col(col++).setOnes();
        data.column_names.push_back("(Intercept)");
    }
    for (; col < p; ++col) {
        for (int i = 0; i < n; ++i) data.x(i, col) = rng.normal();
        data.column_names.push_back("x" + std::to_string(col));
    }
    data.y.resize(n);
    for (int i = 0; i < n; ++i) data.y[i] = rng.normal();
    return data;
}

}  // namespace

TEST_CASE("identity fit: y equals the single column") {
    RegressionData data;
    data.x.resize(4, 1);
    data.x << 1, 2, 3, 4;
    data.y = data.x.col(0);
    data.column_names = {"x"};
    const OlsFit fit = fit_ols(data);
    CHECK(fit.beta_hat[0] == Catch::Approx(1.0).margin(1e-12));
    CHECK(fit.residuals.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(fit.r_squared == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("intercept-only fit is the mean, checked by grid search") {
    RegressionData data;
    data.x = Eigen::MatrixXd::Ones(3, 1);
    data.y.resize(3);
    data.y << 1, 2, 3;
    data.column_names = {"(Intercept)"};
    data.intercept = true;
    const OlsFit fit = fit_ols(data);

    // Brute-force oracle: scan the candidate constant over a fine grid.
    double best_b = 0.0, best_rss = 1e300;
    for (double b = -1.0; b <= 5.0; b += 1e-4) {
        const double rss = (data.y.array() - b).square().sum();
        if (rss < best_rss) {
            best_rss = rss;
            best_b = b;
        }
    }
    CHECK(fit.beta_hat[0] == Catch::Approx(best_b).margin(2e-4));
    CHECK(fit.beta_hat[0] == Catch::Approx(2.0).margin(1e-12));
    CHECK(fit.rss == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("zero response gives zero coefficients") {
    Rng rng(5);
    RegressionData data = random_fixture(20, 3, rng);
    data.y.setZero();
    const OlsFit fit = fit_ols(data);
    CHECK(fit.beta_hat.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(fit.r_squared == 1.0);  // exact fit of the zero response
}

TEST_CASE("residuals are orthogonal to the design") {
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 25 + static_cast<int>(rng.uniform_below(100));
        const int p = 2 + static_cast<int>(rng.uniform_below(4));
        const RegressionData data = random_fixture(n, p, rng);
        const OlsFit fit = fit_ols(data);
        const double bound = 1e-8 * data.y.norm();
        CHECK((fit.x.transpose() * fit.residuals).cwiseAbs().maxCoeff() < bound);
        for (int j = 0; j < p; ++j) CHECK(fit.d_n[j] > 0.0);
    }
}

TEST_CASE("rank and dimension errors") {
    RegressionData data;
    data.x.resize(5, 2);
    data.x.col(0).setOnes();
    data.x.col(1) = 3.0 * data.x.col(0);  // collinear
    data.y = Eigen::VectorXd::Zero(5);
    data.column_names = {"a", "b"};
    CHECK_THROWS_AS(fit_ols(data), RankDeficientError);

    RegressionData mismatched;
    mismatched.x = Eigen::MatrixXd::Ones(5, 1);
    mismatched.y = Eigen::VectorXd::Zero(4);
    mismatched.column_names = {"a"};
    CHECK_THROWS_AS(fit_ols(mismatched), DimensionMismatchError);
}

TEST_CASE("plug-in with identity Gamma and orthogonal columns is the identity") {
    // Orthogonal design: disjoint indicator blocks, then Gamma = sigma^2 I.
    const int n = 12;
    RegressionData data;
    data.x = Eigen::MatrixXd::Zero(n, 2);
    for (int i = 0; i < n / 2; ++i) data.x(i, 0) = 1.0;
    for (int i = n / 2; i < n; ++i) data.x(i, 1) = 1.0;
    data.y.resize(n);
    Rng rng(2);
    for (int i = 0; i < n; ++i) data.y[i] = rng.normal();
    data.column_names = {"g1", "g2"};
    const OlsFit fit = fit_ols(data);

    const double sigma2 = 2.7;
    AutocovSequence white;
    white.n_source = n;
    white.gamma = {sigma2};
    const CovPlugin plug = plugin_covariance(fit, white);
    CHECK(plug.c_hat.isApprox(sigma2 * Eigen::MatrixXd::Identity(2, 2), 1e-12));
}

TEST_CASE("plug-in with identity Gamma and the all-ones column gives [1]") {
    const int n = 9;
    RegressionData data;
    data.x = Eigen::MatrixXd::Ones(n, 1);
    data.y.resize(n);
    Rng rng(3);
    for (int i = 0; i < n; ++i) data.y[i] = rng.normal();
    data.column_names = {"(Intercept)"};
    data.intercept = true;
    const OlsFit fit = fit_ols(data);

    // Hand expansion: d = sqrt(n), (X^tX)^{-1} = 1/n, X^t I X = n,
    // so C = sqrt(n) * 1/n * n * 1/n * sqrt(n) = 1.
    AutocovSequence unit;
    unit.n_source = n;
    unit.gamma = {1.0};
    const CovPlugin plug = plugin_covariance(fit, unit);
    CHECK(plug.c_hat(0, 0) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("homoskedastic plug-in equals the classical sandwich exactly") {
    Rng rng(13);
    const RegressionData data = random_fixture(40, 3, rng);
    const OlsFit fit = fit_ols(data);
    const double sigma2 = fit.rss / fit.n();
    AutocovSequence white;
    white.n_source = fit.n();
    white.gamma = {sigma2};
    const CovPlugin plug = plugin_covariance(fit, white);
    const Eigen::MatrixXd classical = sigma2 * fit.d_n.asDiagonal() * fit.xtx_inv *
                                      fit.d_n.asDiagonal();
    CHECK((plug.c_hat - classical).cwiseAbs().maxCoeff() < 1e-12 * sigma2);
}

TEST_CASE("banded and dense plug-in paths agree") {
    Rng rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 30 + static_cast<int>(rng.uniform_below(70));
        const RegressionData data = random_fixture(n, 3, rng);
        const OlsFit fit = fit_ols(data);
        AutocovSequence acv = empirical_autocov(fit.residuals, n - 1);
        const CovPlugin banded = plugin_covariance(fit, acv);
        const CovPlugin dense = plugin_covariance(fit, toeplitz_expand(acv, n));
        const double scale = std::max(1.0, dense.c_hat.cwiseAbs().maxCoeff());
        CHECK((banded.c_hat - dense.c_hat).cwiseAbs().maxCoeff() < 1e-12 * scale);
    }
}

TEST_CASE("asymmetric user matrices are rejected") {
    Rng rng(41);
    const RegressionData data = random_fixture(10, 2, rng);
    const OlsFit fit = fit_ols(data);
    Eigen::MatrixXd gamma = Eigen::MatrixXd::Identity(10, 10);
    gamma(0, 5) = 0.5;  // not mirrored
    CHECK_THROWS_AS(plugin_covariance(fit, gamma), NotSymmetricError);
}

TEST_CASE("row permutation with white-noise Gamma leaves C unchanged") {
    Rng rng(53);
    const int n = 24;
    RegressionData data = random_fixture(n, 3, rng);
    const OlsFit fit = fit_ols(data);
    AutocovSequence white;
    white.n_source = n;
    white.gamma = {1.9};
    const CovPlugin base = plugin_covariance(fit, white);

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        std::swap(perm[static_cast<std::size_t>(i)],
                  perm[static_cast<std::size_t>(rng.uniform_below(static_cast<std::uint64_t>(i + 1)))]);
    }
    RegressionData shuffled = data;
    for (int i = 0; i < n; ++i) {
        shuffled.y[i] = data.y[perm[static_cast<std::size_t>(i)]];
        shuffled.x.row(i) = data.x.row(perm[static_cast<std::size_t>(i)]);
    }
    const OlsFit refit = fit_ols(shuffled);
    const CovPlugin permuted = plugin_covariance(refit, white);
    CHECK((permuted.c_hat - base.c_hat).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("rescaling the response is scale free") {
    Rng rng(61);
    const RegressionData data = random_fixture(30, 3, rng);
    const OlsFit fit = fit_ols(data);
    for (double c : {1.0, 2.0, 1e6}) {
        const ScaleFreeReport report = scale_free_check(fit, c);
        CHECK(report.pass);
        CHECK(report.r_squared_delta < 1e-10);
    }
    CHECK_THROWS_AS(scale_free_check(fit, -1.0), InvalidArgumentError);
}
