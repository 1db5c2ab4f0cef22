#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include <Eigen/Dense>

#include "tsreg/ar.hpp"
#include "tsreg/processes.hpp"
#include "tsreg/rng.hpp"

using namespace tsreg;

TEST_CASE("Yule-Walker order 1 hand solution") {
    // gamma = (1, 0.7): phi = gamma1/gamma0 = 0.7, sigma2 = 1 - 0.49 = 0.51.
    const auto path = detail::levinson_durbin({1.0, 0.7}, 1);
    REQUIRE(path.reached == 1);
    CHECK(path.phi[0] == Catch::Approx(0.7).margin(1e-15));
    CHECK(path.sigma2[1] == Catch::Approx(0.51).margin(1e-15));
}

TEST_CASE("white-noise residuals give a near-zero AR(1) coefficient") {
    Rng rng(101);
    Eigen::VectorXd e(10000);
    for (int i = 0; i < 10000; ++i) e[i] = rng.normal();
    const ArModel model = fit_ar_yule_walker(e, 1);
    CHECK(std::abs(model.phi[0]) < 0.05);
}

TEST_CASE("order zero is white noise with sigma2 = gamma0") {
    Rng rng(7);
    Eigen::VectorXd e(50);
    for (int i = 0; i < 50; ++i) e[i] = rng.normal();
    const ArModel model = fit_ar_yule_walker(e, 0);
    CHECK(model.phi.empty());
    CHECK(model.sigma2 == Catch::Approx(e.squaredNorm() / 50).margin(1e-14));
    CHECK_THROWS_AS(fit_ar_yule_walker(Eigen::VectorXd::Zero(10), 0), DegenerateVarianceError);
}

TEST_CASE("fitted AR(1) recovers the generator coefficient") {
    Rng rng(2025);
    const Eigen::VectorXd e = gen_ar1(50000, rng);
    const ArModel model = fit_ar_yule_walker(e, 1);
    CHECK(model.phi[0] == Catch::Approx(0.7).margin(0.02));
    CHECK(model.sigma2 == Catch::Approx(1.0).epsilon(0.03));
}

TEST_CASE("AIC mostly finds the true AR(2) order and never underfits") {
    // Honest Monte Carlo bound: textbook AIC overfits with roughly 25%
    // probability, so exact recovery sits near 3/4, not higher.
    int exact = 0, underfit = 0;
    for (int seed = 0; seed < 100; ++seed) {
        Rng rng(derive_stream(1000, static_cast<std::uint64_t>(seed)));
        const int n = 2000;
        Eigen::VectorXd e(n);
        double lag1 = rng.normal(), lag2 = rng.normal();
        for (int i = 0; i < n; ++i) {
            const double value = 0.5 * lag1 + 0.2 * lag2 + rng.normal();
            lag2 = lag1;
            lag1 = value;
            e[i] = value;
        }
        const int order = select_ar_order_aic(e, 20);
        if (order == 2) ++exact;
        if (order < 2) ++underfit;
    }
    CHECK(exact >= 65);
    CHECK(underfit == 0);
}

TEST_CASE("AIC keeps i.i.d. residuals mostly at order zero") {
    int zero = 0;
    for (int seed = 0; seed < 100; ++seed) {
        Rng rng(derive_stream(3000, static_cast<std::uint64_t>(seed)));
        Eigen::VectorXd e(2000);
        for (int i = 0; i < 2000; ++i) e[i] = rng.normal();
        if (select_ar_order_aic(e, 20) == 0) ++zero;
    }
    CHECK(zero >= 60);
}

TEST_CASE("AIC trivial and invalid inputs") {
    Rng rng(5);
    Eigen::VectorXd e(100);
    for (int i = 0; i < 100; ++i) e[i] = rng.normal();
    CHECK(select_ar_order_aic(e, 0) == 0);
    CHECK_THROWS_AS(select_ar_order_aic(e, 50), InvalidArgumentError);
}

TEST_CASE("AIC selection is invariant under rescaling the residuals") {
    Rng rng(606);
    const Eigen::VectorXd e = gen_ar12(3000, rng);
    const int base = select_ar_order_aic(e, 25);
    for (double c : {0.001, 7.0, 1e5}) {
        CHECK(select_ar_order_aic(c * e, 25) == base);
    }
}

TEST_CASE("theoretical autocovariance of an AR(1) matches the closed form") {
    ArModel model;
    model.phi = {0.7};
    model.sigma2 = 0.51;
    const AutocovSequence acv = ar_theoretical_autocov(model, 20);
    for (int k = 0; k <= 20; ++k) {
        const double expected = 0.51 * std::pow(0.7, k) / (1.0 - 0.49);
        CHECK(acv.gamma[static_cast<std::size_t>(k)] ==
              Catch::Approx(expected).margin(1e-12));
    }
}

TEST_CASE("theoretical autocovariance of white noise") {
    ArModel model;
    model.sigma2 = 3.0;
    const AutocovSequence acv = ar_theoretical_autocov(model, 4);
    CHECK(acv.gamma[0] == 3.0);
    for (int k = 1; k <= 4; ++k) CHECK(acv.gamma[static_cast<std::size_t>(k)] == 0.0);
}

TEST_CASE("theoretical AR(2) autocovariance matches a long simulation") {
    ArModel model;
    model.phi = {0.5, 0.2};
    model.sigma2 = 1.0;
    const AutocovSequence expected = ar_theoretical_autocov(model, 5);

    // Independent oracle: simulate the recursion directly.
    Rng rng(909);
    const int n = 1000000;
    Eigen::VectorXd e(n);
    double lag1 = 0.0, lag2 = 0.0;
    for (int i = 0; i < n + 500; ++i) {
        const double value = 0.5 * lag1 + 0.2 * lag2 + rng.normal();
        lag2 = lag1;
        lag1 = value;
        if (i >= 500) e[i - 500] = value;
    }
    const AutocovSequence sampled = empirical_autocov(e, 5);
    for (int k = 0; k <= 5; ++k) {
        CHECK(sampled.gamma[static_cast<std::size_t>(k)] ==
              Catch::Approx(expected.gamma[static_cast<std::size_t>(k)]).epsilon(0.02));
    }
}

TEST_CASE("Yule-Walker is a fixed point of the theoretical autocovariances") {
    ArModel model;
    model.phi = {0.4, -0.25, 0.1};
    model.sigma2 = 2.0;
    const AutocovSequence acv = ar_theoretical_autocov(model, 3);
    const auto path = detail::levinson_durbin(acv.gamma, 3);
    REQUIRE(path.reached == 3);
    for (int j = 0; j < 3; ++j) {
        CHECK(path.phi[static_cast<std::size_t>(j)] ==
              Catch::Approx(model.phi[static_cast<std::size_t>(j)]).margin(1e-10));
    }
    CHECK(path.sigma2[3] == Catch::Approx(model.sigma2).margin(1e-10));
}

TEST_CASE("partial autocorrelations start at the lag-1 autocorrelation") {
    Rng rng(31);
    const Eigen::VectorXd e = gen_ar1(5000, rng);
    const AutocovSequence acv = empirical_autocov(e, 5);
    const std::vector<double> pacf = partial_autocorrelations(e, 5);
    CHECK(pacf[0] == Catch::Approx(acv.gamma[1] / acv.gamma[0]).margin(1e-12));
    CHECK(std::abs(pacf[3]) < 0.1);  // AR(1): higher partials near zero
}
