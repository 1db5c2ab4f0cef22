#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tsreg/special_functions.hpp"

using namespace tsreg;

// Reference values frozen from a 30-digit arbitrary-precision evaluation.

TEST_CASE("normal cdf matches high-precision oracle") {
    CHECK(normal_cdf(0.0) == Catch::Approx(0.5).margin(1e-15));
    CHECK(normal_cdf(1.0) == Catch::Approx(0.84134474606854294859).margin(1e-13));
    CHECK(normal_cdf(1.959964) == Catch::Approx(0.9750000009035575957).margin(1e-6));
    CHECK(normal_cdf(1.959964) == Catch::Approx(0.9750000009035575957).margin(1e-12));
    CHECK(normal_cdf(-2.5) == Catch::Approx(0.006209665325776135167).margin(1e-13));
    CHECK(normal_cdf(3.7) == Catch::Approx(0.99989220026652261166).margin(1e-13));
}

TEST_CASE("normal cdf symmetry") {
    for (double x : {0.1, 0.7, 1.3, 2.9, 4.2}) {
        CHECK(normal_cdf(x) + normal_cdf(-x) == Catch::Approx(1.0).margin(1e-14));
    }
}

TEST_CASE("normal quantile inverts the cdf") {
    CHECK(normal_quantile(0.975) == Catch::Approx(1.9599639845400542355).margin(1e-12));
    CHECK(normal_quantile(0.95) == Catch::Approx(1.6448536269514727149).margin(1e-12));
    CHECK(normal_quantile(0.3) == Catch::Approx(-0.52440051270804078404).margin(1e-12));
    CHECK(normal_quantile(1e-10) == Catch::Approx(-6.3613409024040562047).margin(1e-9));
    for (double p : {1e-8, 1e-3, 0.2, 0.5, 0.77, 0.999, 1.0 - 1e-9}) {
        CHECK(normal_cdf(normal_quantile(p)) == Catch::Approx(p).epsilon(1e-10));
    }
    CHECK_THROWS_AS(normal_quantile(0.0), InvalidArgumentError);
    CHECK_THROWS_AS(normal_quantile(1.0), InvalidArgumentError);
}

TEST_CASE("chi-square cdf closed form for two degrees of freedom") {
    // k = 2: F(x) = 1 - exp(-x/2) exactly.
    for (double x : {0.3, 1.0, 2.0 * std::log(2.0), 5.5, 40.0}) {
        CHECK(chi2_cdf(x, 2) == Catch::Approx(1.0 - std::exp(-0.5 * x)).margin(1e-12));
    }
    CHECK(chi2_cdf(2.0 * std::log(2.0), 2) == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("chi-square cdf against oracle values") {
    CHECK(chi2_cdf(1.0, 1) == Catch::Approx(0.68268949213708589717).margin(1e-10));
    CHECK(chi2_cdf(5.0, 3) == Catch::Approx(0.82820285570326686494).margin(1e-10));
    CHECK(chi2_cdf(100.0, 80) == Catch::Approx(0.93542963107886702424).margin(1e-10));
    CHECK(chi2_cdf(10.5, 4) == Catch::Approx(0.96720301000511634827).margin(1e-10));
    CHECK(chi2_cdf(9000.0, 200) == Catch::Approx(1.0).margin(1e-12));
    CHECK(chi2_cdf(0.0, 5) == 0.0);
    CHECK_THROWS_AS(chi2_cdf(1.0, 0), InvalidArgumentError);
}

TEST_CASE("f cdf against oracle values") {
    CHECK(f_cdf(1.5, 2, 10) == Catch::Approx(0.73067092565709560913).margin(1e-10));
    CHECK(f_cdf(3.2, 1, 30) == Catch::Approx(0.91625890614474411807).margin(1e-10));
    CHECK(f_cdf(0.7, 5, 100) == Catch::Approx(0.37529558998878549329).margin(1e-10));
    CHECK(f_cdf(0.0, 3, 7) == 0.0);
}

TEST_CASE("kolmogorov survival function") {
    CHECK(kolmogorov_sf(0.5) == Catch::Approx(0.96394524366487509439).margin(1e-12));
    CHECK(kolmogorov_sf(1.0) == Catch::Approx(0.2699996716773545212).margin(1e-12));
    CHECK(kolmogorov_sf(1.6276) == Catch::Approx(0.010001537333060768178).margin(1e-12));
}
