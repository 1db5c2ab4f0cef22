#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "tsreg/rng.hpp"

using namespace tsreg;

TEST_CASE("identical seeds reproduce the stream") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        REQUIRE(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("uniform draws stay strictly inside (0,1)") {
    Rng rng(7);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("derived streams differ and are stable") {
    CHECK(derive_stream(1, 0) != derive_stream(1, 1));
    CHECK(derive_stream(1, 0) != derive_stream(2, 0));
    CHECK(derive_stream(123, 456) == derive_stream(123, 456));
}

TEST_CASE("distinct streams are nearly uncorrelated") {
    const int n = 10000;
    Rng a(derive_stream(99, 0));
    Rng b(derive_stream(99, 1));
    std::vector<double> xs(n), ys(n);
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) {
        xs[i] = a.normal();
        ys[i] = b.normal();
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    CHECK(std::abs(sxy / std::sqrt(sxx * syy)) < 0.05);
}

TEST_CASE("normal draws have the right first moments") {
    Rng rng(2024);
    const int n = 200000;
    double sum = 0, sumsq = 0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sumsq += z * z;
    }
    CHECK(sum / n == Catch::Approx(0.0).margin(0.01));
    CHECK(sumsq / n == Catch::Approx(1.0).margin(0.02));
}

TEST_CASE("student t(10) variance is close to 10/8") {
    Rng rng(55);
    const int n = 200000;
    double sumsq = 0;
    for (int i = 0; i < n; ++i) {
        const double t = rng.student_t(10);
        sumsq += t * t;
    }
    CHECK(sumsq / n == Catch::Approx(1.25).epsilon(0.03));
}

TEST_CASE("uniform_below covers the range without bias") {
    Rng rng(8);
    std::vector<int> counts(7, 0);
    const int draws = 70000;
    for (int i = 0; i < draws; ++i) {
        counts[static_cast<std::size_t>(rng.uniform_below(7))]++;
    }
    for (int c : counts) {
        CHECK(std::abs(c - draws / 7) < 500);
    }
    CHECK_THROWS_AS(rng.uniform_below(0), InvalidArgumentError);
}
