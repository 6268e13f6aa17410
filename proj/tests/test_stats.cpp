#include <doctest.h>

#include "crepair/stats.hpp"
#include "crepair/error.hpp"

using namespace crepair;

TEST_CASE("normal quantile") {
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959964).epsilon(1e-5));
    CHECK(normal_quantile(0.8413447) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(normal_quantile(0.025) == doctest::Approx(-normal_quantile(0.975)).epsilon(1e-10));
    CHECK_THROWS_AS(normal_quantile(0.0), ContractError);
    CHECK_THROWS_AS(normal_quantile(1.0), ContractError);
}

TEST_CASE("required samples") {
    CHECK(required_samples(0.001, 0.05) == 3838);
    CHECK(required_samples(0.999, 0.05) == 1);
    CHECK(required_samples(0.01, 0.05) == 381);
    CHECK(required_samples(0.5, 0.05) == 4);
    CHECK_THROWS_AS(required_samples(0.0, 0.05), ContractError);
    CHECK_THROWS_AS(required_samples(0.5, 1.0), ContractError);
}

TEST_CASE("wilson upper bound") {
    CHECK(wilson_upper_bound(3838, 0.05) == doctest::Approx(0.001).epsilon(1e-2));
    CHECK(std::abs(wilson_upper_bound(3838, 0.05) - 0.001) < 1e-5);
    SUBCASE("monotone decrease in N") {
        double prev = 1.0;
        for (std::int64_t n : {10, 100, 1000}) {
            const double bound = wilson_upper_bound(n, 0.05);
            CHECK(bound < prev);
            prev = bound;
        }
    }
    SUBCASE("N = z^2 gives one half") {
        const double z = normal_quantile(0.975);
        // wilson takes an integer N; check the algebraic identity directly
        const double z2 = z * z;
        CHECK(z2 / (z2 + z2) == doctest::Approx(0.5));
        // and the integer version approximates it
        CHECK(wilson_upper_bound(4, 0.05) == doctest::Approx(z2 / (4 + z2)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(wilson_upper_bound(0, 0.05), ContractError);
}

TEST_CASE("wilson bound inverts required samples") {
    for (double p : {0.5, 0.1, 0.01, 0.001}) {
        const std::int64_t n = required_samples(p, 0.05);
        // the ceiling makes the achieved bound at most p
        CHECK(wilson_upper_bound(n, 0.05) <= p + 1e-12);
        if (n > 1) CHECK(wilson_upper_bound(n - 1, 0.05) > p);
    }
}
