#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "repsig/normal.hpp"

using repsig::two_sided_p;
using repsig::two_sided_z;

TEST_CASE("two_sided_p matches erfc reference values") {
    // Reference values computed at 40-digit precision.
    CHECK(two_sided_p(0.0) == 1.0);
    CHECK(two_sided_p(1.0) == doctest::Approx(0.3173105078629141).epsilon(1e-14));
    CHECK(two_sided_p(1.96) ==
          doctest::Approx(0.04999579029644087).epsilon(1e-14));
    CHECK(two_sided_p(2.5) ==
          doctest::Approx(0.012419330651552270).epsilon(1e-14));
    CHECK(two_sided_p(5.0) ==
          doctest::Approx(5.7330314375838782e-7).epsilon(1e-14));
    CHECK(two_sided_p(10.0) ==
          doctest::Approx(1.5239706048321052e-23).epsilon(1e-13));
}

TEST_CASE("two_sided_p rejects negative z") {
    CHECK_THROWS_AS(two_sided_p(-0.1), std::domain_error);
    CHECK_THROWS_AS(two_sided_p(-10.0), std::domain_error);
}

TEST_CASE("two_sided_z matches reference quantiles") {
    CHECK(two_sided_z(0.05) == doctest::Approx(1.9599639845400542).epsilon(1e-11));
    CHECK(two_sided_z(0.01) == doctest::Approx(2.5758293035489008).epsilon(1e-11));
    CHECK(two_sided_z(0.001) == doctest::Approx(3.2905267314918948).epsilon(1e-11));
    CHECK(two_sided_z(1e-6) == doctest::Approx(4.8916384756985904).epsilon(1e-11));
    CHECK(two_sided_z(1e-12) == doctest::Approx(7.1305068481713245).epsilon(1e-11));
    CHECK(two_sided_z(0.5) == doctest::Approx(0.6744897501960817).epsilon(1e-11));
    CHECK(two_sided_z(0.9) == doctest::Approx(0.12566134685507403).epsilon(1e-10));
    CHECK(two_sided_z(1.0) == 0.0);
}

TEST_CASE("two_sided_z agrees with the bisection oracle across magnitudes") {
    for (double p : {0.999, 0.75, 0.31731050786291410, 0.1, 0.05, 3.11e-3,
                     1e-4, 2.7e-7, 1e-10, 5e-14, 1e-50, 1e-200, 1e-300}) {
        CAPTURE(p);
        CHECK(std::fabs(two_sided_z(p) - oracle::two_sided_z(p)) < 1e-9);
    }
}

TEST_CASE("two_sided_z and two_sided_p are mutually inverse") {
    for (double z : {0.0, 0.1, 0.5, 1.0, 1.96, 2.5758293035489008, 3.0, 5.0,
                     8.0, 12.0, 20.0, 30.0}) {
        CAPTURE(z);
        CHECK(std::fabs(two_sided_z(two_sided_p(z)) - z) < 1e-9);
    }
    for (double p : {1.0, 0.5, 0.05, 1e-3, 1e-8, 1e-20, 1e-100}) {
        CAPTURE(p);
        const double back = two_sided_p(two_sided_z(p));
        CHECK(back == doctest::Approx(p).epsilon(1e-9));
    }
}

TEST_CASE("two_sided_z is monotone decreasing in p") {
    double prev = two_sided_z(1e-15);
    for (double p = 1e-14; p <= 1.0; p *= 10.0) {
        const double z = two_sided_z(p);
        CHECK(z < prev);
        prev = z;
    }
}

TEST_CASE("two_sided_z domain errors") {
    CHECK_THROWS_AS(two_sided_z(-0.01), std::domain_error);
    CHECK_THROWS_AS(two_sided_z(1.01), std::domain_error);
    CHECK_THROWS_WITH_AS(two_sided_z(0.0), "degenerate threshold",
                         std::domain_error);
}
