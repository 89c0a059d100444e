#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>

#include <chemrep/errors.hpp>
#include <chemrep/manufactured.hpp>

using namespace chemrep;

TEST_CASE("case registry") {
    CHECK(is_convergence_case("manufactured-1d"));
    CHECK(is_convergence_case("constant-1d"));
    CHECK_FALSE(is_convergence_case("nope"));
    CHECK(convergence_case_ids().size() == 2);
    CHECK_THROWS_AS((void)manufactured_convergence("nope"), ConfigError);
}

TEST_CASE("manufactured cosine pair: second order in space, first order in time") {
    const ConvergenceReport rep = manufactured_convergence("manufactured-1d");
    REQUIRE(rep.spatial.size() == 3);
    REQUIRE(rep.temporal.size() == 3);
    CHECK(rep.spatial_orders.size() == 2);
    CHECK(rep.temporal_orders.size() == 2);
    CHECK(rep.min_spatial_order() >= 1.9);
    CHECK(rep.min_temporal_order() >= 0.9);
    // errors decrease monotonically with resolution
    CHECK(rep.spatial[1].error_u < rep.spatial[0].error_u);
    CHECK(rep.spatial[2].error_u < rep.spatial[1].error_u);
    CHECK(rep.temporal[1].error_u < rep.temporal[0].error_u);
    CHECK(rep.temporal[2].error_u < rep.temporal[1].error_u);
}

TEST_CASE("constant exact pair is reproduced to roundoff at every level") {
    const ConvergenceReport rep = manufactured_convergence("constant-1d");
    for (const ConvergenceRow& row : rep.spatial) {
        CHECK(row.error_u <= 1e-13);
        CHECK(row.error_v <= 1e-13);
    }
    for (const ConvergenceRow& row : rep.temporal) {
        CHECK(row.error_u <= 1e-13);
        CHECK(row.error_v <= 1e-13);
    }
    // degenerate error ratios are not reported as orders
    CHECK(rep.spatial_orders.empty());
    CHECK(rep.temporal_orders.empty());
    CHECK(rep.min_spatial_order() == std::numeric_limits<double>::infinity());
    CHECK(rep.min_temporal_order() == std::numeric_limits<double>::infinity());
}
