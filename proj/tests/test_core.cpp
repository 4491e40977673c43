#include "doctest.h"

#include "chanmom/types.hpp"

using namespace chanmom;

TEST_CASE("flow case derives the friction Peclet number") {
    CHECK(make_flow_case(500, 4, 1, 1, 1).pe_tau == 2000.0);
    CHECK(make_flow_case(500, 0.01, 1, 1, 1).pe_tau == 5.0);
    CHECK(make_flow_case(1, 1, 1, 1, 1).pe_tau == 1.0);
}

TEST_CASE("flow case rejects non-positive inputs naming the field") {
    CHECK_THROWS_WITH_AS(make_flow_case(-1, 0.7, 1, 1, 1),
                         doctest::Contains("re_tau"), ValidationError);
    CHECK_THROWS_WITH_AS(make_flow_case(500, 0, 1, 1, 1),
                         doctest::Contains("pr"), ValidationError);
    CHECK_THROWS_WITH_AS(make_flow_case(500, 0.7, -2, 1, 1),
                         doctest::Contains("u_tau"), ValidationError);
    CHECK_THROWS_WITH_AS(make_flow_case(500, 0.7, 1, 0, 1),
                         doctest::Contains("theta_tau"), ValidationError);
    CHECK_THROWS_WITH_AS(make_flow_case(500, 0.7, 1, 1, -1),
                         doctest::Contains("h"), ValidationError);
}

TEST_CASE("moment order validation") {
    CHECK_THROWS_AS(make_moment_order(0, 0), ValidationError);
    CHECK_THROWS_AS(make_moment_order(-1, 2), ValidationError);
    CHECK(make_moment_order(3, 0).pure_velocity());
    CHECK(make_moment_order(0, 2).pure_temperature());
    CHECK(make_moment_order(2, 1).total() == 3);
    CHECK(MomentOrder{1, 0} < MomentOrder{2, 0});
}

TEST_CASE("wall-normal grid invariants") {
    CHECK_NOTHROW(WallNormalGrid({0.0, 0.25, 0.5, 1.0}));
    CHECK_THROWS_AS(WallNormalGrid({0.0, 0.5, 0.5}), ValidationError);
    CHECK_THROWS_AS(WallNormalGrid({0.5, 0.25}), ValidationError);
    CHECK_THROWS_AS(WallNormalGrid({-0.1, 0.5}), ValidationError);
    CHECK_THROWS_AS(WallNormalGrid({0.5, 1.5}), ValidationError);

    WallNormalGrid grid({0.0, 0.25, 0.5});
    CHECK(grid.centre_index() == 0);
    CHECK(grid.has_exact_centre());

    WallNormalGrid no_centre({0.125, 0.25, 0.5});
    CHECK(no_centre.centre_index() == 0);
    CHECK(!no_centre.has_exact_centre());

    // symmetry-transformed grids may leave [0, 1] but stay monotone
    CHECK_NOTHROW(WallNormalGrid::transformed({-0.5, 0.5, 2.5}));
    CHECK_THROWS_AS(WallNormalGrid::transformed({1.0, 1.0}), ValidationError);
}

TEST_CASE("profile construction rejects mismatched lengths") {
    const FlowCase fc = make_flow_case(500, 0.71, 1, 1, 1);
    const WallNormalGrid grid({0.0, 0.5, 1.0});
    CHECK_THROWS_AS(make_profile(MomentOrder{1, 0}, grid, {1.0, 2.0},
                                 MomentBasis::Instantaneous, fc),
                    ValidationError);
    CHECK_NOTHROW(make_profile(MomentOrder{1, 0}, grid, {1.0, 2.0, 3.0},
                               MomentBasis::Instantaneous, fc));
}

TEST_CASE("moment basis names round trip") {
    for (MomentBasis basis : {MomentBasis::Instantaneous,
                              MomentBasis::Fluctuation, MomentBasis::Deficit}) {
        CHECK(moment_basis_from_string(to_string(basis)) == basis);
    }
    CHECK_THROWS_AS(moment_basis_from_string("bogus"), ValidationError);
}
