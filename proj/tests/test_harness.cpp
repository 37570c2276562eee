#include <catch2/catch_amalgamated.hpp>

#include "schrodlab/harness.hpp"

using namespace schrodlab;

TEST_CASE("suite reports are deterministic for a fixed seed", "[harness]") {
    SuiteReport a = run_suite("weights", 42);
    SuiteReport b = run_suite("weights", 42);
    REQUIRE(a.to_json().dump() == b.to_json().dump());
}

TEST_CASE("unknown suite is rejected before any computation", "[harness]") {
    REQUIRE_THROWS_AS(run_suite("no-such-suite", 1), ConfigError);
    REQUIRE_THROWS_AS(refinement_sweep("no-such-check", {32, 64}), ConfigError);
}

TEST_CASE("single-N sweep is vacuously stable", "[harness]") {
    SweepResult sw = refinement_sweep("reverse_holder", {64});
    REQUIRE(sw.stable);
    REQUIRE(sw.fitted.size() == 1);
}

TEST_CASE("planted off-by-one stratum assignment is detected", "[harness]") {
    Grid g(1, 4.0, 64);
    CriticalRadiusProfile prof(g, Potential::hermite(), 1e-7);
    PsiFunctional psit(2.0, PsiFunctional::Mode::Sup, prof);
    DyadicLattice lat = build_lattice(g, 6, 0);
    REQUIRE(validate_stratification(stratify(lat, 2.0, psit, 0), psit, lat));
    REQUIRE_FALSE(validate_stratification(stratify(lat, 2.0, psit, 1), psit, lat));
}

TEST_CASE("rho suite passes end to end", "[harness]") {
    SuiteReport rep = run_suite("rho", 7);
    for (const auto& c : rep.checks) {
        INFO(c.name);
        REQUIRE(c.pass);
    }
}
