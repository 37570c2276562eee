#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "schrodlab/grid.hpp"

using namespace schrodlab;

TEST_CASE("midpoint quadrature on closed forms", "[grid]") {
    Grid g(1, 1.0, 1024);
    Cube full = domain_cube(g);

    GridFunction one(g, 1.0);
    REQUIRE(integrate(one, full) == Catch::Approx(2.0).margin(1e-14));

    GridFunction zero(g, 0.0);
    REQUIRE(integrate(zero, full) == 0.0);

    GridFunction x2 = GridFunction::from_function(g, [](const Vec3& x) { return x[0] * x[0]; });
    REQUIRE(std::abs(integrate(x2, full) - 2.0 / 3.0) < 1e-5);
}

TEST_CASE("quadrature errors", "[grid]") {
    Grid g(1, 1.0, 16);
    GridFunction f(g, 1.0);
    REQUIRE_THROWS_AS(integrate(f, Cube{{0.9, 0, 0}, 0.5}), DomainError);
    // thin cube wedged between two cell centers holds no center
    const double mid = 0.5 * (g.cell_center(3) + g.cell_center(4));
    REQUIRE_THROWS_AS(integrate(f, Cube{{mid, 0, 0}, g.spacing / 8.0}), DegenerateCubeError);
    REQUIRE_THROWS_AS(integrate(f, Cube{{0, 0, 0}, -1.0}), DegenerateCubeError);
}

TEST_CASE("averages", "[grid]") {
    Grid g(1, 1.0, 64);
    Cube full = domain_cube(g);

    GridFunction c(g, 3.25);
    REQUIRE(average(c, full) == Catch::Approx(3.25).margin(1e-15));

    GridFunction left = GridFunction::from_function(
        g, [](const Vec3& x) { return x[0] < 0 ? 1.0 : 0.0; });
    REQUIRE(std::abs(average(left, full) - 0.5) <= 1.0 / 64.0);

    GridFunction odd = GridFunction::from_function(g, [](const Vec3& x) { return x[0]; });
    REQUIRE(std::abs(average(odd, full)) < 1e-12);
}

TEST_CASE("quadrature linearity and additivity", "[grid]") {
    Grid g(2, 1.0, 16);
    GridFunction f = GridFunction::from_function(
        g, [](const Vec3& x) { return std::sin(x[0]) + x[1]; });
    GridFunction h = GridFunction::from_function(
        g, [](const Vec3& x) { return std::cos(3.0 * x[0] * x[1]); });
    Cube q{{0.25, -0.25, 0}, 0.75};
    GridFunction combo(g);
    for (long i = 0; i < g.cell_count(); ++i)
        combo.samples[i] = 2.0 * f.samples[i] - 0.5 * h.samples[i];
    REQUIRE(integrate(combo, q) ==
            Catch::Approx(2.0 * integrate(f, q) - 0.5 * integrate(h, q)).margin(1e-13));

    // dyadic parent equals the sum over its four children
    Cube parent{{-0.5, 0.5, 0}, 1.0};
    double child_sum = 0.0;
    for (int k = 0; k < 4; ++k) {
        Cube child;
        child.side = 0.5;
        child.center[0] = parent.center[0] + ((k & 1) ? 0.25 : -0.25);
        child.center[1] = parent.center[1] + ((k & 2) ? 0.25 : -0.25);
        child_sum += integrate(f, child);
    }
    REQUIRE(integrate(f, parent) == Catch::Approx(child_sum).margin(1e-14));
}

TEST_CASE("refinement convergence is second order", "[grid]") {
    double prev_err = 0.0;
    for (long N : {64L, 128L, 256L}) {
        Grid g(1, 1.0, N);
        GridFunction f = GridFunction::from_function(
            g, [](const Vec3& x) { return std::exp(x[0]); });
        const double exact = std::exp(1.0) - std::exp(-1.0);
        const double err = std::abs(integrate(f, domain_cube(g)) - exact);
        if (prev_err > 0) REQUIRE(prev_err / err >= 3.0);
        prev_err = err;
    }
}

TEST_CASE("cell membership is half-open", "[grid]") {
    Grid g(1, 1.0, 8);
    // two adjacent dyadic cubes partition their union's cells exactly
    Cube a{{-0.5, 0, 0}, 1.0}, b{{0.5, 0, 0}, 1.0};
    REQUIRE(cell_range(g, a).count() + cell_range(g, b).count() ==
            cell_range(g, domain_cube(g)).count());
}

TEST_CASE("dyadic lattices", "[grid]") {
    Grid g(1, 1.0, 16);
    DyadicLattice lat = build_lattice(g, 4, 0);
    for (int d = 0; d <= 4; ++d) REQUIRE(lat.levels[d].size() == std::size_t(1) << d);

    Grid g2(2, 1.0, 8);
    DyadicLattice lat2 = build_lattice(g2, 1, 0);
    REQUIRE(lat2.levels[0].size() == 1);
    REQUIRE(lat2.levels[1].size() == 4);

    // shifted lattice keeps only cubes fully inside the domain
    DyadicLattice lsh = build_lattice(g, 2, 1);
    for (const auto& level : lsh.levels)
        for (const Cube& q : level) {
            REQUIRE(cube_in_domain(g, q));
            REQUIRE(cell_range(g, q).count() > 0);
        }
    // brute-force enumeration oracle for the shifted counts
    std::size_t expect = 0;
    for (int d = 0; d <= 2; ++d) {
        const double side = 2.0 / (1 << d);
        for (long k = -8; k <= 8; ++k) {
            const double lo = -1.0 + 2.0 / 3.0 + k * side;
            if (lo >= -1.0 - 1e-12 && lo + side <= 1.0 + 1e-12) ++expect;
        }
    }
    std::size_t got = 0;
    for (const auto& level : lsh.levels) got += level.size();
    REQUIRE(got == expect);

    REQUIRE_THROWS_AS(build_lattice(g, 9, 0), ResolutionError);
}

TEST_CASE("cube enumeration strategies", "[grid]") {
    Grid g4(1, 1.0, 4);
    CubeCollection ex = enumerate_cubes(g4, "exhaustive-small");
    REQUIRE(ex.size() == 10);  // 4 + 3 + 2 + 1

    Grid g8(1, 1.0, 8);
    CubeCollection cs = enumerate_cubes(g8, "centered-sweep");
    REQUIRE(cs.size() <= 8 * 4);
    for (const Cube& q : cs.cubes) REQUIRE(cube_in_domain(g8, q));

    for (const std::string& strategy : {"dyadic-all-shifts", "centered-sweep", "exhaustive-small"}) {
        CubeCollection c = enumerate_cubes(g8, strategy, 3);
        auto cubes = c.cubes;
        dedup_cubes(cubes);
        REQUIRE(cubes.size() == c.size());  // no duplicates
    }

    Grid big(2, 1.0, 64);
    REQUIRE_THROWS_AS(enumerate_cubes(big, "exhaustive-small"), SizeLimitError);
    REQUIRE_THROWS_AS(enumerate_cubes(g8, "no-such-strategy"), ConfigError);
}

TEST_CASE("summed area tables agree with direct sums", "[grid]") {
    for (int dim : {1, 2, 3}) {
        Grid g(dim, 1.0, dim == 3 ? 8 : 16);
        GridFunction f = GridFunction::from_function(g, [](const Vec3& x) {
            return std::sin(3.0 * x[0] + 1.0) + x[1] * x[1] - 0.3 * x[2];
        });
        SummedArea sa(g, f.samples);
        Cube q{{0.25, -0.125, 0.125}, 0.5};
        const CellRange r = cell_range(g, q);
        double direct = 0.0;
        for_each_cell(g, r, [&](long i) { direct += f.samples[i]; });
        REQUIRE(sa.box_sum(r) == Catch::Approx(direct).margin(1e-12));
    }
}

TEST_CASE("grid function serialization round trip", "[grid]") {
    Grid g(2, 1.5, 8);
    GridFunction f = GridFunction::from_function(
        g, [](const Vec3& x) { return x[0] * 7.0 + std::cos(x[1]); });
    std::stringstream csv;
    write_grid_function_csv(f, csv);
    nlohmann::json hdr = grid_header_json(g);
    Grid g2 = grid_from_json(hdr);
    REQUIRE(g2 == g);
    GridFunction f2 = read_grid_function_csv(g2, csv);
    for (long i = 0; i < g.cell_count(); ++i) REQUIRE(f2.samples[i] == f.samples[i]);
}
