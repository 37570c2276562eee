#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "schrodlab/potential.hpp"

using namespace schrodlab;

TEST_CASE("ball integrals on closed forms", "[potential]") {
    const double c = 1.7;
    REQUIRE(ball_integral(Potential::constant(c), {0, 0, 0}, 1.0, 3) ==
            Catch::Approx(c * 4.0 * M_PI / 3.0));
    REQUIRE(ball_integral(Potential::hermite(), {0, 0, 0}, 1.0, 3) ==
            Catch::Approx(4.0 * M_PI / 5.0));
    REQUIRE(ball_integral(Potential::zero(), {0.3, 0, 0}, 2.0, 1) == 0.0);

    // 1-D general exponent against the antiderivative of |y|^a
    const double a = 1.3, x0 = 0.4, r = 0.9;
    auto F = [&](double y) { return std::copysign(std::pow(std::abs(y), a + 1.0), y) / (a + 1.0); };
    REQUIRE(ball_integral(Potential::power_law(a), {x0, 0, 0}, r, 1) ==
            Catch::Approx(F(x0 + r) - F(x0 - r)).epsilon(1e-12));
}

TEST_CASE("off-center power-law ball integrals", "[potential]") {
    // the closed 3-D route at a == 2 matches the dedicated quadratic formula
    const Vec3 x{0.7, 0, 0};
    const double r = 1.1;
    const double quad = ball_integral(Potential::hermite(), x, r, 3);
    const double gen = detail::ball_int_power_3d(0.7, r, 2.0);
    REQUIRE(gen == Catch::Approx(quad).epsilon(1e-10));

    // 2-D quadrature path against a brute-force midpoint sum
    const double a = 1.3;
    const double got = ball_integral(Potential::power_law(a), {0.5, 0.2, 0}, 0.8, 2);
    double brute = 0.0;
    const int M = 1200;
    const double h = 1.6 / M;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
            const double u = -0.8 + (i + 0.5) * h, v = -0.8 + (j + 0.5) * h;
            if (u * u + v * v >= 0.64) continue;
            const double px = 0.5 + u, py = 0.2 + v;
            brute += std::pow(px * px + py * py, a / 2.0);
        }
    brute *= h * h;
    REQUIRE(got == Catch::Approx(brute).epsilon(2e-3));
}

TEST_CASE("critical radius closed forms", "[potential]") {
    const double rho3 = critical_radius(Potential::constant(3.0 / (4.0 * M_PI)), {0, 0, 0},
                                        1e-8, 3, 1e-3, 32.0);
    REQUIRE(std::abs(rho3 - 1.0) < 1e-3);
    const double rho1 = critical_radius(Potential::constant(0.5), {0, 0, 0}, 1e-8, 1, 1e-3, 32.0);
    REQUIRE(std::abs(rho1 - 1.0) < 1e-3);
    REQUIRE(critical_radius(Potential::zero(), {0, 0, 0}, 1e-8, 1, 1e-3, 32.0) == kInf);

    // doubling the constant divides rho by sqrt(2) in one dimension
    const double rho_c = critical_radius(Potential::constant(0.5), {0, 0, 0}, 1e-10, 1, 1e-4, 64.0);
    const double rho_2c = critical_radius(Potential::constant(1.0), {0, 0, 0}, 1e-10, 1, 1e-4, 64.0);
    REQUIRE(rho_2c == Catch::Approx(rho_c / std::sqrt(2.0)).margin(1e-6));
}

TEST_CASE("hermite critical radius tracks (1+|x|)^{-1}", "[potential]") {
    Grid g(3, 8.0, 16);
    CriticalRadiusProfile prof(g, Potential::hermite(), 1e-8);
    double lo = kInf, hi = 0.0;
    for (int k = 0; k <= 32; ++k) {
        Vec3 x{-8.0 + 16.0 * k / 32.0, 0, 0};
        const double band = prof.rho_at_point(x) * (1.0 + std::abs(x[0]));
        lo = std::min(lo, band);
        hi = std::max(hi, band);
        REQUIRE(prof.residual_at(x) <= 1e-6);
    }
    REQUIRE(hi / lo < 10.0);
}

TEST_CASE("psi functional", "[potential]") {
    Grid g3(3, 2.0, 8);
    CriticalRadiusProfile prof(g3, Potential::constant(3.0 / (4.0 * M_PI)), 1e-8);
    PsiFunctional psi1(1.0, PsiFunctional::Mode::Centered, prof);
    REQUIRE(psi1(Cube{{0, 0, 0}, 2.0}) == Catch::Approx(3.0).margin(2e-3));

    PsiFunctional psi0(0.0, PsiFunctional::Mode::Centered, prof);
    REQUIRE(psi0(Cube{{0.4, -0.2, 0.1}, 0.7}) == 1.0);

    Grid g(1, 4.0, 64);
    CriticalRadiusProfile prof0(g, Potential::zero());
    PsiFunctional psz(5.0, PsiFunctional::Mode::Sup, prof0);
    REQUIRE(psz(Cube{{0.5, 0, 0}, 1.0}) == 1.0);

    // power identity and the tilde ordering
    CriticalRadiusProfile profh(g, Potential::hermite(), 1e-7);
    for (double theta : {0.5, 2.0})
        for (double p : {1.5, 3.0}) {
            PsiFunctional pa(theta, PsiFunctional::Mode::Centered, profh);
            PsiFunctional pb(p * theta, PsiFunctional::Mode::Centered, profh);
            PsiFunctional pt(theta, PsiFunctional::Mode::Sup, profh);
            for (double side : {0.25, 1.0, 4.0})
                for (double c : {-1.5, 0.0, 0.8}) {
                    Cube q{{c, 0, 0}, side};
                    if (!cube_in_domain(g, q)) continue;
                    REQUIRE(std::pow(pa(q), p) == Catch::Approx(pb(q)).epsilon(1e-12));
                    REQUIRE(pt(q) <= pa(q) * (1.0 + 1e-12));
                    REQUIRE(profh.rho_sup(q) >= profh.rho_centered(q));
                }
        }
}

TEST_CASE("rho sup is monotone under cube inclusion", "[potential]") {
    Grid g(1, 4.0, 64);
    CriticalRadiusProfile prof(g, Potential::hermite(), 1e-7);
    for (double c : {-2.0, -0.4, 0.0, 1.3}) {
        Cube inner{{c, 0, 0}, 0.5};
        Cube outer{{c / 2.0, 0, 0}, 0.5 + std::abs(c) + 0.5};
        if (!cube_in_domain(g, outer)) continue;
        REQUIRE(cube_contains(outer, inner, 1));
        REQUIRE(prof.rho_sup(inner) <= prof.rho_sup(outer) + 1e-15);
    }
}

TEST_CASE("reverse Holder checks", "[potential]") {
    Grid g(1, 4.0, 64);
    CubeCollection col = enumerate_cubes(g, "dyadic-all-shifts", 5);
    ReverseHolderReport rc = reverse_holder_check(Potential::constant(0.9), 2.0, g, col);
    REQUIRE(rc.constant == Catch::Approx(1.0).margin(1e-12));

    ReverseHolderReport rz = reverse_holder_check(Potential::zero(), 2.0, g, col);
    REQUIRE(rz.vacuous);

    double prev = 0.0;
    for (long N : {32L, 64L, 128L}) {
        Grid gr(1, 4.0, N);
        ReverseHolderReport rh = reverse_holder_check(
            Potential::hermite(), 2.0, gr,
            enumerate_cubes(gr, "dyadic-all-shifts", (int)std::log2((double)N)));
        REQUIRE(std::isfinite(rh.constant));
        if (prev > 0) REQUIRE(rh.constant <= prev * 1.10);
        prev = rh.constant;
    }

    REQUIRE_THROWS_AS(reverse_holder_check(Potential::hermite(), 0.2, g, col), ConfigError);
}

TEST_CASE("regularity diagnostics", "[potential]") {
    Grid g(1, 4.0, 64);
    std::vector<Vec3> pts;
    for (int k = 0; k <= 10; ++k) pts.push_back({-3.5 + 7.0 * k / 10.0, 0, 0});

    DiagnosticsReport dc = regularity_diagnostics(Potential::constant(0.5), g, pts);
    REQUIRE(dc.C0 <= 1.5);
    REQUIRE(dc.max_residual <= 1e-6);

    DiagnosticsReport dz = regularity_diagnostics(Potential::zero(), g, pts);
    REQUIRE(dz.sentinel);

    DiagnosticsReport dh1 = regularity_diagnostics(Potential::hermite(), g, pts);
    std::vector<Vec3> pts2;
    for (int k = 0; k <= 20; ++k) pts2.push_back({-3.5 + 7.0 * k / 20.0, 0, 0});
    DiagnosticsReport dh2 = regularity_diagnostics(Potential::hermite(), g, pts2);
    REQUIRE(std::isfinite(dh2.C0));
    REQUIRE(dh2.C0 <= dh1.C0 * 1.5 + 0.5);  // stable under sample refinement
    REQUIRE(dh2.n0 >= 1.0);
}

TEST_CASE("bisection rejects a non-monotone profile", "[potential]") {
    // critical_radius spot-checks monotonicity of F on the bracket; the
    // supported families all pass
    for (const Potential& v : {Potential::constant(2.0), Potential::hermite(),
                               Potential::power_law(0.7)}) {
        REQUIRE_NOTHROW(critical_radius(v, {0.5, 0, 0}, 1e-7, 1, 1e-3, 32.0));
    }
}

TEST_CASE("potential config round trip", "[potential]") {
    for (const Potential& v : {Potential::zero(), Potential::constant(1.25),
                               Potential::power_law(1.5), Potential::hermite()}) {
        Potential back = potential_from_json(potential_to_json(v));
        REQUIRE(back.family == v.family);
        REQUIRE(back.param == v.param);
    }
    REQUIRE_THROWS_AS(potential_from_json(nlohmann::json{{"family", "bogus"}}), ConfigError);
}
