#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "schrodlab/semigroup.hpp"

using namespace schrodlab;

namespace {
GridFunction noise(const Grid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    GridFunction f(g);
    for (double& v : f.samples) v = u(rng);
    return f;
}
}  // namespace

TEST_CASE("operator construction and spectrum", "[semigroup]") {
    Grid g(1, 4.0, 128);
    DiscreteOperator op(g, Potential::hermite());
    REQUIRE(op.orthogonality_defect() < 1e-8);
    REQUIRE(op.min_eigenvalue() > 0.0);
    for (long j = 1; j < op.size(); ++j)
        REQUIRE(op.eigenvalue(j) >= op.eigenvalue(j - 1));

    Grid g2(2, 1.0, 8);
    REQUIRE_THROWS_AS(DiscreteOperator(g2, Potential::zero()), UnsupportedError);
}

TEST_CASE("heat semigroup identities", "[semigroup]") {
    Grid g(1, 4.0, 128);
    DiscreteOperator herm(g, Potential::hermite());
    GridFunction f = noise(g, 101);

    // t = 0 identity
    GridFunction f0 = herm.heat_apply(f, 0.0);
    for (long i = 0; i < g.cell_count(); ++i) REQUIRE(f0.samples[i] == f.samples[i]);

    // semigroup law
    GridFunction a = herm.heat_apply(herm.heat_apply(f, 0.4), 0.35);
    GridFunction b = herm.heat_apply(f, 0.75);
    for (long i = 0; i < g.cell_count(); ++i)
        REQUIRE(a.samples[i] == Catch::Approx(b.samples[i]).margin(1e-10));

    // positivity and L^2 contraction
    GridFunction fp = f;
    for (double& v : fp.samples) v = std::abs(v);
    GridFunction hp = herm.heat_apply(fp, 0.6);
    for (double v : hp.samples) REQUIRE(v >= -1e-12);
    double n0 = 0, n1 = 0;
    GridFunction hf = herm.heat_apply(f, 0.25);
    for (long i = 0; i < g.cell_count(); ++i) {
        n0 += f.samples[i] * f.samples[i];
        n1 += hf.samples[i] * hf.samples[i];
    }
    REQUIRE(n1 <= n0 * (1.0 + 1e-12));

    // periodic V = 0 preserves constants
    DiscreteOperator flat(g, Potential::zero(), Boundary::Periodic);
    GridFunction one(g, 1.0);
    GridFunction h1 = flat.heat_apply(one, 3.0);
    for (double v : h1.samples) REQUIRE(v == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("hermite ground state", "[semigroup]") {
    Grid g(1, 10.0, 512);
    DiscreteOperator op(g, Potential::hermite());
    REQUIRE(op.eigenvalue(0) == Catch::Approx(1.0).margin(0.01));

    GridFunction ground = GridFunction::from_function(
        g, [](const Vec3& x) { return std::exp(-x[0] * x[0] / 2.0); });
    GridFunction ht = op.heat_apply(ground, 1.0);
    const double decay = std::exp(-op.eigenvalue(0));
    double dev = 0.0, scale = 0.0;
    for (long i = 0; i < g.cell_count(); ++i) {
        dev = std::max(dev, std::abs(ht.samples[i] - decay * ground.samples[i]));
        scale = std::max(scale, ground.samples[i]);
    }
    REQUIRE(dev <= 0.01 * scale * decay);
}

TEST_CASE("free-kernel domination and the shift identity", "[semigroup]") {
    Grid g(1, 4.0, 128);
    DiscreteOperator herm(g, Potential::hermite());
    DiscreteOperator flat(g, Potential::zero());
    for (double t : {0.05, 0.4, 1.5}) {
        Eigen::MatrixXd kh = herm.heat_kernel(t);
        Eigen::MatrixXd kf = flat.heat_kernel(t);
        REQUIRE((kh - kf).maxCoeff() <= 1e-12);
        REQUIRE(kh.minCoeff() >= -1e-12);
    }

    DiscreteOperator flat_p(g, Potential::zero(), Boundary::Periodic);
    DiscreteOperator const_p(g, Potential::constant(0.7), Boundary::Periodic);
    const double t = 0.43;
    Eigen::MatrixXd kc = const_p.heat_kernel(t);
    Eigen::MatrixXd k0 = flat_p.heat_kernel(t);
    REQUIRE((kc - std::exp(-0.7 * t) * k0).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("heat kernel bound diagnostics", "[semigroup]") {
    Grid g(1, 4.0, 128);
    // V = 0 Dirichlet: damping is 1 and the kernel sits under the widened
    // Gaussian with a dimension-free constant near (4 pi)^{-1/2}
    {
        DiscreteOperator flat(g, Potential::zero());
        CriticalRadiusProfile prof(g, Potential::zero());
        HeatKernelBoundReport rep =
            heat_kernel_bound_check(flat, prof, {0.05, 0.2, 1.0}, 2.0);
        REQUIRE(rep.fitted_CN > 0.2);
        REQUIRE(rep.fitted_CN < 0.5);
        REQUIRE(rep.max_free_domination_defect <= 1e-12);
    }
    // V = 0 periodic: the kernel *is* the free kernel (defect identically 0)
    {
        DiscreteOperator flat_p(g, Potential::zero(), Boundary::Periodic);
        CriticalRadiusProfile prof(g, Potential::zero());
        HeatKernelBoundReport rep = heat_kernel_bound_check(flat_p, prof, {0.1, 0.5}, 2.0);
        REQUIRE(rep.max_free_domination_defect <= 1e-15);
    }
    // Hermite: fitted constant stable under t-grid refinement
    {
        DiscreteOperator herm(g, Potential::hermite());
        CriticalRadiusProfile prof(g, Potential::hermite(), 1e-7);
        const double coarse =
            heat_kernel_bound_check(herm, prof, log_spaced(0.05, 1.0, 5), 2.0).fitted_CN;
        const double fine =
            heat_kernel_bound_check(herm, prof, log_spaced(0.05, 1.0, 9), 2.0).fitted_CN;
        REQUIRE(std::isfinite(fine));
        REQUIRE(fine <= coarse * 1.10 + 1e-12);
    }
}

TEST_CASE("fractional power via the spectrum", "[semigroup]") {
    Grid g(1, 4.0, 128);
    DiscreteOperator op(g, Potential::hermite());

    // eigenvector maps to lambda^{-alpha/2} eigenvector
    GridFunction phi = op.eigenvector(3);
    GridFunction out = op.frac_power_apply(phi, 0.5);
    const double lam = std::pow(op.eigenvalue(3), -0.25);
    for (long i = 0; i < g.cell_count(); ++i)
        REQUIRE(out.samples[i] == Catch::Approx(lam * phi.samples[i]).margin(1e-10));

    // alpha -> 0 approaches the identity
    GridFunction f = noise(g, 55);
    GridFunction near_id = op.frac_power_apply(f, 1e-6);
    double dev = 0, scale = 0;
    for (long i = 0; i < g.cell_count(); ++i) {
        dev = std::max(dev, std::abs(near_id.samples[i] - f.samples[i]));
        scale = std::max(scale, std::abs(f.samples[i]));
    }
    REQUIRE(dev <= 1e-3 * scale);

    // spectral and normalized time-integral routes agree
    for (double alpha : {0.5, 0.9}) {
        GridFunction a = op.frac_power_apply(f, alpha);
        GridFunction b = op.frac_power_time_integral(f, alpha);
        double d2 = 0, s2 = 0;
        for (long i = 0; i < g.cell_count(); ++i) {
            d2 = std::max(d2, std::abs(a.samples[i] - b.samples[i]));
            s2 = std::max(s2, std::abs(a.samples[i]));
        }
        REQUIRE(d2 <= 1e-3 * s2);
    }

    REQUIRE_THROWS_AS(op.frac_power_apply(f, 1.5), ConfigError);
    DiscreteOperator flat_p(g, Potential::zero(), Boundary::Periodic);
    REQUIRE_THROWS_AS(flat_p.frac_power_apply(f, 0.5), SingularOperatorError);
}

TEST_CASE("fractional kernel bound", "[semigroup]") {
    const double alpha = 0.5;
    Grid g(1, 8.0, 256);
    // free case: the fitted constant sits near the 1-D Riesz coefficient
    {
        DiscreteOperator flat(g, Potential::zero());
        CriticalRadiusProfile prof(g, Potential::zero());
        FracKernelBoundReport rep = frac_kernel_bound_check(flat, prof, alpha, 0.0);
        const double riesz = std::tgamma((1.0 - alpha) / 2.0) /
                             (std::pow(2.0, alpha) * std::sqrt(M_PI) * std::tgamma(alpha / 2.0));
        REQUIRE(std::isfinite(rep.fitted_Cphi));  // diagonal excluded, no NaN
        REQUIRE(rep.fitted_Cphi > 0.25 * riesz);
        REQUIRE(rep.fitted_Cphi < 4.0 * riesz);
    }
    // Hermite with phi = 2: stable under N doubling
    {
        std::vector<double> fits;
        for (long N : {128L, 256L}) {
            Grid gr(1, 8.0, N);
            DiscreteOperator op(gr, Potential::hermite());
            CriticalRadiusProfile prof(gr, Potential::hermite(), 1e-7);
            fits.push_back(frac_kernel_bound_check(op, prof, alpha, 2.0).fitted_Cphi);
        }
        REQUIRE(std::isfinite(fits[1]));
        REQUIRE(fits[1] <= fits[0] * 1.10);
    }
}

TEST_CASE("maximal heat function", "[semigroup]") {
    Grid g(1, 4.0, 128);
    DiscreteOperator op(g, Potential::hermite());
    GridFunction f = noise(g, 7);
    for (double& v : f.samples) v = std::abs(v);

    GridFunction m0 = maximal_heat(op, f, {0.0});
    for (long i = 0; i < g.cell_count(); ++i) REQUIRE(m0.samples[i] == f.samples[i]);

    DiscreteOperator flat_p(g, Potential::zero(), Boundary::Periodic);
    GridFunction one(g, 1.0);
    GridFunction m1 = maximal_heat(flat_p, one, {0.0, 0.3, 2.0});
    for (double v : m1.samples) REQUIRE(v == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("gaussian surrogate for n >= 2", "[semigroup]") {
    Grid g(2, 2.0, 16);
    CriticalRadiusProfile prof(g, Potential::hermite(), 1e-6);
    GridFunction one(g, 1.0);
    GridFunction up = heat_surrogate_apply(g, prof, one, 0.5, 2.0);
    for (double v : up.samples) {
        REQUIRE(std::isfinite(v));
        REQUIRE(v >= 0.0);
    }
}
