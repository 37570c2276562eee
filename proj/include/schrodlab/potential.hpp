#pragma once

// Potential families V >= 0 with closed-form ball integrals, the critical
// radius rho(x) solving r^{2-n} * integral_{B(x,r)} V = 1, and the cube
// penalties psi_theta (centered) and psi~_theta (sup over the cube).

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "schrodlab/common.hpp"
#include "schrodlab/grid.hpp"

namespace schrodlab {

struct Potential {
    enum class Family { Zero, Constant, PowerLaw };

    Family family = Family::Zero;
    double param = 0.0;  // c for Constant, exponent a for PowerLaw

    static Potential zero() { return {Family::Zero, 0.0}; }
    static Potential constant(double c) {
        if (c < 0) throw ConfigError("potential must be non-negative");
        return {Family::Constant, c};
    }
    static Potential power_law(double a) {
        if (a < 0) throw ConfigError("power-law exponent must be >= 0");
        return {Family::PowerLaw, a};
    }
    static Potential hermite() { return power_law(2.0); }

    double operator()(const Vec3& x, int dim) const {
        switch (family) {
            case Family::Zero: return 0.0;
            case Family::Constant: return param;
            case Family::PowerLaw: {
                double r2 = 0;
                for (int a = 0; a < dim; ++a) r2 += x[a] * x[a];
                return std::pow(r2, param / 2.0);
            }
        }
        return 0.0;
    }

    bool is_zero() const {
        return family == Family::Zero || (family == Family::Constant && param == 0.0);
    }
};

inline Potential potential_from_json(const nlohmann::json& j) {
    const std::string fam = j.at("family").get<std::string>();
    if (fam == "zero") return Potential::zero();
    if (fam == "constant") return Potential::constant(j.at("param").get<double>());
    if (fam == "power") {
        double a = j.contains("exponent") ? j.at("exponent").get<double>() : j.at("param").get<double>();
        return Potential::power_law(a);
    }
    if (fam == "hermite") return Potential::hermite();
    throw ConfigError("unknown potential family: " + fam);
}

inline nlohmann::json potential_to_json(const Potential& v) {
    switch (v.family) {
        case Potential::Family::Zero: return {{"family", "zero"}};
        case Potential::Family::Constant: return {{"family", "constant"}, {"param", v.param}};
        case Potential::Family::PowerLaw: return {{"family", "power"}, {"exponent", v.param}};
    }
    return {};
}

namespace detail {

// antiderivative of |y|^a in 1-D
inline double abs_pow_antideriv(double y, double a) {
    return std::copysign(std::pow(std::abs(y), a + 1.0), y) / (a + 1.0);
}

// integral over B(x,r) in R^3 of |y|^a, X = |x| > 0, via the sphere average
//   avg_{S^2} |x + s w|^a = ((X+s)^{a+2} - |X-s|^{a+2}) / (2(a+2) X s).
// The radial integral has elementary antiderivatives.
inline double ball_int_power_3d(double X, double r, double a) {
    const double b = a + 2.0;
    auto J_plus = [&](double s) {  // antiderivative of s (X+s)^b
        return std::pow(X + s, b + 2.0) / (b + 2.0) - X * std::pow(X + s, b + 1.0) / (b + 1.0);
    };
    auto J_minus = [&](double s) {  // antiderivative of s |X-s|^b
        const double u = X - s;
        const double t1 = std::pow(std::abs(u), b + 2.0) / (b + 2.0);
        const double t2 = X * std::copysign(std::pow(std::abs(u), b + 1.0), u) / (b + 1.0);
        return t1 - t2;  // note d/ds of both flips sign through u = X-s
    };
    const double I_plus = J_plus(r) - J_plus(0.0);
    const double I_minus = J_minus(r) - J_minus(0.0);
    return (2.0 * M_PI / ((a + 2.0) * X)) * (I_plus - I_minus);
}

// 2-D angular average of |x + s w|^a over the unit circle (trapezoid on a
// periodic integrand) feeding an adaptive radial Simpson rule.
inline double ball_int_power_2d(double X, double r, double a) {
    auto circle_avg = [&](double s) {
        const int M = 256;
        double acc = 0.0;
        for (int k = 0; k < M; ++k) {
            const double phi = 2.0 * M_PI * (k + 0.5) / M;
            acc += std::pow(X * X + s * s + 2.0 * X * s * std::cos(phi), a / 2.0);
        }
        return acc / M;
    };
    auto radial = [&](int segments) {
        // Simpson over [0, r] of 2*pi*s*avg(s)
        double acc = 0.0;
        const double hh = r / segments;
        auto f = [&](double s) { return 2.0 * M_PI * s * circle_avg(s); };
        for (int i = 0; i < segments; ++i) {
            const double s0 = i * hh, s1 = s0 + hh;
            acc += (hh / 6.0) * (f(s0) + 4.0 * f(0.5 * (s0 + s1)) + f(s1));
        }
        return acc;
    };
    double prev = radial(32), cur = radial(64);
    int seg = 64;
    while (std::abs(cur - prev) > 5e-5 * std::abs(cur) && seg < 1024) {
        prev = cur;
        seg *= 2;
        cur = radial(seg);
    }
    return cur;
}

}  // namespace detail

// integral_{B(x,r)} V(y) dy with V extended by its closed form outside any box.
inline double ball_integral(const Potential& v, const Vec3& x, double r, int dim) {
    if (!(r > 0)) throw ConfigError("ball radius must be positive");
    switch (v.family) {
        case Potential::Family::Zero:
            return 0.0;
        case Potential::Family::Constant:
            return v.param * unit_ball_volume(dim) * std::pow(r, dim);
        case Potential::Family::PowerLaw: {
            const double a = v.param;
            double X2 = 0;
            for (int k = 0; k < dim; ++k) X2 += x[k] * x[k];
            const double X = std::sqrt(X2);
            if (X == 0.0)
                return unit_sphere_area(dim) * std::pow(r, a + dim) / (a + dim);
            if (a == 2.0)  // |y|^2 = |x|^2 + 2 x.(y-x) + |y-x|^2, cross term integrates to zero
                return X2 * unit_ball_volume(dim) * std::pow(r, dim)
                     + unit_sphere_area(dim) * std::pow(r, dim + 2.0) / (dim + 2.0);
            if (dim == 1)
                return detail::abs_pow_antideriv(x[0] + r, a) - detail::abs_pow_antideriv(x[0] - r, a);
            if (dim == 3) return detail::ball_int_power_3d(X, r, a);
            return detail::ball_int_power_2d(X, r, a);
        }
    }
    return 0.0;
}

// F(r) = r^{2-n} integral_{B(x,r)} V, the quantity pinned to 1 at r = rho(x).
inline double critical_radius_F(const Potential& v, const Vec3& x, double r, int dim) {
    return std::pow(r, 2.0 - dim) * ball_integral(v, x, r, dim);
}

// rho(x) = sup{ r > 0 : F(r) <= 1 }, located by bisection on the monotone F.
// Returns +inf when F(r_max) < 1 (e.g. V == 0).
inline double critical_radius(const Potential& v, const Vec3& x, double tol, int dim,
                              double r_lo, double r_max) {
    if (!(tol > 0)) throw ConfigError("tolerance must be positive");
    if (v.is_zero()) return kInf;
    double lo = r_lo, hi = r_max;
    double Fhi = critical_radius_F(v, x, hi, dim);
    if (Fhi < 1.0) return kInf;
    double Flo = critical_radius_F(v, x, lo, dim);
    int guard = 0;
    while (Flo > 1.0 && guard++ < 200) {
        lo /= 2.0;
        Flo = critical_radius_F(v, x, lo, dim);
    }
    if (Flo > 1.0) throw AlgorithmError("no lower bracket for critical radius");

    // monotonicity spot check on the bracket
    double prev = Flo;
    for (int i = 1; i <= 8; ++i) {
        const double r = lo * std::pow(hi / lo, double(i) / 8.0);
        const double F = critical_radius_F(v, x, r, dim);
        if (F < prev * (1.0 - 1e-9) - 1e-12)
            throw AlgorithmError("critical-radius search: F(r) not nondecreasing");
        prev = F;
    }

    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double F = critical_radius_F(v, x, mid, dim);
        if (std::abs(F - 1.0) <= tol) return mid;
        (F < 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Per-grid cache of rho at cell centers; write-once, idempotent.
class CriticalRadiusProfile {
  public:
    CriticalRadiusProfile(const Grid& g, const Potential& v, double tol = 1e-6)
        : grid_(g), potential_(v), tol_(tol),
          r_lo_(g.spacing / 4.0), r_max_(8.0 * g.half_extent),
          cache_(g.cell_count(), std::numeric_limits<double>::quiet_NaN()) {}

    const Grid& grid() const { return grid_; }
    const Potential& potential() const { return potential_; }
    double tolerance() const { return tol_; }
    double r_max() const { return r_max_; }
    bool infinity_sentinel() const { return potential_.is_zero(); }

    double rho_at_cell(long idx) const {
        double& slot = cache_[idx];
        if (std::isnan(slot))
            slot = critical_radius(potential_, grid_.cell_point(idx), tol_, grid_.dim, r_lo_, r_max_);
        return slot;
    }

    double rho_at_point(const Vec3& x) const {
        return critical_radius(potential_, x, tol_, grid_.dim, r_lo_, r_max_);
    }

    // rho at the cell center nearest to the cube center; keeps the centered
    // penalty and the sup penalty sampled from the same finite point set.
    double rho_centered(const Cube& q) const {
        return rho_at_cell(nearest_cell_in(q));
    }

    // max of rho over the cell centers inside the cube
    double rho_sup(const Cube& q) const {
        const CellRange r = cell_range(grid_, q);
        if (r.count() == 0) throw DegenerateCubeError("cube contains no cell center");
        double m = -kInf;
        for_each_cell(grid_, r, [&](long i) { m = std::max(m, rho_at_cell(i)); });
        return m;
    }

    long nearest_cell_in(const Cube& q) const {
        const CellRange r = cell_range(grid_, q);
        if (r.count() == 0) throw DegenerateCubeError("cube contains no cell center");
        std::array<long, 3> idx{0, 0, 0};
        for (int a = 0; a < grid_.dim; ++a) {
            long best = r.lo[a];
            double dbest = std::abs(grid_.cell_center(best) - q.center[a]);
            for (long i = r.lo[a]; i < r.hi[a]; ++i) {
                const double d = std::abs(grid_.cell_center(i) - q.center[a]);
                if (d < dbest) { dbest = d; best = i; }
            }
            idx[a] = best;
        }
        return grid_.flatten(idx);
    }

    double residual_at(const Vec3& x) const {
        const double rho = rho_at_point(x);
        if (!std::isfinite(rho)) return 0.0;
        return std::abs(critical_radius_F(potential_, x, rho, grid_.dim) - 1.0);
    }

  private:
    Grid grid_;
    Potential potential_;
    double tol_;
    double r_lo_, r_max_;
    mutable std::vector<double> cache_;
};

// (1 + l(Q)/rho)^theta with rho taken at the (snapped) center or as the
// sup over the cube. rho = +inf gives psi = 1.
struct PsiFunctional {
    enum class Mode { Centered, Sup };

    double theta = 0.0;
    Mode mode = Mode::Centered;
    const CriticalRadiusProfile* profile = nullptr;

    PsiFunctional() = default;
    PsiFunctional(double th, Mode m, const CriticalRadiusProfile& prof)
        : theta(th), mode(m), profile(&prof) {
        if (th < 0) throw ConfigError("theta must be >= 0");
    }

    double rho(const Cube& q) const {
        if (profile->infinity_sentinel()) return kInf;
        return mode == Mode::Centered ? profile->rho_centered(q) : profile->rho_sup(q);
    }

    double log_value(const Cube& q) const {
        const double r = rho(q);
        if (!std::isfinite(r)) return 0.0;
        return theta * std::log1p(q.side / r);
    }

    double operator()(const Cube& q) const { return std::exp(log_value(q)); }

    PsiFunctional with_theta(double th) const {
        PsiFunctional p = *this;
        p.theta = th;
        return p;
    }
};

// sup over cubes of (avg V^sigma)^{1/sigma} / (avg V); vacuous (1) for V == 0.
struct ReverseHolderReport {
    double constant = 1.0;
    Cube argmax;
    long exception_cubes = 0;  // cubes where avg V = 0 while V not identically 0
    bool vacuous = false;
};

inline ReverseHolderReport reverse_holder_check(const Potential& v, double sigma,
                                                const Grid& g, const CubeCollection& cubes) {
    if (sigma < g.dim / 2.0) throw ConfigError("reverse Holder exponent must be >= n/2");
    ReverseHolderReport rep;
    if (v.is_zero()) {
        rep.vacuous = true;
        return rep;
    }
    GridFunction vf = GridFunction::from_function(g, [&](const Vec3& x) { return v(x, g.dim); });
    GridFunction vs = vf;
    for (double& s : vs.samples) s = std::pow(s, sigma);
    SummedArea sa1(g, vf.samples), sas(g, vs.samples);
    rep.constant = 0.0;
    for (const Cube& q : cubes.cubes) {
        const CellRange r = cell_range(g, q);
        const long c = r.count();
        if (c == 0) continue;
        const double m1 = sa1.box_sum(r) / double(c);
        const double ms = sas.box_sum(r) / double(c);
        if (m1 <= 0.0) {
            ++rep.exception_cubes;
            continue;
        }
        const double ratio = std::pow(ms, 1.0 / sigma) / m1;
        if (ratio > rep.constant) {
            rep.constant = ratio;
            rep.argmax = q;
        }
    }
    return rep;
}

// Fitted constants for the regularity lemma: the two-sided comparison
//   rho(x)/(C0 [rho(x)+|x-y|]^{k0}) <= rho(y) <= C0 rho(x) [rho(x)+|x-y|]^{k0/(1+k0)},
// the residual of F(rho) = 1, the doubling order n0, and the two-branch
// growth bound of the ball averages.
struct DiagnosticsReport {
    double C0 = 0.0;
    double k0 = 1.0;
    double n0 = 0.0;
    double sigma0 = 0.0;
    double max_residual = 0.0;
    double remark_bound_constant = 0.0;
    bool sentinel = false;

    nlohmann::json to_json() const {
        return {{"C0", C0}, {"k0", k0}, {"n0", n0}, {"sigma0", sigma0},
                {"max_residual", max_residual},
                {"remark_bound_constant", remark_bound_constant},
                {"sentinel", sentinel}};
    }
};

inline DiagnosticsReport regularity_diagnostics(const Potential& v, const Grid& g,
                                                const std::vector<Vec3>& samples,
                                                double tol = 1e-6) {
    DiagnosticsReport rep;
    if (v.is_zero()) {
        rep.sentinel = true;
        return rep;
    }
    const double r_max = 8.0 * g.half_extent;
    std::vector<double> rho(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        rho[i] = critical_radius(v, samples[i], tol, g.dim, g.spacing / 4.0, r_max);
        rep.max_residual = std::max(
            rep.max_residual,
            std::abs(critical_radius_F(v, samples[i], rho[i], g.dim) - 1.0));
    }

    // smallest C0 over a k0 grid satisfying both directions on all pairs
    double bestC = kInf, bestK = 1.0;
    for (double k0 : {1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0}) {
        double C = 1.0;
        for (std::size_t i = 0; i < samples.size(); ++i)
            for (std::size_t j = 0; j < samples.size(); ++j) {
                if (i == j) continue;
                double d = 0;
                for (int a = 0; a < g.dim; ++a) {
                    const double t = samples[i][a] - samples[j][a];
                    d += t * t;
                }
                d = std::sqrt(d);
                const double upper = rho[i] * std::pow(rho[i] + d, k0 / (1.0 + k0));
                const double lower = rho[i] / std::pow(rho[i] + d, k0);
                C = std::max(C, rho[j] / upper);
                C = std::max(C, lower / rho[j]);
            }
        if (C < bestC) { bestC = C; bestK = k0; }
    }
    rep.C0 = bestC;
    rep.k0 = bestK;

    // doubling order: integral_{2B} V <= 2^{n0} integral_B V
    double n0 = 0.0;
    for (const Vec3& x : samples)
        for (double r : {0.25 * g.half_extent, 0.5 * g.half_extent, g.half_extent}) {
            const double I1 = ball_integral(v, x, r, g.dim);
            const double I2 = ball_integral(v, x, 2.0 * r, g.dim);
            if (I1 > 0) n0 = std::max(n0, std::log2(I2 / I1));
        }
    rep.n0 = n0;

    // growth exponent of F: worst-case log(F(R)/F(r))/log(R/r)
    double sigma0 = kInf;
    for (const Vec3& x : samples) {
        const auto rs = log_spaced(g.spacing, 4.0 * g.half_extent, 6);
        for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
            const double Fa = critical_radius_F(v, x, rs[i], g.dim);
            const double Fb = critical_radius_F(v, x, rs[i + 1], g.dim);
            if (Fa > 0 && Fb > 0)
                sigma0 = std::min(sigma0, std::log(Fb / Fa) / std::log(rs[i + 1] / rs[i]));
        }
    }
    rep.sigma0 = std::isfinite(sigma0) ? std::max(sigma0, 0.0) : 0.0;

    // two-branch bound: r^2 avg_B V <= C (r/rho)^{sigma0} for r <= rho,
    //                   r^2 avg_B V <= C (r/rho)^{n0+2-n} for r > rho
    double Crem = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(rho[i])) continue;
        const auto rs = log_spaced(g.spacing / 2.0, 4.0 * g.half_extent, 10);
        for (double r : rs) {
            const double avg = ball_integral(v, samples[i], r, g.dim)
                               / (unit_ball_volume(g.dim) * std::pow(r, g.dim));
            const double lhs = r * r * avg;
            const double ratio = r / rho[i];
            const double shape = (r <= rho[i]) ? std::pow(ratio, rep.sigma0)
                                               : std::pow(ratio, rep.n0 + 2.0 - g.dim);
            if (shape > 0) Crem = std::max(Crem, lhs / shape);
        }
    }
    rep.remark_bound_constant = Crem;
    return rep;
}

}  // namespace schrodlab
