#pragma once

// Log-domain weight storage and the weight characteristics: A_p^theta,
// A~_p^theta, A_{p,q}^{alpha,theta}, A~_{p,q}^{alpha,theta} and the
// psi-free restricted characteristics over a declared cube collection.

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "schrodlab/common.hpp"
#include "schrodlab/grid.hpp"
#include "schrodlab/potential.hpp"

namespace schrodlab {

// Strictly positive weight, stored as log samples so e^{eta |x|^2}-type
// weights survive on the full box.
struct Weight {
    Grid grid;
    std::vector<double> log_samples;

    Weight() = default;
    explicit Weight(const Grid& g, double fill_log = 0.0) : grid(g), log_samples(g.cell_count(), fill_log) {}
    Weight(const Grid& g, std::vector<double> ls) : grid(g), log_samples(std::move(ls)) {
        if ((long)log_samples.size() != g.cell_count()) throw ConfigError("log sample count != N^n");
        for (double v : log_samples)
            if (!std::isfinite(v)) throw ConfigError("weight log-sample not finite");
    }

    static Weight from_log_function(const Grid& g, const std::function<double(const Vec3&)>& logw) {
        Weight w(g);
        for (long i = 0; i < g.cell_count(); ++i) w.log_samples[i] = logw(g.cell_point(i));
        return w;
    }
    static Weight constant(const Grid& g, double c) {
        if (!(c > 0)) throw ConfigError("weight must be strictly positive");
        return Weight(g, std::log(c));
    }

    double value(long i) const { return std::exp(log_samples[i]); }
    GridFunction log_function() const { return GridFunction(grid, log_samples); }

    // w^s as a weight
    Weight power(double s) const {
        Weight out = *this;
        for (double& v : out.log_samples) v *= s;
        return out;
    }
    Weight reciprocal() const { return power(-1.0); }
};

// log of the cube average of w^s: LSE of s*log w over the cells minus log count.
inline double log_avg_pow(const Weight& w, const CellRange& r, double s) {
    LogSumExpAcc acc;
    for_each_cell(w.grid, r, [&](long i) { acc.add(s * w.log_samples[i]); });
    if (acc.count() == 0) throw DegenerateCubeError("cube contains no cell center");
    return acc.value() - std::log((double)acc.count());
}

inline double log_weight_mass(const Weight& w, const CellRange& r, double s = 1.0) {
    LogSumExpAcc acc;
    for_each_cell(w.grid, r, [&](long i) { acc.add(s * w.log_samples[i]); });
    return acc.value() + w.grid.dim * std::log(w.grid.spacing);
}

inline double min_log_over(const Weight& w, const CellRange& r) {
    double m = kInf;
    for_each_cell(w.grid, r, [&](long i) { m = std::min(m, w.log_samples[i]); });
    return m;
}

// Exponent bookkeeping (n, p, q, alpha, theta) with the derived p', gamma, K.
// n is the bookkeeping dimension and may differ from the grid dimension
// (surrogate-weight experiments run n=3 arithmetic on 1-D grids).
struct ExponentSet {
    double n = 1, p = 2, q = 2, alpha = 0, theta = 0;

    ExponentSet() = default;
    ExponentSet(double n_, double p_, double q_, double alpha_, double theta_)
        : n(n_), p(p_), q(q_), alpha(alpha_), theta(theta_) {
        if (!(p > 1)) throw ConfigError("need p > 1");
        if (!(alpha >= 0 && alpha < n)) throw ConfigError("need 0 <= alpha < n");
        if (std::abs(1.0 / p - 1.0 / q - alpha / n) > 1e-12)
            throw ConfigError("exponent relation 1/p - 1/q = alpha/n violated");
        if (theta < 0) throw ConfigError("need theta >= 0");
    }
    static ExponentSet from_p_alpha(double n, double p, double alpha, double theta) {
        const double iq = 1.0 / p - alpha / n;
        if (!(iq > 0)) throw ConfigError("derived q not positive");
        return ExponentSet(n, p, 1.0 / iq, alpha, theta);
    }

    double p_conj() const { return p / (p - 1.0); }
    double q_conj() const { return q / (q - 1.0); }
    double gamma() const { return theta / (1.0 + p_conj() / q); }
    double K() const {
        return 2.0 * (1.0 + q / p_conj()) * (1.0 - alpha / n) * std::max(1.0, p_conj() / q);
    }
};

struct CubeFactors {
    Cube cube;
    double log_factor1 = 0.0;  // log of the first averaged factor
    double log_factor2 = 0.0;  // log of the second factor (already raised to its power)
    double log_product = 0.0;
};

struct CharacteristicReport {
    double log_value = -kInf;
    Cube argmax_cube;
    std::string collection_tag;
    std::vector<CubeFactors> per_cube;

    double value() const { return std::exp(log_value); }

    void write_csv(std::ostream& os) const {
        os.precision(17);
        os << "center0,center1,center2,side,log_factor1,log_factor2,log_product,product\n";
        for (const auto& f : per_cube)
            os << f.cube.center[0] << ',' << f.cube.center[1] << ',' << f.cube.center[2] << ','
               << f.cube.side << ',' << f.log_factor1 << ',' << f.log_factor2 << ','
               << f.log_product << ',' << std::exp(f.log_product) << "\n";
    }
    nlohmann::json summary_json() const {
        return {{"value", value()}, {"log_value", log_value},
                {"collection", collection_tag},
                {"argmax", {{"center", argmax_cube.center}, {"side", argmax_cube.side}}},
                {"cubes", per_cube.size()}};
    }
};

namespace detail {

template <typename PerCube>
CharacteristicReport characteristic_over(const CubeCollection& c, PerCube&& per_cube) {
    if (c.empty()) throw ConfigError("characteristic over empty cube collection");
    CharacteristicReport rep;
    rep.collection_tag = c.tag;
    rep.per_cube.reserve(c.size());
    for (const Cube& q : c.cubes) {
        CubeFactors f = per_cube(q);
        f.cube = q;
        if (f.log_product > rep.log_value) {
            rep.log_value = f.log_product;
            rep.argmax_cube = q;
        }
        rep.per_cube.push_back(f);
    }
    return rep;
}

}  // namespace detail

// [w]_{A_p^theta} over the collection:
//   sup_Q (1/(psi |Q|) int_Q w) (1/(psi |Q|) int_Q w^{-p'/p})^{p/p'};
// with psi in sup mode this is the tilde characteristic.
inline CharacteristicReport ap_theta(const Weight& w, const ExponentSet& e,
                                     const PsiFunctional& psi, const CubeCollection& c) {
    if (std::abs(psi.theta - e.theta) > 1e-12) throw ConfigError("psi.theta != exponent theta");
    const double pp = e.p / e.p_conj();
    return detail::characteristic_over(c, [&](const Cube& q) {
        const CellRange r = cell_range(w.grid, q);
        const double lpsi = psi.log_value(q);
        CubeFactors f;
        f.log_factor1 = log_avg_pow(w, r, 1.0) - lpsi;
        f.log_factor2 = pp * (log_avg_pow(w, r, -e.p_conj() / e.p) - lpsi);
        f.log_product = f.log_factor1 + f.log_factor2;
        return f;
    });
}

// [w]_{A_{p,q}^{alpha,theta}} over the collection:
//   sup_Q (1/(psi |Q|) int_Q w^q) (1/(psi |Q|) int_Q w^{-p'})^{q/p'}.
inline CharacteristicReport apq_alpha_theta(const Weight& w, const ExponentSet& e,
                                            const PsiFunctional& psi, const CubeCollection& c) {
    const double qp = e.q / e.p_conj();
    return detail::characteristic_over(c, [&](const Cube& q) {
        const CellRange r = cell_range(w.grid, q);
        const double lpsi = psi.log_value(q);
        CubeFactors f;
        f.log_factor1 = log_avg_pow(w, r, e.q) - lpsi;
        f.log_factor2 = qp * (log_avg_pow(w, r, -e.p_conj()) - lpsi);
        f.log_product = f.log_factor1 + f.log_factor2;
        return f;
    });
}

// psi-free A_{p,q} characteristic restricted to exactly the given cubes;
// p = 1 uses avg(w^q) / min(w^q) with the inf realized over cell samples.
inline CharacteristicReport restricted_apq(const Weight& w, double p, double q,
                                           const CubeCollection& c) {
    if (!(p >= 1)) throw ConfigError("need p >= 1");
    return detail::characteristic_over(c, [&](const Cube& cube) {
        const CellRange r = cell_range(w.grid, cube);
        CubeFactors f;
        f.log_factor1 = log_avg_pow(w, r, q);
        if (p == 1.0) {
            f.log_factor2 = -q * min_log_over(w, r);
        } else {
            const double pc = p / (p - 1.0);
            f.log_factor2 = (q / pc) * log_avg_pow(w, r, -pc);
        }
        f.log_product = f.log_factor1 + f.log_factor2;
        return f;
    });
}

// psi-free A_p characteristic (second factor w^{-p'/p} to the p/p');
// p = 1 uses avg(w) / min(w).
inline CharacteristicReport restricted_ap(const Weight& w, double p, const CubeCollection& c) {
    if (!(p >= 1)) throw ConfigError("need p >= 1");
    return detail::characteristic_over(c, [&](const Cube& cube) {
        const CellRange r = cell_range(w.grid, cube);
        CubeFactors f;
        f.log_factor1 = log_avg_pow(w, r, 1.0);
        if (p == 1.0) {
            f.log_factor2 = -min_log_over(w, r);
        } else {
            const double pc = p / (p - 1.0);
            f.log_factor2 = (p / pc) * log_avg_pow(w, r, -pc / p);
        }
        f.log_product = f.log_factor1 + f.log_factor2;
        return f;
    });
}

// Spec surface: restricted characteristic from an ExponentSet (p > 1 path).
inline CharacteristicReport restricted_chars(const Weight& w, const ExponentSet& e,
                                             const CubeCollection& c) {
    return restricted_apq(w, e.p, e.q, c);
}

struct TildeComparison {
    double log_tilde_3theta;   // [w]_{A~_p^{3 theta}}
    double log_plain_theta;    // [w]_{A_p^theta}
    double log_tilde_theta;    // [w]_{A~_p^theta}
    double ratio() const { return std::exp(log_tilde_3theta - log_plain_theta); }
};

// Compares the tilde and plain brackets. The direction forced by
// rho~(Q) >= rho(Q) is psi~ <= psi, hence [w]_{A_p^theta} <= [w]_{A~_p^theta};
// that inequality is asserted exactly, the 3-theta ratio is reported.
inline TildeComparison tilde_comparison(const Weight& w, const ExponentSet& e,
                                        const CriticalRadiusProfile& prof,
                                        const CubeCollection& c) {
    PsiFunctional psi_c(e.theta, PsiFunctional::Mode::Centered, prof);
    PsiFunctional psi_s(e.theta, PsiFunctional::Mode::Sup, prof);
    PsiFunctional psi_s3(3.0 * e.theta, PsiFunctional::Mode::Sup, prof);
    ExponentSet e3 = e;
    e3.theta = 3.0 * e.theta;
    TildeComparison out;
    out.log_plain_theta = ap_theta(w, e, psi_c, c).log_value;
    out.log_tilde_theta = ap_theta(w, e, psi_s, c).log_value;
    out.log_tilde_3theta = ap_theta(w, e3, psi_s3, c).log_value;
    if (out.log_plain_theta > out.log_tilde_theta + 1e-9)
        throw AlgorithmError("tilde bracket should dominate the plain bracket");
    return out;
}

// ---- weight families used across the suites ----

inline Weight weight_power(const Grid& g, double exponent) {
    return Weight::from_log_function(g, [&](const Vec3& x) {
        double r2 = 0;
        for (int a = 0; a < g.dim; ++a) r2 += x[a] * x[a];
        return 0.5 * exponent * std::log(r2);
    });
}

inline Weight weight_exp_quadratic(const Grid& g, double eta) {
    return Weight::from_log_function(g, [&](const Vec3& x) {
        double r2 = 0;
        for (int a = 0; a < g.dim; ++a) r2 += x[a] * x[a];
        return eta * r2;
    });
}

inline Weight weight_two_valued(const Grid& g, double left, double right) {
    if (!(left > 0 && right > 0)) throw ConfigError("weight must be strictly positive");
    return Weight::from_log_function(g, [&](const Vec3& x) {
        return x[0] < 0 ? std::log(left) : std::log(right);
    });
}

}  // namespace schrodlab
