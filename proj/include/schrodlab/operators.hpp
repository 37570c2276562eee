#pragma once

// Adapted maximal operators, the psi~-damped dyadic fractional integral with
// its stratification, the restricted Rubio de Francia iteration, and the
// quantitative inequality checks built on them.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include <json.hpp>

#include "schrodlab/common.hpp"
#include "schrodlab/grid.hpp"
#include "schrodlab/potential.hpp"
#include "schrodlab/semigroup.hpp"
#include "schrodlab/weights.hpp"

namespace schrodlab {

// M^{theta,alpha} f(x): max over cubes containing x of
// (psi_theta(Q) |Q|)^{-(1-alpha/n)} int_Q |f|. Cells covered by no cube get 0.
inline GridFunction maximal_adapted(const GridFunction& f, const ExponentSet& e,
                                    const PsiFunctional& psi, const CubeCollection& c) {
    if (!(e.alpha >= 0 && e.alpha < e.n)) throw ConfigError("need 0 <= alpha < n");
    const Grid& g = f.grid;
    GridFunction absf = f;
    for (double& v : absf.samples) v = std::abs(v);
    SummedArea sums(g, absf.samples);
    GridFunction out(g, 0.0);
    const double expo = 1.0 - e.alpha / e.n;
    for (const Cube& q : c.cubes) {
        const CellRange r = cell_range(g, q);
        const long cnt = r.count();
        if (cnt == 0) continue;
        const double mass = sums.box_sum(r) * g.cell_volume();
        const double denom = std::exp(expo * (psi.log_value(q) +
                                              std::log(double(cnt) * g.cell_volume())));
        const double val = mass / denom;
        for_each_cell(g, r, [&](long i) { out.samples[i] = std::max(out.samples[i], val); });
    }
    return out;
}

inline long count_uncovered_cells(const Grid& g, const CubeCollection& c) {
    std::vector<char> hit(g.cell_count(), 0);
    for (const Cube& q : c.cubes)
        for_each_cell(g, cell_range(g, q), [&](long i) { hit[i] = 1; });
    long n = 0;
    for (char h : hit)
        if (!h) ++n;
    return n;
}

// M_mu^alpha f(x): max over cubes containing x of mu(Q)^{-(1-alpha/n)} int_Q |f| dmu.
inline GridFunction maximal_weighted(const GridFunction& f, const Weight& mu, double alpha,
                                     double n_book, const CubeCollection& c) {
    if (!(alpha >= 0 && alpha < n_book)) throw ConfigError("need 0 <= alpha < n");
    const Grid& g = f.grid;
    GridFunction out(g, 0.0);
    const double expo = 1.0 - alpha / n_book;
    for (const Cube& q : c.cubes) {
        const CellRange r = cell_range(g, q);
        if (r.count() == 0) continue;
        LogSumExpAcc num;  // log int |f| dmu
        for_each_cell(g, r, [&](long i) {
            const double a = std::abs(f.samples[i]);
            if (a > 0) num.add(std::log(a) + mu.log_samples[i]);
        });
        const double log_mass = log_weight_mass(mu, r);
        double val = 0.0;
        if (num.count() > 0) {
            const double log_num = num.value() + g.dim * std::log(g.spacing);
            val = std::exp(log_num - expo * log_mass);
        }
        for_each_cell(g, r, [&](long i) { out.samples[i] = std::max(out.samples[i], val); });
    }
    return out;
}

// M^Q on raw samples (psi-free restricted maximal), used by the iteration.
inline std::vector<double> restricted_maximal(const Grid& g, std::span<const double> samples,
                                              const CubeCollection& c) {
    std::vector<double> abs_s(samples.begin(), samples.end());
    for (double& v : abs_s) v = std::abs(v);
    SummedArea sums(g, abs_s);
    std::vector<double> out(g.cell_count(), 0.0);
    for (const Cube& q : c.cubes) {
        const CellRange r = cell_range(g, q);
        const long cnt = r.count();
        if (cnt == 0) continue;
        const double avg = sums.box_sum(r) / double(cnt);
        for_each_cell(g, r, [&](long i) { out[i] = std::max(out[i], avg); });
    }
    return out;
}

struct WeakTypeReport {
    double max_ratio = 0.0;   // max over lambda of w({M > lambda}) lambda^p / ([w] ||f||^p)
    double lambda_argmax = 0.0;
    double characteristic = 0.0;
};

// Dyadic weak-type check with constant 1: stopping cubes of a single shifted
// lattice are disjoint, so the Holder chain gives exactly
// w({M^theta_D f > lambda}) lambda^p <= [w]_{A_p^theta} ||f||_{L^p(w)}^p.
inline WeakTypeReport weak_type_check(const GridFunction& f, const Weight& w,
                                      const ExponentSet& e, const PsiFunctional& psi,
                                      const CubeCollection& dyadic,
                                      const std::vector<double>& lambda_grid = {}) {
    const Grid& g = f.grid;
    GridFunction m = maximal_adapted(f, ExponentSet(e.n, e.p, e.p, 0.0, e.theta), psi, dyadic);
    CharacteristicReport cw = ap_theta(w, e, psi, dyadic);

    // log ||f||^p_{L^p(w)}
    LogSumExpAcc nf;
    for (long i = 0; i < g.cell_count(); ++i) {
        const double a = std::abs(f.samples[i]);
        if (a > 0) nf.add(e.p * std::log(a) + w.log_samples[i]);
    }
    if (nf.count() == 0) return {0.0, 0.0, cw.value()};
    const double log_fp = nf.value() + g.dim * std::log(g.spacing);

    std::vector<double> lambdas = lambda_grid;
    if (lambdas.empty()) {
        lambdas.assign(m.samples.begin(), m.samples.end());
        std::sort(lambdas.begin(), lambdas.end());
        lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
        for (double& l : lambdas) l *= 1.0 - 1e-9;
    }

    WeakTypeReport rep;
    rep.characteristic = cw.value();
    for (double lam : lambdas) {
        if (!(lam > 0)) continue;
        LogSumExpAcc ws;
        for (long i = 0; i < g.cell_count(); ++i)
            if (m.samples[i] > lam) ws.add(w.log_samples[i]);
        if (ws.count() == 0) continue;
        const double log_wset = ws.value() + g.dim * std::log(g.spacing);
        const double log_ratio = log_wset + e.p * std::log(lam) - cw.log_value - log_fp;
        if (std::exp(log_ratio) > rep.max_ratio) {
            rep.max_ratio = std::exp(log_ratio);
            rep.lambda_argmax = lam;
        }
    }
    return rep;
}

struct HeatDominationReport {
    double theta = 0.0;
    double fitted_C = 0.0;
    double t_argmax = 0.0;
};

// sup over (x, t) of |e^{-tL} f(x)| / M^theta f(x), with 0/0 := 0.
inline HeatDominationReport heat_domination_check(const DiscreteOperator& op,
                                                  const CriticalRadiusProfile& prof,
                                                  const GridFunction& f, double theta,
                                                  const std::vector<double>& t_grid,
                                                  const CubeCollection& c) {
    PsiFunctional psi(theta, PsiFunctional::Mode::Centered, prof);
    ExponentSet e(1.0, 2.0, 2.0, 0.0, theta);
    GridFunction m = maximal_adapted(f, e, psi, c);
    HeatDominationReport rep;
    rep.theta = theta;
    for (double t : t_grid) {
        GridFunction ht = op.heat_apply(f, t);
        for (long i = 0; i < f.grid.cell_count(); ++i) {
            const double num = std::abs(ht.samples[i]);
            if (num == 0.0) continue;
            const double den = m.samples[i];
            const double ratio = den > 0 ? num / den : kInf;
            if (ratio > rep.fitted_C) {
                rep.fitted_C = ratio;
                rep.t_argmax = t;
            }
        }
    }
    return rep;
}

// I_{alpha,theta}^D f = sum over lattice cubes of l(Q)^alpha / psi~_theta(Q) <f>_Q 1_Q.
inline GridFunction dyadic_frac_int(const GridFunction& f, const ExponentSet& e,
                                    const PsiFunctional& psi_tilde, const DyadicLattice& lat) {
    if (!(e.alpha > 0 && e.alpha < e.n)) throw ConfigError("need 0 < alpha < n");
    const Grid& g = f.grid;
    SummedArea sums(g, f.samples);
    GridFunction out(g, 0.0);
    for (const auto& level : lat.levels)
        for (const Cube& q : level) {
            const CellRange r = cell_range(g, q);
            const long cnt = r.count();
            if (cnt == 0) continue;
            const double avg = sums.box_sum(r) / double(cnt);
            const double vol = double(cnt) * g.cell_volume();
            const double coef = std::exp((e.alpha / e.n) * std::log(vol) - psi_tilde.log_value(q));
            for_each_cell(g, r, [&](long i) { out.samples[i] += coef * avg; });
        }
    return out;
}

struct Stratification {
    double theta = 0.0;
    std::map<int, CubeCollection> strata;  // r -> cubes with psi~_theta in [2^{r theta}, 2^{(r+1) theta})
    std::size_t source_cubes = 0;

    int max_stratum() const { return strata.empty() ? -1 : strata.rbegin()->first; }
};

// Bins the lattice cubes by psi~_theta(Q), lower-closed so r = 0 captures
// psi~ = 1. bin_offset plants an off-by-one bug for the negative control.
inline Stratification stratify(const DyadicLattice& lat, double theta,
                               const PsiFunctional& psi_tilde, int bin_offset = 0) {
    if (!(theta > 0)) throw ConfigError("stratification needs theta > 0");
    Stratification s;
    s.theta = theta;
    for (const auto& level : lat.levels)
        for (const Cube& q : level) {
            const double lpsi = psi_tilde.log_value(q);
            int r = (int)std::floor(lpsi / (theta * std::log(2.0)) + 1e-12) + bin_offset;
            auto& col = s.strata[r];
            if (col.tag.empty()) col.tag = "stratum r=" + std::to_string(r);
            col.cubes.push_back(q);
            ++s.source_cubes;
        }
    return s;
}

// Every cube must land in its half-open bin and the strata must partition the
// source lattice. This is the validator the off-by-one negative control trips.
inline bool validate_stratification(const Stratification& s, const PsiFunctional& psi_tilde,
                                    const DyadicLattice& lat) {
    std::size_t total = 0;
    for (const auto& [r, col] : s.strata) {
        if (r < 0) return false;
        for (const Cube& q : col.cubes) {
            const double lpsi = psi_tilde.log_value(q);
            const double lo = r * s.theta * std::log(2.0);
            const double hi = (r + 1) * s.theta * std::log(2.0);
            if (!(lpsi >= lo - 1e-9 && lpsi < hi - 1e-12 + 1e-9)) return false;
        }
        total += col.cubes.size();
    }
    std::size_t lattice_cubes = 0;
    for (const auto& level : lat.levels) lattice_cubes += level.size();
    return total == lattice_cubes;
}

// I_alpha^Q f = sum over the collection of |Q|^{alpha/n} <f>_Q 1_Q.
inline GridFunction restricted_frac_int(const GridFunction& f, double alpha, double n_book,
                                        const CubeCollection& qr) {
    const Grid& g = f.grid;
    GridFunction out(g, 0.0);
    if (qr.empty()) return out;
    SummedArea sums(g, f.samples);
    for (const Cube& q : qr.cubes) {
        const CellRange r = cell_range(g, q);
        const long cnt = r.count();
        if (cnt == 0) continue;
        const double avg = sums.box_sum(r) / double(cnt);
        const double vol = double(cnt) * g.cell_volume();
        const double coef = std::pow(vol, alpha / n_book);
        for_each_cell(g, r, [&](long i) { out.samples[i] += coef * avg; });
    }
    return out;
}

struct DominationReport {
    double fitted_C = 0.0;
    long cells_compared = 0;
};

// sup_x |L^{-alpha/2} f(x)| / sum over the shifted lattices of I^D_{alpha,theta} f(x),
// for f >= 0; 0/0 counts as 0.
inline DominationReport domination_check(const DiscreteOperator& op,
                                         const CriticalRadiusProfile& prof,
                                         const GridFunction& f, const ExponentSet& e,
                                         const std::vector<DyadicLattice>& lattices) {
    for (double v : f.samples)
        if (v < 0) throw ConfigError("domination check needs f >= 0");
    PsiFunctional psi(e.theta, PsiFunctional::Mode::Sup, prof);
    GridFunction num = op.frac_power_apply(f, e.alpha);
    GridFunction den(f.grid, 0.0);
    for (const auto& lat : lattices) {
        GridFunction part = dyadic_frac_int(f, e, psi, lat);
        for (long i = 0; i < f.grid.cell_count(); ++i) den.samples[i] += part.samples[i];
    }
    DominationReport rep;
    for (long i = 0; i < f.grid.cell_count(); ++i) {
        const double n = std::abs(num.samples[i]);
        if (n == 0.0) continue;
        ++rep.cells_compared;
        rep.fitted_C = std::max(rep.fitted_C, den.samples[i] > 0 ? n / den.samples[i] : kInf);
    }
    return rep;
}

struct RdfResult {
    std::vector<double> G;
    double norm_R_bound = 0.0;      // [v]_{A_r^Q}^t
    double t = 0.0;
    int terms_used = 0;
    bool tail_converged = false;
    double tail_bound = 0.0;             // 2^{-K+1} ||g||
    double first_truncated_norm = 0.0;   // norm of the first term left out
    bool g_le_G = false;
    double norm_G = 0.0, norm_g = 0.0;
    bool norm_bound_holds = false;  // ||G|| <= 2 ||g||
    double char_Gv = 0.0, char_v = 0.0;  // [Gv]_{A_{r0}^Q} and [v]_{A_r^Q}
    double rg_vs_g_max = 0.0;       // max of RG / G, to compare with 2 ||R||
};

// Rubio de Francia iteration over a restricted collection:
//   R g = (M^Q(g^{1/t} v) v^{-1})^t,  t = (r - r0)/(r - 1),
//   G = sum_k R^k g / (2^k ||R||^k) with ||R|| = [v]_{A_r^Q}^t.
inline RdfResult rdf_iterate(const GridFunction& g_fn, const Weight& v, double r0, double r,
                             const CubeCollection& c, int k_terms = 40) {
    if (!(1.0 <= r0 && r0 < r)) throw ConfigError("need 1 <= r0 < r");
    for (double x : g_fn.samples)
        if (x < 0) throw ConfigError("iteration needs g >= 0");
    const Grid& grid = g_fn.grid;
    const double t = (r - r0) / (r - 1.0);
    const double s_exp = r / (r - r0);  // (r/r0)' for the norms

    RdfResult res;
    res.t = t;
    res.char_v = restricted_ap(v, r, c).value();
    res.norm_R_bound = std::pow(res.char_v, t);

    std::vector<double> vlin(grid.cell_count());
    for (long i = 0; i < grid.cell_count(); ++i) vlin[i] = v.value(i);

    auto apply_R = [&](const std::vector<double>& x) {
        std::vector<double> arg(grid.cell_count());
        for (long i = 0; i < grid.cell_count(); ++i)
            arg[i] = std::pow(x[i], 1.0 / t) * vlin[i];
        std::vector<double> m = restricted_maximal(grid, arg, c);
        for (long i = 0; i < grid.cell_count(); ++i)
            m[i] = std::pow(m[i] / vlin[i], t);
        return m;
    };

    auto weighted_norm = [&](const std::vector<double>& x) {
        double acc = 0.0;
        for (long i = 0; i < grid.cell_count(); ++i)
            acc += std::pow(std::abs(x[i]), s_exp) * vlin[i];
        return std::pow(acc * grid.cell_volume(), 1.0 / s_exp);
    };

    res.norm_g = weighted_norm(g_fn.samples);
    res.G.assign(grid.cell_count(), 0.0);
    std::vector<double> term = g_fn.samples;  // unscaled R^k g
    double scale = 1.0;                       // 1 / (2^k ||R||^k)
    int k = 0;
    while (k < k_terms) {
        double sup = 0.0;
        for (long i = 0; i < grid.cell_count(); ++i) sup = std::max(sup, term[i] * scale);
        if (sup < 1e-12 && k > 0) {
            res.tail_converged = true;
            break;
        }
        for (long i = 0; i < grid.cell_count(); ++i) res.G[i] += term[i] * scale;
        ++k;
        term = apply_R(term);
        scale /= 2.0 * res.norm_R_bound;
    }
    res.terms_used = k;
    res.tail_bound = std::pow(2.0, -(double)k + 1.0) * res.norm_g;
    res.first_truncated_norm = weighted_norm(term) * scale;

    res.g_le_G = true;
    for (long i = 0; i < grid.cell_count(); ++i)
        if (res.G[i] < g_fn.samples[i]) res.g_le_G = false;

    res.norm_G = weighted_norm(res.G);
    res.norm_bound_holds = res.norm_G <= 2.0 * res.norm_g * (1.0 + 1e-9);

    {
        std::vector<double> rG = apply_R(res.G);
        for (long i = 0; i < grid.cell_count(); ++i)
            if (res.G[i] > 0) res.rg_vs_g_max = std::max(res.rg_vs_g_max, rG[i] / res.G[i]);
    }

    Weight gv = v;
    for (long i = 0; i < grid.cell_count(); ++i) {
        if (!(res.G[i] > 0)) {
            res.char_Gv = kInf;
            return res;
        }
        gv.log_samples[i] += std::log(res.G[i]);
    }
    res.char_Gv = restricted_ap(gv, r0, c).value();
    return res;
}

struct BaseWeakReport {
    double max_ratio = 0.0;
    double budget = 0.0;      // q0' * max(1, #maximal cubes)
    long maximal_cubes = 0;
    double q0 = 0.0;
};

// Weak (1, q0) base estimate for the restricted fractional integral:
//   sup_l l u({I_alpha^Q f > l})^{1/q0} <= budget * [w]_{A_{1,q0}^Q}^{1-alpha/n} ||f||_{L^1(w)}.
inline BaseWeakReport base_weak_check(const GridFunction& f, const Weight& w, double alpha,
                                      double n_book, const CubeCollection& c) {
    for (double v : f.samples)
        if (v < 0) throw ConfigError("base weak check needs f >= 0");
    const Grid& g = f.grid;
    BaseWeakReport rep;
    rep.q0 = n_book / (n_book - alpha);
    const double q0c = rep.q0 / (rep.q0 - 1.0);

    for (std::size_t i = 0; i < c.cubes.size(); ++i) {
        bool maximal = true;
        for (std::size_t j = 0; j < c.cubes.size(); ++j)
            if (i != j && cube_contains(c.cubes[j], c.cubes[i], g.dim) &&
                c.cubes[j].side > c.cubes[i].side)
                maximal = false;
        if (maximal) ++rep.maximal_cubes;
    }
    rep.budget = q0c * std::max<long>(1, rep.maximal_cubes);

    GridFunction I = restricted_frac_int(f, alpha, n_book, c);
    Weight u = w.power(rep.q0);

    double log_f_l1w;  // log ||f||_{L^1(w)}
    {
        LogSumExpAcc acc;
        for (long i = 0; i < g.cell_count(); ++i)
            if (f.samples[i] > 0) acc.add(std::log(f.samples[i]) + w.log_samples[i]);
        if (acc.count() == 0) return rep;
        log_f_l1w = acc.value() + g.dim * std::log(g.spacing);
    }
    const double log_char = restricted_apq(w, 1.0, rep.q0, c).log_value;

    std::vector<double> lambdas(I.samples.begin(), I.samples.end());
    std::sort(lambdas.begin(), lambdas.end());
    lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
    for (double lam0 : lambdas) {
        const double lam = lam0 * (1.0 - 1e-9);
        if (!(lam > 0)) continue;
        LogSumExpAcc us;
        for (long i = 0; i < g.cell_count(); ++i)
            if (I.samples[i] > lam) us.add(u.log_samples[i]);
        if (us.count() == 0) continue;
        const double log_uset = us.value() + g.dim * std::log(g.spacing);
        const double log_lhs = std::log(lam) + log_uset / rep.q0;
        const double log_rhs = (1.0 - alpha / n_book) * log_char + log_f_l1w;
        rep.max_ratio = std::max(rep.max_ratio, std::exp(log_lhs - log_rhs));
    }
    return rep;
}

// Empirical lower bound on ||T : L^p(w^p) -> L^q(w^q)|| over a probe set.
inline double norm_estimate(const std::function<GridFunction(const GridFunction&)>& T,
                            double p, double q, const Weight& w,
                            const std::vector<GridFunction>& probes) {
    if (probes.empty()) throw ConfigError("probe set must be nonempty");
    double best = 0.0;
    for (const GridFunction& f : probes) {
        const Grid& g = f.grid;
        LogSumExpAcc den;
        for (long i = 0; i < g.cell_count(); ++i) {
            const double a = std::abs(f.samples[i]);
            if (a > 0) den.add(p * (std::log(a) + w.log_samples[i]));
        }
        if (den.count() == 0) continue;  // zero-norm probe skipped
        const double log_den = (den.value() + g.dim * std::log(g.spacing)) / p;
        GridFunction tf = T(f);
        LogSumExpAcc num;
        for (long i = 0; i < g.cell_count(); ++i) {
            const double a = std::abs(tf.samples[i]);
            if (a > 0) num.add(q * (std::log(a) + w.log_samples[i]));
        }
        if (num.count() == 0) continue;
        const double log_num = (num.value() + g.dim * std::log(g.spacing)) / q;
        best = std::max(best, std::exp(log_num - log_den));
    }
    return best;
}

struct ExponentPrediction {
    double exponent = 0.0;     // gamma_base * max{1, (q0/p0')(p'/q)}
    double gamma_theta = 0.0;  // theta / (1 + p'/q)
    double K = 0.0;
};

// Extrapolated exponent for both the strong- and weak-type statements. The
// multiplier is max{1, (q0/p0')(p'/q)}, which is 1 at the base point
// (p, q) = (p0, q0).
inline ExponentPrediction exponent_calculator(const ExponentSet& e, double p0, double q0,
                                              double gamma_base) {
    if (std::abs((1.0 / e.p - 1.0 / e.q) - (1.0 / p0 - 1.0 / q0)) > 1e-12)
        throw ConfigError("extrapolation requires 1/p - 1/q = 1/p0 - 1/q0");
    const double p0c = p0 / (p0 - 1.0);
    ExponentPrediction out;
    out.exponent = gamma_base * std::max(1.0, (q0 / p0c) * (e.p_conj() / e.q));
    out.gamma_theta = e.gamma();
    out.K = e.K();
    return out;
}

struct StratumCheckRow {
    int r = 0;
    std::size_t cubes = 0;
    double stratum_bracket = 0.0;  // sup over Q_r of the psi-free bracket
    double bound = 0.0;            // [w]_{A~^{alpha,theta/K}} 2^{(r+1)(theta/K)(1+q/p')}
    bool holds = false;
};

// Per-stratum growth of the psi-free bracket: on Q_r the bracket is at most
// [w]_{A~_{p,q}^{alpha,theta/K}} 2^{(r+1)(theta/K)(1+q/p')} (upper bin edge),
// exactly, since psi~_{theta/K} = psi~_theta^{1/K}.
inline std::vector<StratumCheckRow> stratum_characteristic_check(
    const Weight& w, const ExponentSet& e, const Stratification& strat,
    const CriticalRadiusProfile& prof, const CubeCollection& source) {
    const double K = e.K();
    ExponentSet ek = e;
    ek.theta = e.theta / K;
    PsiFunctional psi_k(ek.theta, PsiFunctional::Mode::Sup, prof);
    const double log_char = apq_alpha_theta(w, ek, psi_k, source).log_value;
    const double slope = (e.theta / K) * (1.0 + e.q / e.p_conj()) * std::log(2.0);

    std::vector<StratumCheckRow> rows;
    for (const auto& [r, col] : strat.strata) {
        StratumCheckRow row;
        row.r = r;
        row.cubes = col.cubes.size();
        if (!col.empty())
            row.stratum_bracket = restricted_apq(w, e.p, e.q, col).value();
        row.bound = std::exp(log_char + double(r + 1) * slope);
        row.holds = row.stratum_bracket <= row.bound * (1.0 + 1e-9);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace schrodlab
