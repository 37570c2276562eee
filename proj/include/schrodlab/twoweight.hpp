#pragma once

// Entropy-bump two-weight machinery: rho_w(Q), the normalized entropy
// functions eps_p, beta(Q), the stratified bump characteristics and the
// two-weight testing of the restricted fractional integral.

#include <algorithm>
#include <cmath>
#include <vector>

#include <json.hpp>

#include "schrodlab/common.hpp"
#include "schrodlab/grid.hpp"
#include "schrodlab/operators.hpp"
#include "schrodlab/potential.hpp"
#include "schrodlab/weights.hpp"

namespace schrodlab {

// eps_p(t) = delta^{-1/p} (log(e t))^{(1+delta)/p}, monotone on (1, inf) with
// int_1^inf dt / (t eps_p(t)^p) = 1 (substitute u = log(e t)).
struct EntropyFunction {
    double p = 2.0;
    double delta = 1.0;

    EntropyFunction(double p_, double delta_) : p(p_), delta(delta_) {
        if (!(p > 0) || !(delta > 0)) throw ConfigError("entropy function needs p, delta > 0");
    }

    double operator()(double t) const {
        const double tc = std::max(t, 1.0 + 1e-9);  // defined on (1, inf)
        return std::pow(delta, -1.0 / p) * std::pow(std::log(M_E * tc), (1.0 + delta) / p);
    }

    // quadrature check of the normalization integral: composite Simpson in
    // s = log(e t) over [1, S] plus the exact tail beyond e^S
    double normalization_integral(int intervals = 4096) const {
        const double S = std::log(std::pow(1e-9, -1.0 / delta));
        const double h = S / intervals;
        auto f = [&](double s) { return delta * std::exp(-delta * s); };
        double acc = f(0.0) + f(S);
        for (int k = 1; k < intervals; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(k * h);
        acc *= h / 3.0;
        acc += std::exp(-delta * S);  // exact tail
        return acc;
    }
};

// rho_w(Q) = (1/w(Q)) int_Q M(w 1_Q); the inner maximal runs over the
// declared collection's cubes meeting Q plus the cell cubes of Q, so that
// M(w 1_Q) >= w 1_Q holds at every cell and rho_w >= 1.
inline double rho_w(const Weight& w, const Cube& q, const CubeCollection& c) {
    const Grid& g = w.grid;
    check_cube(g, q);
    const CellRange rq = cell_range(g, q);
    if (rq.count() == 0) throw DegenerateCubeError("cube contains no cell center");

    std::vector<double> wq(g.cell_count(), 0.0);
    for_each_cell(g, rq, [&](long i) { wq[i] = w.value(i); });
    SummedArea sums(g, wq);

    std::vector<double> m(g.cell_count(), 0.0);
    // cell cubes of Q: average over a single cell is the sample itself
    for_each_cell(g, rq, [&](long i) { m[i] = wq[i]; });
    for (const Cube& p : c.cubes) {
        bool meets = true;
        for (int a = 0; a < g.dim; ++a)
            if (p.hi(a) <= q.lo(a) || p.lo(a) >= q.hi(a)) meets = false;
        if (!meets) continue;
        const CellRange rp = cell_range(g, p);
        const long cnt = rp.count();
        if (cnt == 0) continue;
        const double avg = sums.box_sum(rp) / double(cnt);
        for_each_cell(g, rp, [&](long i) { m[i] = std::max(m[i], avg); });
    }

    double int_m = 0.0, mass = 0.0;
    for_each_cell(g, rq, [&](long i) {
        int_m += m[i];
        mass += wq[i];
    });
    return int_m / mass;
}

struct BumpRow {
    Cube cube;
    double beta = 0.0;
    double rho_sigma = 0.0, rho_wq = 0.0;
};

struct BumpReport {
    std::vector<BumpRow> per_cube;
    std::vector<std::pair<int, double>> per_stratum;  // (r, sup beta over Q_r); 0 with flag if empty
    std::vector<int> empty_strata;
    double global = 0.0;  // sup over source cubes of beta(Q) / psi_{theta/2}(Q)

    void write_csv(std::ostream& os) const {
        os.precision(17);
        os << "center0,side,beta,rho_sigma,rho_w\n";
        for (const auto& r : per_cube)
            os << r.cube.center[0] << ',' << r.cube.side << ',' << r.beta << ','
               << r.rho_sigma << ',' << r.rho_wq << "\n";
    }
};

// beta(Q) = sigma(Q)^{1/p'} w(Q)^{1/q} / |Q|^{1-alpha/n}
//           * rho_sigma(Q)^{1/p} eps_p(rho_sigma) rho_w(Q)^{1/q'} eps_{q'}(rho_w).
inline double bump_beta(const Weight& sigma, const Weight& w, const ExponentSet& e,
                        const EntropyFunction& eps_p, const EntropyFunction& eps_qc,
                        const Cube& q, const CubeCollection& maximal_collection) {
    const Grid& g = sigma.grid;
    const CellRange r = cell_range(g, q);
    if (r.count() == 0) throw DegenerateCubeError("cube contains no cell center");
    const double log_sigma_mass = log_weight_mass(sigma, r);
    const double log_w_mass = log_weight_mass(w, r);
    const double vol = double(r.count()) * g.cell_volume();
    const double rs = rho_w(sigma, q, maximal_collection);
    const double rw = rho_w(w, q, maximal_collection);
    const double log_beta = log_sigma_mass / e.p_conj() + log_w_mass / e.q
                          - (1.0 - e.alpha / e.n) * std::log(vol)
                          + std::log(rs) / e.p + std::log(eps_p(rs))
                          + std::log(rw) / e.q_conj() + std::log(eps_qc(rw));
    return std::exp(log_beta);
}

inline BumpReport bump_characteristic(const Weight& sigma, const Weight& w, const ExponentSet& e,
                                      const EntropyFunction& eps_p, const EntropyFunction& eps_qc,
                                      const Stratification& strat,
                                      const CriticalRadiusProfile& prof,
                                      const CubeCollection& maximal_collection) {
    BumpReport rep;
    PsiFunctional psi_half(e.theta / 2.0, PsiFunctional::Mode::Centered, prof);
    int rmax = strat.max_stratum();
    for (int r = 0; r <= rmax; ++r) {
        auto it = strat.strata.find(r);
        if (it == strat.strata.end() || it->second.empty()) {
            rep.per_stratum.push_back({r, 0.0});
            rep.empty_strata.push_back(r);
            continue;
        }
        double sup = 0.0;
        for (const Cube& q : it->second.cubes) {
            BumpRow row;
            row.cube = q;
            row.rho_sigma = rho_w(sigma, q, maximal_collection);
            row.rho_wq = rho_w(w, q, maximal_collection);
            row.beta = bump_beta(sigma, w, e, eps_p, eps_qc, q, maximal_collection);
            rep.per_cube.push_back(row);
            sup = std::max(sup, row.beta);
            rep.global = std::max(rep.global, row.beta / psi_half(q));
        }
        rep.per_stratum.push_back({r, sup});
    }
    return rep;
}

struct TwoWeightCheck {
    double max_ratio = 0.0;          // per-stratum testing ratio
    double composed_ratio = 0.0;     // stratified sum against the global bump characteristic
    int argmax_stratum = 0;
};

// Testing ratio ||I_alpha^{Q_r}(sigma f)||_{L^q(w)} / (||f||_{L^p(sigma)} [sigma,w]_{p,q,alpha,r})
// over probes and strata, plus the composed bound sum_r 2^{-r theta} I_alpha^{Q_r}
// against the psi_{theta/2}-normalized global characteristic.
inline TwoWeightCheck two_weight_check(const Weight& sigma, const Weight& w, const ExponentSet& e,
                                       const Stratification& strat, const BumpReport& bump,
                                       const std::vector<GridFunction>& probes) {
    if (probes.empty()) throw ConfigError("probe set must be nonempty");
    const Grid& g = sigma.grid;
    TwoWeightCheck out;

    auto lq_w_norm = [&](const GridFunction& x, const Weight& mu, double expo) {
        double acc = 0.0;
        for (long i = 0; i < g.cell_count(); ++i)
            acc += std::pow(std::abs(x.samples[i]), expo) * mu.value(i);
        return std::pow(acc * g.cell_volume(), 1.0 / expo);
    };

    for (const GridFunction& f : probes) {
        GridFunction sf(g);
        for (long i = 0; i < g.cell_count(); ++i) sf.samples[i] = f.samples[i] * sigma.value(i);
        const double nf = lq_w_norm(f, sigma, e.p);
        if (!(nf > 0)) continue;

        GridFunction composed(g, 0.0);
        for (const auto& [r, beta_sup] : bump.per_stratum) {
            auto it = strat.strata.find(r);
            if (it == strat.strata.end() || it->second.empty()) continue;
            GridFunction Ir = restricted_frac_int(sf, e.alpha, e.n, it->second);
            const double scale = std::pow(2.0, -double(r) * e.theta);
            for (long i = 0; i < g.cell_count(); ++i)
                composed.samples[i] += scale * Ir.samples[i];
            if (beta_sup > 0) {
                const double ratio = lq_w_norm(Ir, w, e.q) / (nf * beta_sup);
                if (ratio > out.max_ratio) {
                    out.max_ratio = ratio;
                    out.argmax_stratum = r;
                }
            }
        }
        if (bump.global > 0)
            out.composed_ratio =
                std::max(out.composed_ratio, lq_w_norm(composed, w, e.q) / (nf * bump.global));
    }
    return out;
}

}  // namespace schrodlab
