#pragma once

// Deliberately naive reference implementations used to cross-check the fast
// paths. Direct loops, linear-domain arithmetic, no shared machinery with the
// implementations they validate.

#include <cmath>
#include <vector>

#include "schrodlab/common.hpp"
#include "schrodlab/grid.hpp"
#include "schrodlab/weights.hpp"

namespace schrodlab::oracle {

inline std::vector<long> cells_of(const Grid& g, const Cube& q) {
    std::vector<long> out;
    for (long i = 0; i < g.cell_count(); ++i) {
        const Vec3 x = g.cell_point(i);
        bool in = true;
        for (int a = 0; a < g.dim; ++a)
            if (!(x[a] >= q.lo(a) && x[a] < q.hi(a))) in = false;
        if (in) out.push_back(i);
    }
    return out;
}

// classical (psi-free) maximal function by brute force
inline GridFunction classical_maximal(const GridFunction& f, const CubeCollection& c) {
    GridFunction out(f.grid, 0.0);
    for (const Cube& q : c.cubes) {
        const auto cells = cells_of(f.grid, q);
        if (cells.empty()) continue;
        double s = 0;
        for (long i : cells) s += std::abs(f.samples[i]);
        const double avg = s / double(cells.size());
        for (long i : cells) out.samples[i] = std::max(out.samples[i], avg);
    }
    return out;
}

// classical A_p bracket by direct linear-domain sums
inline double ap_bracket(const Weight& w, double p, const CubeCollection& c) {
    const double pc = p / (p - 1.0);
    double best = 0.0;
    for (const Cube& q : c.cubes) {
        const auto cells = cells_of(w.grid, q);
        if (cells.empty()) continue;
        double s1 = 0, s2 = 0;
        for (long i : cells) {
            const double wv = std::exp(w.log_samples[i]);
            s1 += wv;
            s2 += std::pow(wv, -pc / p);
        }
        s1 /= double(cells.size());
        s2 /= double(cells.size());
        best = std::max(best, s1 * std::pow(s2, p / pc));
    }
    return best;
}

inline double apq_bracket(const Weight& w, double p, double q, const CubeCollection& c) {
    const double pc = p / (p - 1.0);
    double best = 0.0;
    for (const Cube& cb : c.cubes) {
        const auto cells = cells_of(w.grid, cb);
        if (cells.empty()) continue;
        double s1 = 0, s2 = 0;
        for (long i : cells) {
            const double wv = std::exp(w.log_samples[i]);
            s1 += std::pow(wv, q);
            s2 += std::pow(wv, -pc);
        }
        s1 /= double(cells.size());
        s2 /= double(cells.size());
        best = std::max(best, s1 * std::pow(s2, q / pc));
    }
    return best;
}

inline double bmo_norm(const GridFunction& f, const CubeCollection& c) {
    double best = 0.0;
    for (const Cube& q : c.cubes) {
        const auto cells = cells_of(f.grid, q);
        if (cells.empty()) continue;
        double mean = 0;
        for (long i : cells) mean += f.samples[i];
        mean /= double(cells.size());
        double osc = 0;
        for (long i : cells) osc += std::abs(f.samples[i] - mean);
        best = std::max(best, osc / double(cells.size()));
    }
    return best;
}

// classical dyadic fractional integral via recursive descent through one
// aligned lattice (shift 0): accumulates sum over ancestors of l^alpha <f>_Q.
inline void dyadic_frac_recurse(const GridFunction& f, double alpha, const Cube& q,
                                double acc, int depth_left, GridFunction& out) {
    const auto cells = cells_of(f.grid, q);
    if (cells.empty()) return;
    double s = 0;
    for (long i : cells) s += f.samples[i];
    acc += std::pow(q.side, alpha) * (s / double(cells.size()));
    if (depth_left == 0) {
        for (long i : cells) out.samples[i] = acc;
        return;
    }
    const int n = f.grid.dim;
    const int kids = 1 << n;
    for (int k = 0; k < kids; ++k) {
        Cube child;
        child.side = q.side / 2.0;
        for (int a = 0; a < n; ++a)
            child.center[a] = q.center[a] + (((k >> a) & 1) ? 0.25 : -0.25) * q.side;
        dyadic_frac_recurse(f, alpha, child, acc, depth_left - 1, out);
    }
}

inline GridFunction dyadic_frac_int(const GridFunction& f, double alpha, int depth) {
    GridFunction out(f.grid, 0.0);
    dyadic_frac_recurse(f, alpha, domain_cube(f.grid), 0.0, depth, out);
    return out;
}

// continuum 1-D Riesz potential by direct quadrature; the diagonal cell is
// integrated exactly against the kernel singularity
inline GridFunction riesz_potential_1d(const GridFunction& f, double alpha) {
    if (f.grid.dim != 1) throw UnsupportedError("oracle is 1-D");
    const double c_alpha = std::tgamma((1.0 - alpha) / 2.0) /
                           (std::pow(2.0, alpha) * std::sqrt(M_PI) * std::tgamma(alpha / 2.0));
    const Grid& g = f.grid;
    const double h = g.spacing;
    GridFunction out(g, 0.0);
    for (long i = 0; i < g.cell_count(); ++i) {
        double acc = f.samples[i] * 2.0 * std::pow(h / 2.0, alpha) / alpha;
        for (long j = 0; j < g.cell_count(); ++j) {
            if (i == j) continue;
            const double d = std::abs(g.cell_center(i) - g.cell_center(j));
            acc += f.samples[j] * std::pow(d, alpha - 1.0) * h;
        }
        out.samples[i] = c_alpha * acc;
    }
    return out;
}

inline double rho_w_value(const Weight& w, const Cube& q, const CubeCollection& c) {
    const Grid& g = w.grid;
    const auto qcells = cells_of(g, q);
    std::vector<double> wq(g.cell_count(), 0.0);
    for (long i : qcells) wq[i] = std::exp(w.log_samples[i]);
    std::vector<double> m(g.cell_count(), 0.0);
    for (long i : qcells) m[i] = wq[i];
    for (const Cube& p : c.cubes) {
        bool meets = false;
        for (long i : cells_of(g, p))
            for (long j : qcells)
                if (i == j) meets = true;
        if (!meets) continue;
        const auto pc = cells_of(g, p);
        double s = 0;
        for (long i : pc) s += wq[i];
        const double avg = s / double(pc.size());
        for (long i : pc) m[i] = std::max(m[i], avg);
    }
    double num = 0, den = 0;
    for (long i : qcells) {
        num += m[i];
        den += wq[i];
    }
    return num / den;
}

}  // namespace schrodlab::oracle
