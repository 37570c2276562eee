#pragma once

// BMO_theta norms, the exp-log correspondence between A_p^theta weights and
// BMO functions, and John-Nirenberg decay diagnostics.

#include <algorithm>
#include <cmath>
#include <vector>

#include <json.hpp>

#include "schrodlab/common.hpp"
#include "schrodlab/grid.hpp"
#include "schrodlab/potential.hpp"
#include "schrodlab/weights.hpp"

namespace schrodlab {

// sup over the collection of (1 / (psi_theta(Q) |Q|)) int_Q |f - <f>_Q|.
inline double bmo_theta_norm(const GridFunction& f, const PsiFunctional& psi,
                             const CubeCollection& c) {
    if (c.empty()) throw ConfigError("BMO norm over empty cube collection");
    SummedArea sums(f.grid, f.samples);
    double best = 0.0;
    for (const Cube& q : c.cubes) {
        const CellRange r = cell_range(f.grid, q);
        const long cnt = r.count();
        if (cnt == 0) continue;
        const double mean = sums.box_sum(r) / double(cnt);
        double osc = 0.0;
        for_each_cell(f.grid, r, [&](long i) { osc += std::abs(f.samples[i] - mean); });
        best = std::max(best, osc / (double(cnt) * psi(q)));
    }
    return best;
}

struct ExpLogForward {
    double bmo_norm_at_ptheta = 0.0;    // || log w ||_{BMO_{p theta}}
    double characteristic = 0.0;        // [w]_{A_p^theta}
    double bound = 0.0;                 // [w] * max{[w], (p-1) [w]^{1/(p-1)}}
    bool holds = false;
};

// Quantitative forward direction: the BMO_{p theta} norm of log w is
// bounded by [w] max{[w], (p-1)[w]^{1/(p-1)}} on any shared collection.
inline ExpLogForward exp_log_forward(const Weight& w, const ExponentSet& e,
                                     const CriticalRadiusProfile& prof,
                                     const CubeCollection& c) {
    ExpLogForward out;
    PsiFunctional psi_theta(e.theta, PsiFunctional::Mode::Centered, prof);
    PsiFunctional psi_ptheta(e.p * e.theta, PsiFunctional::Mode::Centered, prof);
    out.characteristic = ap_theta(w, e, psi_theta, c).value();
    out.bmo_norm_at_ptheta = bmo_theta_norm(w.log_function(), psi_ptheta, c);
    const double cw = out.characteristic;
    out.bound = cw * std::max(cw, (e.p - 1.0) * std::pow(cw, 1.0 / (e.p - 1.0)));
    out.holds = out.bmo_norm_at_ptheta <= out.bound * (1.0 + 1e-9);
    return out;
}

struct EtaSweepEntry {
    double eta = 0.0;
    double characteristic = 0.0;
};

struct ExpLogBackward {
    std::vector<EtaSweepEntry> sweep;
    double best_eta = 0.0;       // largest tested eta below the ceiling; 0 if none
    double ceiling = 0.0;
    bool found = false;
};

// Backward direction exhibit: sweep eta and report [e^{eta f}]_{A_p^theta};
// monotonicity in eta is not assumed, the full sweep is returned.
inline ExpLogBackward exp_log_backward(const GridFunction& f, const std::vector<double>& eta_grid,
                                       const ExponentSet& e, const CriticalRadiusProfile& prof,
                                       const CubeCollection& c, double ceiling = 10.0) {
    ExpLogBackward out;
    out.ceiling = ceiling;
    PsiFunctional psi(e.theta, PsiFunctional::Mode::Centered, prof);
    for (double eta : eta_grid) {
        Weight w(f.grid);
        for (long i = 0; i < f.grid.cell_count(); ++i) w.log_samples[i] = eta * f.samples[i];
        const double cw = ap_theta(w, e, psi, c).value();
        out.sweep.push_back({eta, cw});
        if (cw <= ceiling && eta > out.best_eta) {
            out.best_eta = eta;
            out.found = true;
        }
    }
    return out;
}

struct DecayEntry {
    double lambda = 0.0;
    double fraction = 0.0;  // |{x in Q: |f - <f>_Q| > lambda}| / |Q|
};

struct JohnNirenbergProfile {
    std::vector<DecayEntry> table;
    double fitted_rate = 0.0;          // slope of -log(fraction) against lambda
    double exp_average = 0.0;          // (1/|Q|) int_Q exp(gamma |f-<f>|/(norm psi))
    double gamma = 0.0;

    void write_csv(std::ostream& os) const {
        os.precision(17);
        os << "lambda,fraction\n";
        for (const auto& d : table) os << d.lambda << ',' << d.fraction << "\n";
    }
};

inline JohnNirenbergProfile john_nirenberg_profile(const GridFunction& f, const Cube& q,
                                                   const PsiFunctional& psi_theta_prime,
                                                   double bmo_norm,
                                                   const std::vector<double>& lambda_grid) {
    if (!(bmo_norm > 0)) throw ConfigError("John-Nirenberg profile needs a positive BMO norm");
    JohnNirenbergProfile out;
    const CellRange r = cell_range(f.grid, q);
    const long cnt = r.count();
    if (cnt == 0) throw DegenerateCubeError("cube contains no cell center");
    double mean = 0.0;
    for_each_cell(f.grid, r, [&](long i) { mean += f.samples[i]; });
    mean /= double(cnt);

    std::vector<double> dev;
    dev.reserve(cnt);
    for_each_cell(f.grid, r, [&](long i) { dev.push_back(std::abs(f.samples[i] - mean)); });

    for (double lam : lambda_grid) {
        long over = 0;
        for (double d : dev)
            if (d > lam) ++over;
        out.table.push_back({lam, double(over) / double(cnt)});
    }

    std::vector<double> xs, ys;
    for (const auto& d : out.table)
        if (d.fraction > 0 && d.fraction < 1) {
            xs.push_back(d.lambda);
            ys.push_back(-std::log(d.fraction));
        }
    out.fitted_rate = (xs.size() >= 2) ? fit_slope(xs, ys) : 0.0;

    out.gamma = 1.0 / (std::pow(2.0, f.grid.dim + 1) * M_E);
    const double scale = bmo_norm * psi_theta_prime(q);
    double acc = 0.0;
    for (double d : dev) acc += std::exp(out.gamma * d / scale);
    out.exp_average = acc / double(cnt);
    return out;
}

}  // namespace schrodlab
