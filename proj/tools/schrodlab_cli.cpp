// Command-line front end: batch runs of the rho tabulation, weight
// characteristics, BMO/maximal/heat/fractional-integral checks, the
// verification suites and refinement sweeps. One JSON config fully
// determines a run; outputs are CSV or JSON in the --out directory.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "schrodlab/bmo.hpp"
#include "schrodlab/grid.hpp"
#include "schrodlab/harness.hpp"
#include "schrodlab/operators.hpp"
#include "schrodlab/potential.hpp"
#include "schrodlab/semigroup.hpp"
#include "schrodlab/twoweight.hpp"
#include "schrodlab/weights.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace schrodlab;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::string format = "json";
    std::uint64_t seed = 1;
};

json load_config(const GlobalOpts& opts) {
    if (opts.config_path.empty()) return json::object();
    std::ifstream in(opts.config_path);
    if (!in) throw ConfigError("cannot open config: " + opts.config_path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return j;
}

Grid grid_from_config(const json& cfg) {
    if (!cfg.contains("grid")) return Grid(1, 4.0, 256);
    const json& g = cfg.at("grid");
    return Grid(g.value("dim", 1), g.value("half_extent", 4.0), (long)g.value("cells", 256));
}

Potential potential_from_config(const json& cfg) {
    if (!cfg.contains("potential")) return Potential::hermite();
    return potential_from_json(cfg.at("potential"));
}

Weight weight_from_config(const json& cfg, const Grid& g) {
    if (!cfg.contains("weight")) return Weight::constant(g, 1.0);
    const json& w = cfg.at("weight");
    const std::string fam = w.value("family", "constant");
    const double param = w.value("param", 1.0);
    if (fam == "constant") return Weight::constant(g, param);
    if (fam == "power") return weight_power(g, param);
    if (fam == "exp_quadratic") return weight_exp_quadratic(g, param);
    if (fam == "two_valued") return weight_two_valued(g, param, w.value("param2", 1.0));
    throw ConfigError("unknown weight family: " + fam);
}

GridFunction function_from_config(const json& cfg, const Grid& g) {
    const std::string fam = cfg.contains("function")
                                ? cfg.at("function").value("family", "gaussian")
                                : "gaussian";
    const double param = cfg.contains("function") ? cfg.at("function").value("param", 1.0) : 1.0;
    if (fam == "gaussian")
        return GridFunction::from_function(g, [&](const Vec3& x) {
            double r2 = 0;
            for (int a = 0; a < g.dim; ++a) r2 += x[a] * x[a];
            return std::exp(-param * r2);
        });
    if (fam == "indicator")
        return GridFunction::from_function(
            g, [&](const Vec3& x) { return (x[0] >= 0 && x[0] < param) ? 1.0 : 0.0; });
    if (fam == "abs_power")
        return GridFunction::from_function(g, [&](const Vec3& x) {
            double r2 = 0;
            for (int a = 0; a < g.dim; ++a) r2 += x[a] * x[a];
            return std::pow(r2, param / 2.0);
        });
    if (fam == "log_abs")
        return GridFunction::from_function(
            g, [&](const Vec3& x) { return std::log(std::abs(x[0])); });
    if (fam == "step")
        return GridFunction::from_function(
            g, [&](const Vec3& x) { return x[0] < 0 ? -1.0 : 1.0; });
    throw ConfigError("unknown function family: " + fam);
}

ExponentSet exponents_from_config(const json& cfg, double fallback_theta = 2.0) {
    if (!cfg.contains("exponents"))
        return ExponentSet(1, 2.0, 2.0, 0.0, fallback_theta);
    const json& e = cfg.at("exponents");
    const double n = e.value("n", 1.0);
    const double p = e.value("p", 2.0);
    const double alpha = e.value("alpha", 0.0);
    const double theta = e.value("theta", fallback_theta);
    if (e.contains("q")) return ExponentSet(n, p, e.at("q").get<double>(), alpha, theta);
    return ExponentSet::from_p_alpha(n, p, alpha, theta);
}

CubeCollection collection_from_config(const json& cfg, const Grid& g) {
    std::string strategy = "dyadic-all-shifts";
    int depth = -1;
    if (cfg.contains("collection")) {
        strategy = cfg.at("collection").value("strategy", strategy);
        depth = cfg.at("collection").value("depth", -1);
    }
    return enumerate_cubes(g, strategy, depth);
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

int run_rho(const GlobalOpts& opts) {
    json cfg = load_config(opts);
    Grid g = grid_from_config(cfg);
    Potential v = potential_from_config(cfg);
    CriticalRadiusProfile prof(g, v, 1e-8);
    fs::create_directories(opts.out_dir);
    std::ostringstream os;
    os.precision(17);
    os << "x,rho,band\n";  // band = (1+|x|)*rho
    for (long i = 0; i < g.cells_per_axis; ++i) {
        Vec3 x{0, 0, 0};
        x[0] = g.cell_center(i);
        const double rho = prof.rho_at_point(x);
        os << x[0] << ',' << rho << ',' << (1.0 + std::abs(x[0])) * rho << "\n";
    }
    write_text(fs::path(opts.out_dir) / "rho.csv", os.str());
    if (opts.format == "json") {
        json j = {{"potential", potential_to_json(v)},
                  {"grid", grid_header_json(g)},
                  {"sentinel", prof.infinity_sentinel()}};
        write_text(fs::path(opts.out_dir) / "rho.json", j.dump(2) + "\n");
    }
    std::cout << "rho table written to " << opts.out_dir << "/rho.csv\n";
    return 0;
}

int run_char(const GlobalOpts& opts) {
    json cfg = load_config(opts);
    Grid g = grid_from_config(cfg);
    Potential v = potential_from_config(cfg);
    Weight w = weight_from_config(cfg, g);
    ExponentSet e = exponents_from_config(cfg);
    CriticalRadiusProfile prof(g, v, 1e-7);
    CubeCollection col = collection_from_config(cfg, g);
    const std::string mode = cfg.value("psi_mode", "centered");
    PsiFunctional psi(e.theta,
                      mode == "sup" ? PsiFunctional::Mode::Sup : PsiFunctional::Mode::Centered,
                      prof);
    CharacteristicReport rep =
        (e.alpha > 0 || e.p != e.q) ? apq_alpha_theta(w, e, psi, col) : ap_theta(w, e, psi, col);
    fs::create_directories(opts.out_dir);
    {
        std::ostringstream os;
        rep.write_csv(os);
        write_text(fs::path(opts.out_dir) / "characteristic.csv", os.str());
    }
    write_text(fs::path(opts.out_dir) / "characteristic.json", rep.summary_json().dump(2) + "\n");
    std::cout << "characteristic = " << rep.value() << " over " << col.size() << " cubes\n";
    return 0;
}

int run_bmo(const GlobalOpts& opts) {
    json cfg = load_config(opts);
    Grid g = grid_from_config(cfg);
    Potential v = potential_from_config(cfg);
    Weight w = weight_from_config(cfg, g);
    ExponentSet e = exponents_from_config(cfg);
    CriticalRadiusProfile prof(g, v, 1e-7);
    CubeCollection col = collection_from_config(cfg, g);
    ExpLogForward fwd = exp_log_forward(w, e, prof, col);
    fs::create_directories(opts.out_dir);
    json j = {{"bmo_norm_ptheta", fwd.bmo_norm_at_ptheta},
              {"characteristic", fwd.characteristic},
              {"bound", fwd.bound},
              {"holds", fwd.holds}};
    write_text(fs::path(opts.out_dir) / "bmo.json", j.dump(2) + "\n");
    std::cout << "||log w||_{BMO_{p theta}} = " << fwd.bmo_norm_at_ptheta
              << "  bound = " << fwd.bound << (fwd.holds ? "  (holds)\n" : "  (VIOLATED)\n");
    return fwd.holds ? 0 : 1;
}

int run_maximal(const GlobalOpts& opts) {
    json cfg = load_config(opts);
    Grid g = grid_from_config(cfg);
    Potential v = potential_from_config(cfg);
    ExponentSet e = exponents_from_config(cfg);
    GridFunction f = function_from_config(cfg, g);
    CriticalRadiusProfile prof(g, v, 1e-7);
    CubeCollection col = collection_from_config(cfg, g);
    PsiFunctional psi(e.theta, PsiFunctional::Mode::Centered, prof);
    GridFunction m = maximal_adapted(f, e, psi, col);
    fs::create_directories(opts.out_dir);
    std::ostringstream os;
    os.precision(17);
    os << "x,f,Mf\n";
    for (long i = 0; i < g.cell_count(); ++i)
        os << g.cell_center(i % g.cells_per_axis) << ',' << f.samples[i] << ',' << m.samples[i]
           << "\n";
    write_text(fs::path(opts.out_dir) / "maximal.csv", os.str());
    const long uncovered = count_uncovered_cells(g, col);
    if (uncovered > 0)
        std::cerr << "warning: " << uncovered << " cells covered by no cube (value 0)\n";
    std::cout << "maximal function written to " << opts.out_dir << "/maximal.csv\n";
    return 0;
}

int run_heat(const GlobalOpts& opts) {
    json cfg = load_config(opts);
    Grid g = grid_from_config(cfg);
    Potential v = potential_from_config(cfg);
    CriticalRadiusProfile prof(g, v, 1e-7);
    DiscreteOperator op(g, v);
    std::vector<double> t_grid = log_spaced(cfg.value("t_min", 0.01), cfg.value("t_max", 4.0),
                                            cfg.value("t_points", 8));
    HeatKernelBoundReport rep =
        heat_kernel_bound_check(op, prof, t_grid, cfg.value("N_exponent", 2.0));
    fs::create_directories(opts.out_dir);
    {
        std::ostringstream os;
        op.write_spectrum_csv(os);
        write_text(fs::path(opts.out_dir) / "spectrum.csv", os.str());
    }
    {
        // kernel slice at mid-height for plotting
        std::ostringstream os;
        os.precision(17);
        const double t = t_grid[t_grid.size() / 2];
        Eigen::MatrixXd k = op.heat_kernel(t);
        const long mid = g.cell_count() / 2;
        os << "x,p_t\n";
        for (long j = 0; j < g.cell_count(); ++j)
            os << g.cell_center(j) << ',' << k(mid, j) << "\n";
        write_text(fs::path(opts.out_dir) / "kernel_slice.csv", os.str());
    }
    json j = {{"fitted_CN", rep.fitted_CN},
              {"free_domination_defect", rep.max_free_domination_defect},
              {"c", rep.c},
              {"N_exponent", rep.N_exponent}};
    write_text(fs::path(opts.out_dir) / "heat.json", j.dump(2) + "\n");
    const bool ok = rep.max_free_domination_defect <= 1e-12;
    std::cout << "fitted C_N = " << rep.fitted_CN << "\n";
    return ok ? 0 : 1;
}

int run_fracint(const GlobalOpts& opts) {
    json cfg = load_config(opts);
    Grid g = grid_from_config(cfg);
    Potential v = potential_from_config(cfg);
    ExponentSet e = exponents_from_config(cfg);
    if (e.alpha <= 0) throw ConfigError("fracint needs exponents.alpha > 0");
    CriticalRadiusProfile prof(g, v, 1e-7);
    DiscreteOperator op(g, v);
    GridFunction f = function_from_config(cfg, g);
    std::vector<DyadicLattice> lats;
    for (int s = 0; s < 3; ++s)
        lats.push_back(build_lattice(g, (int)std::log2((double)g.cells_per_axis), s));
    DominationReport rep = domination_check(op, prof, f, e, lats);
    fs::create_directories(opts.out_dir);
    json j = {{"fitted_C", rep.fitted_C}, {"cells_compared", rep.cells_compared}};
    write_text(fs::path(opts.out_dir) / "fracint.json", j.dump(2) + "\n");
    std::cout << "domination constant = " << rep.fitted_C << "\n";
    return std::isfinite(rep.fitted_C) ? 0 : 1;
}

int run_rdf(const GlobalOpts& opts) {
    json cfg = load_config(opts);
    Grid g = grid_from_config(cfg);
    auto rng = gen::engine(opts.seed, "cli-rdf");
    Weight v = gen::smooth_random_weight(g, rng);
    GridFunction gf = gen::random_function(g, rng, true);
    for (double& s : gf.samples) s += 1e-3;
    DyadicLattice lat = build_lattice(g, std::min<int>(5, (int)std::log2((double)g.cells_per_axis)), 0);
    const double r0 = cfg.value("r0", 1.0), r = cfg.value("r", 2.0);
    RdfResult out = rdf_iterate(gf, v, r0, r, lat.all_cubes(), cfg.value("k_terms", 48));
    fs::create_directories(opts.out_dir);
    json j = {{"g_le_G", out.g_le_G},
              {"norm_bound_holds", out.norm_bound_holds},
              {"terms_used", out.terms_used},
              {"tail_converged", out.tail_converged},
              {"tail_bound", out.tail_bound},
              {"char_Gv", out.char_Gv},
              {"char_v", out.char_v}};
    write_text(fs::path(opts.out_dir) / "rdf.json", j.dump(2) + "\n");
    std::cout << "rdf: g<=G " << out.g_le_G << ", ||G||<=2||g|| " << out.norm_bound_holds << "\n";
    return (out.g_le_G && out.norm_bound_holds) ? 0 : 1;
}

int run_twoweight(const GlobalOpts& opts) {
    json cfg = load_config(opts);
    Grid g = grid_from_config(cfg);
    Potential v = potential_from_config(cfg);
    ExponentSet e = exponents_from_config(cfg);
    CriticalRadiusProfile prof(g, v, 1e-7);
    PsiFunctional psit(e.theta, PsiFunctional::Mode::Sup, prof);
    DyadicLattice lat = build_lattice(g, (int)std::log2((double)g.cells_per_axis), 0);
    Stratification strat = stratify(lat, e.theta, psit);
    auto rng = gen::engine(opts.seed, "cli-twoweight");
    Weight sigma = gen::smooth_random_weight(g, rng);
    Weight w = gen::smooth_random_weight(g, rng);
    EntropyFunction ep(e.p, cfg.value("delta", 1.0)), eq(e.q_conj(), cfg.value("delta", 1.0));
    BumpReport bump = bump_characteristic(sigma, w, e, ep, eq, strat, prof, lat.all_cubes());
    std::vector<GridFunction> probes = {gen::random_function(g, rng, true),
                                        gen::random_function(g, rng, true)};
    TwoWeightCheck chk = two_weight_check(sigma, w, e, strat, bump, probes);
    fs::create_directories(opts.out_dir);
    {
        std::ostringstream os;
        bump.write_csv(os);
        write_text(fs::path(opts.out_dir) / "bump.csv", os.str());
    }
    json j = {{"max_ratio", chk.max_ratio},
              {"composed_ratio", chk.composed_ratio},
              {"global_bump", bump.global}};
    write_text(fs::path(opts.out_dir) / "twoweight.json", j.dump(2) + "\n");
    std::cout << "two-weight max ratio = " << chk.max_ratio << "\n";
    return 0;
}

int run_verify(const GlobalOpts& opts, const std::string& suite) {
    SuiteReport rep = run_suite(suite, opts.seed);
    fs::create_directories(opts.out_dir);
    write_text(fs::path(opts.out_dir) / ("verify_" + suite + ".json"), rep.to_json().dump(2) + "\n");
    if (opts.format == "csv") {
        std::ostringstream os;
        os << "check,pass,fitted\n";
        for (const auto& c : rep.checks)
            os << c.name << ',' << (c.pass ? 1 : 0) << ',' << c.fitted << "\n";
        write_text(fs::path(opts.out_dir) / ("verify_" + suite + ".csv"), os.str());
    }
    for (const auto& c : rep.checks)
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "\n";
    std::cout << (rep.all_pass() ? "suite passed\n" : "suite FAILED\n");
    return rep.all_pass() ? 0 : 1;
}

int run_sweep(const GlobalOpts& opts) {
    json cfg = load_config(opts);
    const std::string check = cfg.value("check", "heat_domination");
    std::vector<long> Ns;
    if (cfg.contains("N_list"))
        for (const auto& n : cfg.at("N_list")) Ns.push_back(n.get<long>());
    else
        Ns = {128, 256, 512};
    SweepResult sw = refinement_sweep(check, Ns, cfg.value("gaussian_c", 5.0));
    fs::create_directories(opts.out_dir);
    write_text(fs::path(opts.out_dir) / "sweep.json", sw.to_json().dump(2) + "\n");
    std::ostringstream os;
    os.precision(17);
    os << "N,fitted\n";
    for (std::size_t i = 0; i < sw.Ns.size(); ++i) os << sw.Ns[i] << ',' << sw.fitted[i] << "\n";
    write_text(fs::path(opts.out_dir) / "sweep.csv", os.str());
    std::cout << "sweep " << check << (sw.stable ? " stable\n" : " UNSTABLE\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for weights and operators adapted to -Laplacian + V"};
    app.require_subcommand(1);

    GlobalOpts opts;
    app.add_option("--config", opts.config_path, "JSON config path");
    app.add_option("--seed", opts.seed, "RNG seed");
    app.add_option("--out", opts.out_dir, "output directory");
    app.add_option("--format", opts.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

    auto* c_rho = app.add_subcommand("rho", "tabulate the critical radius along the first axis");
    auto* c_char = app.add_subcommand("char", "weight characteristic over a collection");
    auto* c_bmo = app.add_subcommand("bmo", "exp-log forward bound for a weight");
    auto* c_max = app.add_subcommand("maximal", "adapted maximal function of a test function");
    auto* c_heat = app.add_subcommand("heat", "heat kernel bound diagnostics");
    auto* c_frac = app.add_subcommand("fracint", "dyadic domination of the fractional integral");
    auto* c_rdf = app.add_subcommand("rdf", "restricted Rubio de Francia iteration");
    auto* c_two = app.add_subcommand("twoweight", "entropy-bump two-weight testing");
    auto* c_verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite = "all";
    c_verify->add_option("suite", suite,
                         "rho|weights|bmo|maximal|heat|fracint|rdf|twoweight|all");
    auto* c_sweep = app.add_subcommand("sweep", "refinement sweep of a fitted constant");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (c_rho->parsed()) return run_rho(opts);
        if (c_char->parsed()) return run_char(opts);
        if (c_bmo->parsed()) return run_bmo(opts);
        if (c_max->parsed()) return run_maximal(opts);
        if (c_heat->parsed()) return run_heat(opts);
        if (c_frac->parsed()) return run_fracint(opts);
        if (c_rdf->parsed()) return run_rdf(opts);
        if (c_two->parsed()) return run_twoweight(opts);
        if (c_verify->parsed()) return run_verify(opts, suite);
        if (c_sweep->parsed()) return run_sweep(opts);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
