#pragma once

// Discretization substrate: uniform cell-centered grids on [-R,R]^n,
// grid functions, axis-aligned cubes, dyadic lattices and finite cube
// collections, with midpoint quadrature.

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "schrodlab/common.hpp"

namespace schrodlab {

using Vec3 = std::array<double, 3>;

inline bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

struct Grid {
    int dim = 1;           // n in {1,2,3}
    double half_extent = 1.0;  // R
    long cells_per_axis = 0;   // N, power of two
    double spacing = 0.0;      // h = 2R/N

    Grid() = default;
    Grid(int n, double R, long N) : dim(n), half_extent(R), cells_per_axis(N) {
        if (n < 1 || n > 3) throw ConfigError("grid dim must be 1, 2 or 3");
        if (!(R > 0)) throw ConfigError("half_extent must be positive");
        if (!is_power_of_two(N) || N < 4) throw ConfigError("cells_per_axis must be a power of two >= 4");
        spacing = 2.0 * R / double(N);
    }

    long cell_count() const {
        long c = 1;
        for (int a = 0; a < dim; ++a) c *= cells_per_axis;
        return c;
    }
    double cell_center(long i) const { return -half_extent + (double(i) + 0.5) * spacing; }
    double cell_volume() const { return std::pow(spacing, dim); }

    long flatten(const std::array<long, 3>& idx) const {
        long f = 0;
        for (int a = dim - 1; a >= 0; --a) f = f * cells_per_axis + idx[a];
        return f;
    }
    std::array<long, 3> unflatten(long f) const {
        std::array<long, 3> idx{0, 0, 0};
        for (int a = 0; a < dim; ++a) { idx[a] = f % cells_per_axis; f /= cells_per_axis; }
        return idx;
    }
    Vec3 cell_point(long f) const {
        auto idx = unflatten(f);
        Vec3 x{0, 0, 0};
        for (int a = 0; a < dim; ++a) x[a] = cell_center(idx[a]);
        return x;
    }
    bool operator==(const Grid& o) const {
        return dim == o.dim && half_extent == o.half_extent && cells_per_axis == o.cells_per_axis;
    }
};

struct GridFunction {
    Grid grid;
    std::vector<double> samples;

    GridFunction() = default;
    explicit GridFunction(const Grid& g, double fill = 0.0) : grid(g), samples(g.cell_count(), fill) {}
    GridFunction(const Grid& g, std::vector<double> s) : grid(g), samples(std::move(s)) {
        if ((long)samples.size() != g.cell_count()) throw ConfigError("sample count != N^n");
        for (double v : samples)
            if (!std::isfinite(v)) throw ConfigError("grid function sample not finite");
    }

    static GridFunction from_function(const Grid& g, const std::function<double(const Vec3&)>& f) {
        GridFunction out(g);
        for (long i = 0; i < g.cell_count(); ++i) out.samples[i] = f(g.cell_point(i));
        return out;
    }

    double& operator[](long i) { return samples[i]; }
    double operator[](long i) const { return samples[i]; }
};

struct Cube {
    Vec3 center{0, 0, 0};
    double side = 0.0;

    double lo(int axis) const { return center[axis] - side / 2.0; }
    double hi(int axis) const { return center[axis] + side / 2.0; }
    bool operator==(const Cube& o) const { return center == o.center && side == o.side; }
};

inline Cube domain_cube(const Grid& g) {
    return Cube{{0, 0, 0}, 2.0 * g.half_extent};
}

inline bool cube_in_domain(const Grid& g, const Cube& q, double tol = 1e-12) {
    const double slack = tol * std::max(1.0, g.half_extent);
    for (int a = 0; a < g.dim; ++a)
        if (q.lo(a) < -g.half_extent - slack || q.hi(a) > g.half_extent + slack) return false;
    return true;
}

inline bool cube_contains(const Cube& outer, const Cube& inner, int dim, double tol = 1e-12) {
    for (int a = 0; a < dim; ++a)
        if (inner.lo(a) < outer.lo(a) - tol || inner.hi(a) > outer.hi(a) + tol) return false;
    return true;
}

// Half-open index ranges [lo, hi) of cell centers inside a cube, per axis.
// Membership rule: a cell belongs to Q iff its center lies in [c - l/2, c + l/2)^n.
struct CellRange {
    std::array<long, 3> lo{0, 0, 0};
    std::array<long, 3> hi{0, 0, 0};
    int dim = 1;

    long count() const {
        long c = 1;
        for (int a = 0; a < dim; ++a) {
            if (hi[a] <= lo[a]) return 0;
            c *= hi[a] - lo[a];
        }
        return c;
    }
};

inline CellRange cell_range(const Grid& g, const Cube& q) {
    CellRange r;
    r.dim = g.dim;
    const double h = g.spacing, R = g.half_extent;
    const long N = g.cells_per_axis;
    for (int a = 0; a < g.dim; ++a) {
        const double lo = q.lo(a), hi = q.hi(a);
        // first i with center >= lo; computed guess then fixed by exact comparison
        long ilo = (long)std::ceil((lo + R) / h - 0.5);
        while (ilo < N && g.cell_center(ilo) < lo) ++ilo;
        while (ilo > 0 && g.cell_center(ilo - 1) >= lo) --ilo;
        long ihi = (long)std::ceil((hi + R) / h - 0.5);
        while (ihi < N && g.cell_center(ihi) < hi) ++ihi;
        while (ihi > 0 && g.cell_center(ihi - 1) >= hi) --ihi;
        r.lo[a] = std::clamp(ilo, 0L, N);
        r.hi[a] = std::clamp(ihi, 0L, N);
    }
    return r;
}

template <typename Fn>
inline void for_each_cell(const Grid& g, const CellRange& r, Fn&& fn) {
    std::array<long, 3> i{0, 0, 0};
    const long lo2 = (g.dim > 2) ? r.lo[2] : 0, hi2 = (g.dim > 2) ? r.hi[2] : 1;
    const long lo1 = (g.dim > 1) ? r.lo[1] : 0, hi1 = (g.dim > 1) ? r.hi[1] : 1;
    for (i[2] = lo2; i[2] < hi2; ++i[2])
        for (i[1] = lo1; i[1] < hi1; ++i[1])
            for (i[0] = r.lo[0]; i[0] < r.hi[0]; ++i[0]) fn(g.flatten(i));
}

// Summed-area table for O(1) box sums of a sample array.
class SummedArea {
  public:
    SummedArea(const Grid& g, std::span<const double> samples) : grid_(g) {
        const long N = g.cells_per_axis;
        const long Np = N + 1;
        long sz = 1;
        for (int a = 0; a < g.dim; ++a) sz *= Np;
        table_.assign(sz, 0.0);
        if (g.dim == 1) {
            for (long i = 0; i < N; ++i) table_[i + 1] = table_[i] + samples[i];
        } else if (g.dim == 2) {
            for (long j = 0; j < N; ++j)
                for (long i = 0; i < N; ++i)
                    at2(i + 1, j + 1) = samples[i + N * j] + at2(i, j + 1) + at2(i + 1, j) - at2(i, j);
        } else {
            for (long k = 0; k < N; ++k)
                for (long j = 0; j < N; ++j)
                    for (long i = 0; i < N; ++i)
                        at3(i + 1, j + 1, k + 1) = samples[i + N * (j + N * k)]
                            + at3(i, j + 1, k + 1) + at3(i + 1, j, k + 1) + at3(i + 1, j + 1, k)
                            - at3(i, j, k + 1) - at3(i, j + 1, k) - at3(i + 1, j, k) + at3(i, j, k);
        }
    }

    double box_sum(const CellRange& r) const {
        if (r.count() == 0) return 0.0;
        if (grid_.dim == 1) return table_[r.hi[0]] - table_[r.lo[0]];
        if (grid_.dim == 2)
            return at2c(r.hi[0], r.hi[1]) - at2c(r.lo[0], r.hi[1]) - at2c(r.hi[0], r.lo[1]) + at2c(r.lo[0], r.lo[1]);
        return at3c(r.hi[0], r.hi[1], r.hi[2]) - at3c(r.lo[0], r.hi[1], r.hi[2])
             - at3c(r.hi[0], r.lo[1], r.hi[2]) - at3c(r.hi[0], r.hi[1], r.lo[2])
             + at3c(r.lo[0], r.lo[1], r.hi[2]) + at3c(r.lo[0], r.hi[1], r.lo[2])
             + at3c(r.hi[0], r.lo[1], r.lo[2]) - at3c(r.lo[0], r.lo[1], r.lo[2]);
    }

  private:
    double& at2(long i, long j) { return table_[i + (grid_.cells_per_axis + 1) * j]; }
    double at2c(long i, long j) const { return table_[i + (grid_.cells_per_axis + 1) * j]; }
    double& at3(long i, long j, long k) {
        const long Np = grid_.cells_per_axis + 1;
        return table_[i + Np * (j + Np * k)];
    }
    double at3c(long i, long j, long k) const {
        const long Np = grid_.cells_per_axis + 1;
        return table_[i + Np * (j + Np * k)];
    }
    Grid grid_;
    std::vector<double> table_;
};

inline void check_cube(const Grid& g, const Cube& q) {
    if (!(q.side > 0)) throw DegenerateCubeError("cube side must be positive");
    if (!cube_in_domain(g, q)) throw DomainError("cube outside grid domain");
}

inline double integrate(const GridFunction& f, const Cube& q) {
    check_cube(f.grid, q);
    const CellRange r = cell_range(f.grid, q);
    if (r.count() == 0) throw DegenerateCubeError("cube contains no cell center");
    double s = 0.0;
    for_each_cell(f.grid, r, [&](long i) { s += f.samples[i]; });
    return s * f.grid.cell_volume();
}

// Volume of a cube as seen by the quadrature: (# interior cell centers) * h^n.
inline double cube_volume(const Grid& g, const Cube& q) {
    const CellRange r = cell_range(g, q);
    const long c = r.count();
    if (c == 0) throw DegenerateCubeError("cube contains no cell center");
    return double(c) * g.cell_volume();
}

inline double average(const GridFunction& f, const Cube& q) {
    return integrate(f, q) / cube_volume(f.grid, q);
}

struct CubeCollection {
    std::vector<Cube> cubes;
    std::string tag;

    std::size_t size() const { return cubes.size(); }
    bool empty() const { return cubes.empty(); }
};

inline void dedup_cubes(std::vector<Cube>& cubes) {
    std::sort(cubes.begin(), cubes.end(), [](const Cube& a, const Cube& b) {
        if (a.side != b.side) return a.side < b.side;
        return a.center < b.center;
    });
    cubes.erase(std::unique(cubes.begin(), cubes.end()), cubes.end());
}

struct DyadicLattice {
    Cube root;                 // full domain
    int depth = 0;
    Vec3 shift{0, 0, 0};       // offsets, multiples of (2R)/3 per axis
    std::vector<std::vector<Cube>> levels;  // surviving cubes per level

    CubeCollection all_cubes(const std::string& tag = "dyadic") const {
        CubeCollection c;
        c.tag = tag;
        for (const auto& lv : levels) c.cubes.insert(c.cubes.end(), lv.begin(), lv.end());
        return c;
    }
};

// Lattice of dyadic cubes over [-R,R]^n shifted by shift_index in [0, 3^n):
// per-axis offsets s*(2R)/3 with s in {0,1,2}. Cubes not fully inside the
// domain are dropped (never clipped).
inline DyadicLattice build_lattice(const Grid& g, int depth, int shift_index) {
    if (depth < 0) throw ConfigError("depth must be >= 0");
    if ((1L << depth) > g.cells_per_axis)
        throw ResolutionError("lattice depth too deep for grid resolution");
    long nshifts = 1;
    for (int a = 0; a < g.dim; ++a) nshifts *= 3;
    if (shift_index < 0 || shift_index >= nshifts) throw ConfigError("shift_index out of range");

    DyadicLattice lat;
    lat.root = domain_cube(g);
    lat.depth = depth;
    int s = shift_index;
    for (int a = 0; a < g.dim; ++a) {
        lat.shift[a] = double(s % 3) * (2.0 * g.half_extent) / 3.0;
        s /= 3;
    }

    const double R = g.half_extent;
    lat.levels.resize(depth + 1);
    for (int d = 0; d <= depth; ++d) {
        const double side = 2.0 * R / double(1L << d);
        std::array<std::vector<double>, 3> axis_centers;
        for (int a = 0; a < g.dim; ++a) {
            // anchors at -R + shift + k*side, k spanning the whole domain
            const long kmin = (long)std::floor((-2.0 * R - lat.shift[a]) / side) - 1;
            const long kmax = (long)std::ceil((2.0 * R - lat.shift[a]) / side) + 1;
            for (long k = kmin; k <= kmax; ++k) {
                const double lo = -R + lat.shift[a] + double(k) * side;
                const double hi = lo + side;
                const double slack = 1e-12 * std::max(1.0, R);
                if (lo < -R - slack || hi > R + slack) continue;
                axis_centers[a].push_back(lo + side / 2.0);
            }
        }
        std::vector<Cube>& out = lat.levels[d];
        std::array<std::size_t, 3> idx{0, 0, 0};
        const std::size_t n2 = (g.dim > 2) ? axis_centers[2].size() : 1;
        const std::size_t n1 = (g.dim > 1) ? axis_centers[1].size() : 1;
        for (idx[2] = 0; idx[2] < n2; ++idx[2])
            for (idx[1] = 0; idx[1] < n1; ++idx[1])
                for (idx[0] = 0; idx[0] < axis_centers[0].size(); ++idx[0]) {
                    Cube q;
                    q.side = side;
                    for (int a = 0; a < g.dim; ++a) q.center[a] = axis_centers[a][idx[a]];
                    if (cell_range(g, q).count() > 0) out.push_back(q);
                }
    }
    return lat;
}

// Finite realizations of "sup over all cubes".
//   dyadic-all-shifts : union of the 3^n shifted lattices at the given depth
//   centered-sweep    : cubes centered at every cell with sides 2R/2^d
//   exhaustive-small  : every cube anchored at a cell with side k*h (oracle;
//                       n <= 2 and N <= 32 only)
inline CubeCollection enumerate_cubes(const Grid& g, const std::string& strategy, int depth = -1) {
    CubeCollection out;
    out.tag = strategy;
    const long N = g.cells_per_axis;
    if (strategy == "dyadic-all-shifts") {
        int d = depth >= 0 ? depth : (int)std::round(std::log2((double)N));
        long nshifts = 1;
        for (int a = 0; a < g.dim; ++a) nshifts *= 3;
        for (int s = 0; s < nshifts; ++s) {
            auto lat = build_lattice(g, d, s);
            for (const auto& lv : lat.levels) out.cubes.insert(out.cubes.end(), lv.begin(), lv.end());
        }
    } else if (strategy == "centered-sweep") {
        int dmax = depth >= 0 ? depth : (int)std::round(std::log2((double)N));
        for (int d = 0; d <= dmax; ++d) {
            const double side = 2.0 * g.half_extent / double(1L << d);
            for (long i = 0; i < g.cell_count(); ++i) {
                Cube q;
                q.side = side;
                q.center = g.cell_point(i);
                if (!cube_in_domain(g, q)) continue;
                if (cell_range(g, q).count() == 0) continue;
                out.cubes.push_back(q);
            }
        }
    } else if (strategy == "exhaustive-small") {
        if (g.dim > 2 || (g.dim == 1 && N > 64) || (g.dim == 2 && N > 32))
            throw SizeLimitError("exhaustive-small limited to N <= 64 (1-D) / N <= 32 (2-D)");
        const double h = g.spacing;
        for (long k = 1; k <= N; ++k) {
            const double side = double(k) * h;
            std::array<long, 3> i{0, 0, 0};
            const long amax = N - k + 1;
            const long a1 = (g.dim > 1) ? amax : 1;
            for (i[1] = 0; i[1] < a1; ++i[1])
                for (i[0] = 0; i[0] < amax; ++i[0]) {
                    Cube q;
                    q.side = side;
                    for (int a = 0; a < g.dim; ++a)
                        q.center[a] = -g.half_extent + double(i[a]) * h + side / 2.0;
                    out.cubes.push_back(q);
                }
        }
    } else {
        throw ConfigError("unknown cube enumeration strategy: " + strategy);
    }
    dedup_cubes(out.cubes);
    return out;
}

// ---- serialization ----

inline void write_grid_function_csv(const GridFunction& f, std::ostream& os) {
    os.precision(17);
    for (double v : f.samples) os << v << "\n";
}

inline nlohmann::json grid_header_json(const Grid& g) {
    return nlohmann::json{{"dim", g.dim},
                          {"half_extent", g.half_extent},
                          {"cells_per_axis", g.cells_per_axis}};
}

inline Grid grid_from_json(const nlohmann::json& j) {
    return Grid(j.at("dim").get<int>(), j.at("half_extent").get<double>(),
                j.at("cells_per_axis").get<long>());
}

inline GridFunction read_grid_function_csv(const Grid& g, std::istream& is) {
    std::vector<double> s;
    s.reserve(g.cell_count());
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        s.push_back(std::stod(line));
    }
    return GridFunction(g, std::move(s));
}

}  // namespace schrodlab
