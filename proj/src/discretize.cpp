#include "crepair/discretize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace crepair {

namespace {

// Probes stay this fraction of a cell extent away from the upper face, so a
// probe of cell i always satisfies cell_of(probe) == i (the upper face
// belongs to the next cell). Must dominate the cell_of boundary snap.
constexpr double kFaceInset = 1e-6;

int default_samples(int dims) {
    std::int64_t s = 1;
    for (int k = 0; k < dims; ++k) {
        s *= 5;
        if (s > 4096) return 4096;
    }
    return static_cast<int>(s);
}

// Smallest odd lattice size L with L^dims >= samples.
int lattice_size(int samples, int dims) {
    for (int level = 1;; level += 2) {
        std::int64_t total = 1;
        for (int k = 0; k < dims && total < samples; ++k) total *= level;
        if (total >= samples) return level;
    }
}

std::string widths_str(const Vec& w) {
    std::string s = "(";
    for (int k = 0; k < w.size(); ++k) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", w[k]);
        s += buf;
        if (k + 1 < w.size()) s += ", ";
    }
    return s + ")";
}

Vec halved(const Vec& w, int halvings) {
    Vec r(w.size());
    for (int k = 0; k < w.size(); ++k) r[k] = std::ldexp(w[k], -halvings);
    return r;
}

// Map of input cells to output cells if every cell passes containment.
std::optional<std::vector<std::int64_t>> try_containment_map(const Behavior& f,
                                                             const GridPartition& in_grid,
                                                             const GridPartition& out_grid,
                                                             const ContainmentMode& mode) {
    std::vector<std::int64_t> map(static_cast<std::size_t>(in_grid.total_cells()));
    if (const auto* lip = std::get_if<LipschitzContainment>(&mode)) {
        const double lhs =
            lip->c * std::sqrt(static_cast<double>(in_grid.dims())) * in_grid.widths().maxCoeff();
        if (lhs > out_grid.widths().minCoeff()) return std::nullopt;
        for (std::int64_t i = 0; i < in_grid.total_cells(); ++i) {
            map[static_cast<std::size_t>(i)] = cell_of(out_grid, f.eval(center_of(in_grid, i))).flat;
        }
        return map;
    }
    const auto& probe = std::get<ProbeContainment>(mode);
    const int samples =
        probe.samples_per_cell > 0 ? probe.samples_per_cell : default_samples(in_grid.dims());
    for (std::int64_t i = 0; i < in_grid.total_cells(); ++i) {
        const std::vector<Vec> points = probe_points(in_grid, i, samples);
        std::int64_t target = -1;
        for (const Vec& x : points) {
            const std::int64_t cell = cell_of(out_grid, f.eval(x)).flat;
            if (target < 0) {
                target = cell;
            } else if (cell != target) {
                return std::nullopt;
            }
        }
        map[static_cast<std::size_t>(i)] = target;
    }
    return map;
}

} // namespace

std::vector<Vec> probe_points(const GridPartition& grid, std::int64_t flat_cell, int samples) {
    if (samples < 1) throw ContractError("probe_points: samples must be >= 1");
    CellIndex idx;
    idx.flat = flat_cell;
    idx.multi = grid.multi_of(flat_cell);
    const std::pair<Vec, Vec> bounds = grid.cell_bounds(idx);
    const Vec& lo = bounds.first;
    const Vec& hi = bounds.second;
    const Vec span = (hi - lo) * (1.0 - kFaceInset);
    const Vec center = 0.5 * (lo + hi);

    std::vector<Vec> points;
    points.reserve(static_cast<std::size_t>(samples));
    points.push_back(center);
    if (samples == 1) return points;

    const int d = grid.dims();
    const int level = lattice_size(samples, d);
    auto lattice_point = [&](const std::vector<int>& t) {
        Vec x(d);
        for (int k = 0; k < d; ++k) {
            const double frac = level == 1 ? 0.5 : static_cast<double>(t[k]) / (level - 1);
            x[k] = lo[k] + frac * span[k];
        }
        return x;
    };
    auto is_center = [&](const std::vector<int>& t) {
        for (int k = 0; k < d; ++k) {
            if (2 * t[k] != level - 1) return false;
        }
        return true;
    };
    auto is_corner = [&](const std::vector<int>& t) {
        for (int k = 0; k < d; ++k) {
            if (t[k] != 0 && t[k] != level - 1) return false;
        }
        return true;
    };

    // Corners first (row-major over the corner bits), then the rest.
    for (int pass = 0; pass < 2 && static_cast<int>(points.size()) < samples; ++pass) {
        std::vector<int> t(d, 0);
        for (;;) {
            const bool corner = is_corner(t);
            if (!is_center(t) && ((pass == 0) == corner)) {
                points.push_back(lattice_point(t));
                if (static_cast<int>(points.size()) == samples) break;
            }
            int k = d - 1;
            for (; k >= 0; --k) {
                if (++t[k] < level) break;
                t[k] = 0;
            }
            if (k < 0) break;
        }
    }
    return points;
}

IoTable tabulate(const Behavior& f, const GridPartition& input_grid, int samples_per_cell) {
    if (!(f.input_space() == input_grid.space())) {
        throw GridMismatchError("tabulate: grid does not cover the behavior's input space");
    }
    const int samples =
        samples_per_cell > 0 ? samples_per_cell : default_samples(input_grid.dims());
    IoTable table;
    table.input_dims = input_grid.dims();
    table.output_dims = f.output_space().dims();
    table.rows.reserve(static_cast<std::size_t>(input_grid.total_cells() * samples));
    for (std::int64_t i = 0; i < input_grid.total_cells(); ++i) {
        for (const Vec& x : probe_points(input_grid, i, samples)) {
            table.rows.push_back({i, x, f.eval(x)});
        }
    }
    return table;
}

std::string IoTable::to_csv() const {
    std::ostringstream os;
    os << "cell_flat";
    for (int k = 0; k < input_dims; ++k) os << ",input_" << k;
    for (int k = 0; k < output_dims; ++k) os << ",output_" << k;
    os << "\n";
    char buf[64];
    for (const IoTableRow& row : rows) {
        os << row.cell_flat;
        for (int k = 0; k < input_dims; ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", row.input[k]);
            os << ',' << buf;
        }
        for (int k = 0; k < output_dims; ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", row.output[k]);
            os << ',' << buf;
        }
        os << "\n";
    }
    return os.str();
}

DiscretizationResult discretize(const Behavior& f, const Simulator& sim,
                                const DiscretizationConfig& cfg) {
    const BoxSpace& in_space = f.input_space();
    const BoxSpace& out_space = f.output_space();
    if (cfg.initial_widths_in.size() != in_space.dims() ||
        cfg.initial_widths_out.size() != out_space.dims()) {
        throw DimensionError("initial widths do not match the behavior's spaces");
    }
    for (int k = 0; k < in_space.dims(); ++k) {
        if (cfg.initial_widths_in[k] > in_space.extent()[k] + 1e-12) {
            throw ConfigError("initial input width exceeds the box extent in dimension " +
                              std::to_string(k));
        }
    }
    for (int k = 0; k < out_space.dims(); ++k) {
        if (cfg.initial_widths_out[k] > out_space.extent()[k] + 1e-12) {
            throw ConfigError("initial output width exceeds the box extent in dimension " +
                              std::to_string(k));
        }
    }
    if (cfg.max_halvings < 1) throw ConfigError("max_halvings must be >= 1");

    const bool factual_verdict = sim.verdict(f);

    int hx = 0;
    int hy = 0;
    for (;;) {
        const GridPartition out_grid(out_space, halved(cfg.initial_widths_out, hy));
        std::optional<std::vector<std::int64_t>> map;
        GridPartition in_grid(in_space, halved(cfg.initial_widths_in, hx));
        for (;;) {
            map = try_containment_map(f, in_grid, out_grid, cfg.containment);
            if (map) break;
            if (hx == cfg.max_halvings) {
                throw RefinementBudgetError(
                    "input refinement budget exhausted; finest grids tried: input widths " +
                    widths_str(in_grid.widths()) + ", output widths " +
                    widths_str(out_grid.widths()));
            }
            ++hx;
            in_grid = GridPartition(in_space, halved(cfg.initial_widths_in, hx));
        }
        RepresentativeBehavior g(in_grid, out_grid, std::move(*map));
        if (sim.verdict(*recon(g)) == factual_verdict) {
            return DiscretizationResult{std::move(in_grid), out_grid, std::move(g),
                                        Halvings{hx, hy}};
        }
        if (hy == cfg.max_halvings) {
            throw RefinementBudgetError(
                "output refinement budget exhausted; finest grids tried: input widths " +
                widths_str(in_grid.widths()) + ", output widths " + widths_str(out_grid.widths()));
        }
        ++hy;
    }
}

RepresentativeBehavior discretize_on_grids(const Behavior& f, const GridPartition& input_grid,
                                           const GridPartition& output_grid,
                                           const ContainmentMode& mode) {
    if (!(f.input_space() == input_grid.space()) || !(f.output_space() == output_grid.space())) {
        throw GridMismatchError("discretize_on_grids: grids do not cover the behavior's spaces");
    }
    auto map = try_containment_map(f, input_grid, output_grid, mode);
    if (!map) {
        throw ContractError("discretize_on_grids: some input cell is not completely mapped "
                            "into one output cell");
    }
    return RepresentativeBehavior(input_grid, output_grid, std::move(*map));
}

} // namespace crepair
