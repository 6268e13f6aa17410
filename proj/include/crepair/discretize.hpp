#pragma once

#include <optional>
#include <variant>

#include "crepair/behavior.hpp"
#include "crepair/simulate.hpp"

namespace crepair {

/// Probe-based containment: a cell counts as completely mapped when every
/// sampled point of the (half-open) cell lands in one output cell.
/// samples_per_cell == 0 picks the default of 5^dim(I) points per cell.
struct ProbeContainment {
    int samples_per_cell = 0;
};

/// Lipschitz containment: with a known constant c, the sufficient condition
/// c * sqrt(dim(I)) * max(widths_in) <= min(widths_out) is enforced instead
/// of inspecting the behavior cell by cell.
struct LipschitzContainment {
    double c = 1.0;
};

using ContainmentMode = std::variant<ProbeContainment, LipschitzContainment>;

struct DiscretizationConfig {
    Vec initial_widths_in;
    Vec initial_widths_out;
    int max_halvings = 20;
    ContainmentMode containment = ProbeContainment{};
};

struct Halvings {
    int input = 0;
    int output = 0;
};

struct DiscretizationResult {
    GridPartition input_grid;
    GridPartition output_grid;
    RepresentativeBehavior g;
    Halvings halvings_used;
};

/// Deterministic probe points inside one cell: the exact center first, then
/// the cell corners, then remaining lattice points in row-major order,
/// truncated to `samples`. Points sit strictly inside the half-open cell so
/// they agree with the tiling rule.
std::vector<Vec> probe_points(const GridPartition& grid, std::int64_t flat_cell, int samples);

struct IoTableRow {
    std::int64_t cell_flat = 0;
    Vec input;
    Vec output;
};

struct IoTable {
    std::vector<IoTableRow> rows;
    int input_dims = 0;
    int output_dims = 0;

    /// CSV with header cell_flat,input_0,...,output_0,...
    std::string to_csv() const;
};

/// Deterministic I/O table of f over the grid: for each cell, the configured
/// probe points (center first) and f's outputs, in cell-index order.
/// samples_per_cell == 0 picks the 5^dim(I) default.
IoTable tabulate(const Behavior& f, const GridPartition& input_grid, int samples_per_cell);

/// Grid refinement: partition the output space, refine the input partition
/// until every input cell maps completely into one output cell, and repeat
/// with a finer output partition until the reconstructed map has the same
/// simulator verdict as f. Throws RefinementBudgetError when either side
/// would exceed max_halvings; the message reports the finest grids tried.
DiscretizationResult discretize(const Behavior& f, const Simulator& sim,
                                const DiscretizationConfig& cfg);

/// Single-pass variant on fixed grids: no refinement, errors if any input
/// cell fails containment. Exact inverse of recon on representative maps.
RepresentativeBehavior discretize_on_grids(const Behavior& f, const GridPartition& input_grid,
                                           const GridPartition& output_grid,
                                           const ContainmentMode& mode = ProbeContainment{});

} // namespace crepair
