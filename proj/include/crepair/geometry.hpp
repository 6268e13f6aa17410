#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "crepair/error.hpp"

namespace crepair {

using Vec = Eigen::VectorXd;

/// Axis-aligned box with strictly ordered per-dimension bounds. The
/// controller input and output spaces are boxes; distances on them are
/// taken in the max norm.
class BoxSpace {
public:
    BoxSpace(Vec lower, Vec upper);

    int dims() const { return static_cast<int>(lower_.size()); }
    const Vec& lower() const { return lower_; }
    const Vec& upper() const { return upper_; }
    Vec extent() const { return upper_ - lower_; }
    Vec midpoint() const { return 0.5 * (lower_ + upper_); }

    bool contains(const Vec& x) const;

    bool operator==(const BoxSpace& o) const {
        return lower_ == o.lower_ && upper_ == o.upper_;
    }

private:
    Vec lower_;
    Vec upper_;
};

/// Clamp a point into the box, dimension by dimension.
Vec clamp_to(const BoxSpace& box, const Vec& x);

/// Chebyshev (max-norm) distance between two points of equal dimension.
double max_norm(const Vec& a, const Vec& b);

/// Cell address, kept in both row-major flat form and per-dimension form.
struct CellIndex {
    std::int64_t flat = 0;
    std::vector<int> multi;

    bool operator==(const CellIndex&) const = default;
};

/// Uniform hypercube tiling of a box. Cells are half-open along every
/// dimension except the topmost cell, which is closed, so each point of the
/// box lies in exactly one cell. The topmost cell may be truncated when the
/// widths do not divide the extent evenly. Flat indexing is row-major with
/// the last dimension varying fastest.
class GridPartition {
public:
    GridPartition(BoxSpace space, Vec widths);

    const BoxSpace& space() const { return space_; }
    const Vec& widths() const { return widths_; }
    const std::vector<int>& counts() const { return counts_; }
    int dims() const { return space_.dims(); }
    std::int64_t total_cells() const { return total_; }

    std::int64_t flat_of(const std::vector<int>& multi) const;
    std::vector<int> multi_of(std::int64_t flat) const;

    /// Per-dimension closed bounds of a cell (topmost cells truncate at the
    /// box upper bound).
    std::pair<Vec, Vec> cell_bounds(const CellIndex& i) const;

    bool operator==(const GridPartition& o) const {
        return space_ == o.space_ && widths_ == o.widths_;
    }

private:
    BoxSpace space_;
    Vec widths_;
    std::vector<int> counts_;
    std::int64_t total_ = 1;
};

/// Locate the cell containing x. Points on an interior cell boundary belong
/// to the cell whose lower face they sit on; quotients within 1e-9 of an
/// integer snap up so that exact-arithmetic boundaries land where hand
/// computation puts them.
CellIndex cell_of(const GridPartition& grid, const Vec& x);

/// Per-dimension midpoint of a cell (truncation-aware for topmost cells).
Vec center_of(const GridPartition& grid, const CellIndex& i);
Vec center_of(const GridPartition& grid, std::int64_t flat);

/// A finite list of evaluation points used to compare black-box behaviors.
struct SamplingPlan {
    std::vector<Vec> points;

    /// One probe per cell, at the cell center. Exact for representative
    /// behaviors.
    static SamplingPlan cell_centers(const GridPartition& grid);

    /// Uniform lattice over the whole box, `per_dim` points per dimension.
    static SamplingPlan lattice(const BoxSpace& box, int per_dim);
};

// JSON forms. A space is {lower, upper}; a grid is {lower, upper, widths}.
// Row-major flat indexing is part of the file contract.
nlohmann::ordered_json to_json(const BoxSpace& box);
nlohmann::ordered_json to_json(const GridPartition& grid);
BoxSpace box_from_json(const nlohmann::json& j);
GridPartition grid_from_json(const nlohmann::json& j);

} // namespace crepair
