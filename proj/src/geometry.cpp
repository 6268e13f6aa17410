#include "crepair/geometry.hpp"

#include <cmath>
#include <string>

namespace crepair {

namespace {

// Snap tolerance for boundary quotients, in units of one cell width.
constexpr double kBoundarySnap = 1e-9;

std::string vec_str(const Vec& v) {
    std::string s = "(";
    for (int k = 0; k < v.size(); ++k) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", v[k]);
        s += buf;
        if (k + 1 < v.size()) s += ", ";
    }
    return s + ")";
}

} // namespace

BoxSpace::BoxSpace(Vec lower, Vec upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size() || lower_.size() == 0) {
        throw DimensionError("box bounds must be nonempty and of equal length");
    }
    for (int k = 0; k < lower_.size(); ++k) {
        if (!(lower_[k] < upper_[k])) {
            throw DimensionError("box requires lower < upper in dimension " + std::to_string(k));
        }
    }
}

bool BoxSpace::contains(const Vec& x) const {
    if (x.size() != lower_.size()) return false;
    for (int k = 0; k < x.size(); ++k) {
        if (x[k] < lower_[k] || x[k] > upper_[k]) return false;
    }
    return true;
}

Vec clamp_to(const BoxSpace& box, const Vec& x) {
    if (x.size() != box.dims()) {
        throw DimensionError("clamp_to: point has wrong dimension");
    }
    return x.cwiseMax(box.lower()).cwiseMin(box.upper());
}

double max_norm(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) {
        throw DimensionError("max_norm: dimension mismatch");
    }
    return (a - b).cwiseAbs().maxCoeff();
}

GridPartition::GridPartition(BoxSpace space, Vec widths)
    : space_(std::move(space)), widths_(std::move(widths)) {
    if (widths_.size() != space_.dims()) {
        throw DimensionError("grid widths must match space dimension");
    }
    counts_.resize(space_.dims());
    for (int k = 0; k < space_.dims(); ++k) {
        if (!(widths_[k] > 0.0)) {
            throw DimensionError("grid widths must be positive");
        }
        double q = (space_.upper()[k] - space_.lower()[k]) / widths_[k];
        // ceil with a snap so that extents that divide evenly in exact
        // arithmetic (e.g. 0.14 / 0.01) do not gain a spurious cell.
        auto c = static_cast<std::int64_t>(std::ceil(q - kBoundarySnap));
        counts_[k] = static_cast<int>(std::max<std::int64_t>(1, c));
        total_ *= counts_[k];
    }
}

std::int64_t GridPartition::flat_of(const std::vector<int>& multi) const {
    if (static_cast<int>(multi.size()) != dims()) {
        throw IndexError("flat_of: index has wrong dimension");
    }
    std::int64_t flat = 0;
    for (int k = 0; k < dims(); ++k) {
        if (multi[k] < 0 || multi[k] >= counts_[k]) {
            throw IndexError("flat_of: index out of range in dimension " + std::to_string(k));
        }
        flat = flat * counts_[k] + multi[k];
    }
    return flat;
}

std::vector<int> GridPartition::multi_of(std::int64_t flat) const {
    if (flat < 0 || flat >= total_) {
        throw IndexError("multi_of: flat index out of range");
    }
    std::vector<int> multi(dims());
    for (int k = dims() - 1; k >= 0; --k) {
        multi[k] = static_cast<int>(flat % counts_[k]);
        flat /= counts_[k];
    }
    return multi;
}

std::pair<Vec, Vec> GridPartition::cell_bounds(const CellIndex& i) const {
    if (static_cast<int>(i.multi.size()) != dims()) {
        throw IndexError("cell_bounds: index has wrong dimension");
    }
    Vec lo(dims()), hi(dims());
    for (int k = 0; k < dims(); ++k) {
        if (i.multi[k] < 0 || i.multi[k] >= counts_[k]) {
            throw IndexError("cell_bounds: index out of range");
        }
        lo[k] = space_.lower()[k] + i.multi[k] * widths_[k];
        hi[k] = std::min(space_.lower()[k] + (i.multi[k] + 1) * widths_[k], space_.upper()[k]);
    }
    return {lo, hi};
}

CellIndex cell_of(const GridPartition& grid, const Vec& x) {
    if (x.size() != grid.dims()) {
        throw DimensionError("cell_of: point has wrong dimension");
    }
    if (!grid.space().contains(x)) {
        throw OutOfDomainError("cell_of: point " + vec_str(x) + " outside the box");
    }
    CellIndex idx;
    idx.multi.resize(grid.dims());
    for (int k = 0; k < grid.dims(); ++k) {
        double q = (x[k] - grid.space().lower()[k]) / grid.widths()[k];
        auto c = static_cast<std::int64_t>(std::floor(q + kBoundarySnap));
        if (c < 0) c = 0;
        if (c >= grid.counts()[k]) c = grid.counts()[k] - 1; // closed topmost cell
        idx.multi[k] = static_cast<int>(c);
    }
    idx.flat = grid.flat_of(idx.multi);
    return idx;
}

Vec center_of(const GridPartition& grid, const CellIndex& i) {
    auto [lo, hi] = grid.cell_bounds(i);
    return 0.5 * (lo + hi);
}

Vec center_of(const GridPartition& grid, std::int64_t flat) {
    CellIndex idx;
    idx.flat = flat;
    idx.multi = grid.multi_of(flat);
    return center_of(grid, idx);
}

SamplingPlan SamplingPlan::cell_centers(const GridPartition& grid) {
    SamplingPlan plan;
    plan.points.reserve(static_cast<std::size_t>(grid.total_cells()));
    for (std::int64_t i = 0; i < grid.total_cells(); ++i) {
        plan.points.push_back(center_of(grid, i));
    }
    return plan;
}

SamplingPlan SamplingPlan::lattice(const BoxSpace& box, int per_dim) {
    if (per_dim < 1) {
        throw IndexError("lattice: per_dim must be >= 1");
    }
    SamplingPlan plan;
    const int d = box.dims();
    std::int64_t total = 1;
    for (int k = 0; k < d; ++k) total *= per_dim;
    plan.points.reserve(static_cast<std::size_t>(total));
    std::vector<int> t(d, 0);
    for (std::int64_t n = 0; n < total; ++n) {
        Vec x(d);
        for (int k = 0; k < d; ++k) {
            double frac = per_dim == 1 ? 0.5 : static_cast<double>(t[k]) / (per_dim - 1);
            x[k] = box.lower()[k] + frac * (box.upper()[k] - box.lower()[k]);
        }
        plan.points.push_back(x);
        for (int k = d - 1; k >= 0; --k) {
            if (++t[k] < per_dim) break;
            t[k] = 0;
        }
    }
    return plan;
}

namespace {

nlohmann::ordered_json vec_to_json(const Vec& v) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (int k = 0; k < v.size(); ++k) a.push_back(v[k]);
    return a;
}

Vec vec_from_json(const nlohmann::json& j, const char* field) {
    if (!j.is_array() || j.empty()) {
        throw IoError(std::string("expected nonempty array for '") + field + "'");
    }
    Vec v(j.size());
    for (std::size_t k = 0; k < j.size(); ++k) v[static_cast<int>(k)] = j[k].get<double>();
    return v;
}

} // namespace

nlohmann::ordered_json to_json(const BoxSpace& box) {
    nlohmann::ordered_json j;
    j["lower"] = vec_to_json(box.lower());
    j["upper"] = vec_to_json(box.upper());
    return j;
}

nlohmann::ordered_json to_json(const GridPartition& grid) {
    nlohmann::ordered_json j = to_json(grid.space());
    j["widths"] = vec_to_json(grid.widths());
    return j;
}

BoxSpace box_from_json(const nlohmann::json& j) {
    if (!j.contains("lower") || !j.contains("upper")) {
        throw IoError("space document requires 'lower' and 'upper'");
    }
    return BoxSpace(vec_from_json(j.at("lower"), "lower"), vec_from_json(j.at("upper"), "upper"));
}

GridPartition grid_from_json(const nlohmann::json& j) {
    if (!j.contains("widths")) {
        throw IoError("grid document requires 'widths'");
    }
    return GridPartition(box_from_json(j), vec_from_json(j.at("widths"), "widths"));
}

} // namespace crepair
