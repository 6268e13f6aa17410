#include "crepair/behavior.hpp"

#include <string>

namespace crepair {

RepresentativeBehavior::RepresentativeBehavior(GridPartition input_grid, GridPartition output_grid,
                                               std::vector<std::int64_t> map)
    : Behavior(input_grid.space(), output_grid.space(), BehaviorKind::representative),
      in_grid_(std::move(input_grid)), out_grid_(std::move(output_grid)), map_(std::move(map)) {
    if (static_cast<std::int64_t>(map_.size()) != in_grid_.total_cells()) {
        throw GridMismatchError("cell map must be total: expected " +
                                std::to_string(in_grid_.total_cells()) + " entries, got " +
                                std::to_string(map_.size()));
    }
    for (std::int64_t j : map_) {
        if (j < 0 || j >= out_grid_.total_cells()) {
            throw IndexError("cell map entry out of range: " + std::to_string(j));
        }
    }
}

std::int64_t RepresentativeBehavior::target_cell(std::int64_t input_flat) const {
    if (input_flat < 0 || input_flat >= in_grid_.total_cells()) {
        throw IndexError("target_cell: input cell out of range");
    }
    return map_[static_cast<std::size_t>(input_flat)];
}

Vec RepresentativeBehavior::eval_impl(const Vec& x) const {
    const CellIndex i = cell_of(in_grid_, x);
    return center_of(out_grid_, map_[static_cast<std::size_t>(i.flat)]);
}

BehaviorPtr recon(const RepresentativeBehavior& g) {
    return std::make_shared<RepresentativeBehavior>(g);
}

namespace {

void require_shared_spaces(const Behavior& a, const Behavior& b) {
    if (!(a.input_space() == b.input_space()) || !(a.output_space() == b.output_space())) {
        throw DimensionError("behaviors do not share input/output spaces");
    }
}

} // namespace

double behavior_distance(const Behavior& f1, const Behavior& f2, const SamplingPlan& probe) {
    require_shared_spaces(f1, f2);
    double d = 0.0;
    for (const Vec& x : probe.points) {
        d = std::max(d, max_norm(f1.eval(x), f2.eval(x)));
    }
    return d;
}

double behavior_distance(const RepresentativeBehavior& f1, const RepresentativeBehavior& f2) {
    if (!f1.same_grids(f2)) {
        throw GridMismatchError("behavior_distance: representative behaviors on different grids");
    }
    return behavior_distance(f1, f2, SamplingPlan::cell_centers(f1.input_grid()));
}

bool leq_behavior(const Behavior& f1, const Behavior& f2, const Behavior& base,
                  const SamplingPlan& probe) {
    require_shared_spaces(f1, f2);
    require_shared_spaces(f1, base);
    for (const Vec& x : probe.points) {
        const Vec y0 = base.eval(x);
        const Vec y1 = f1.eval(x);
        const Vec y2 = f2.eval(x);
        for (int j = 0; j < y0.size(); ++j) {
            const bool increasing = y0[j] <= y1[j] && y1[j] <= y2[j];
            const bool decreasing = y0[j] >= y1[j] && y1[j] >= y2[j];
            if (!increasing && !decreasing) return false;
        }
    }
    return true;
}

bool leq_behavior(const RepresentativeBehavior& f1, const RepresentativeBehavior& f2,
                  const RepresentativeBehavior& base) {
    if (!f1.same_grids(f2) || !f1.same_grids(base)) {
        throw GridMismatchError("leq_behavior: representative behaviors on different grids");
    }
    return leq_behavior(f1, f2, base, SamplingPlan::cell_centers(f1.input_grid()));
}

nlohmann::ordered_json to_json(const RepresentativeBehavior& g) {
    nlohmann::ordered_json j;
    j["inputGrid"] = to_json(g.input_grid());
    j["outputGrid"] = to_json(g.output_grid());
    j["map"] = g.map();
    return j;
}

RepresentativeBehavior representative_from_json(const nlohmann::json& j) {
    if (!j.contains("inputGrid") || !j.contains("outputGrid") || !j.contains("map")) {
        throw IoError("cell-map document requires 'inputGrid', 'outputGrid' and 'map'");
    }
    std::vector<std::int64_t> map = j.at("map").get<std::vector<std::int64_t>>();
    return RepresentativeBehavior(grid_from_json(j.at("inputGrid")),
                                  grid_from_json(j.at("outputGrid")), std::move(map));
}

} // namespace crepair
