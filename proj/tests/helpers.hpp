#pragma once

#include <random>

#include "crepair/causal_verify.hpp"
#include "crepair/discretize.hpp"
#include "crepair/search.hpp"

namespace crepair::test {

inline BoxSpace unit_interval() { return BoxSpace(Vec{{0.0}}, Vec{{1.0}}); }
inline BoxSpace control_box() { return BoxSpace(Vec{{-1.0}}, Vec{{1.0}}); }

inline GridPartition grid1d(double lo, double hi, double width) {
    return GridPartition(BoxSpace(Vec{{lo}}, Vec{{hi}}), Vec{{width}});
}

inline BehaviorPtr constant_behavior(const BoxSpace& in, const BoxSpace& out, const Vec& value) {
    return std::make_shared<FunctionBehavior>(in, out, [value](const Vec&) { return value; },
                                              "constant");
}

/// 1-D toy model: m input cells over [0,1], n output cells over [-1,1].
struct ToyModel {
    GridPartition input_grid;
    GridPartition output_grid;

    ToyModel(std::int64_t m, std::int64_t n)
        : input_grid(BoxSpace(Vec{{0.0}}, Vec{{1.0}}), Vec{{1.0 / static_cast<double>(m)}}),
          output_grid(BoxSpace(Vec{{-1.0}}, Vec{{1.0}}), Vec{{2.0 / static_cast<double>(n)}}) {}

    RepresentativeBehavior rep(std::vector<std::int64_t> map) const {
        return RepresentativeBehavior(input_grid, output_grid, std::move(map));
    }

    HPModel model(SimulatorPtr sim = nullptr) const {
        return build_model(input_grid, output_grid, std::move(sim));
    }
};

/// Reads off the output cells a behavior maps each input cell center to;
/// lets toy simulators define verdicts over cell maps.
inline std::vector<std::int64_t> cells_of(const Behavior& f, const GridPartition& in_grid,
                                          const GridPartition& out_grid) {
    std::vector<std::int64_t> cells(static_cast<std::size_t>(in_grid.total_cells()));
    for (std::int64_t i = 0; i < in_grid.total_cells(); ++i) {
        cells[static_cast<std::size_t>(i)] = cell_of(out_grid, f.eval(center_of(in_grid, i))).flat;
    }
    return cells;
}

/// Simulator whose verdict is an arbitrary function of the cell map.
inline SimulatorPtr cellmap_simulator(const GridPartition& in_grid, const GridPartition& out_grid,
                                      std::function<bool(const std::vector<std::int64_t>&)> fn) {
    return std::make_shared<FunctionSimulator>(
        [=, fn = std::move(fn)](const Behavior& f) { return fn(cells_of(f, in_grid, out_grid)); });
}

inline SimulatorPtr constant_simulator(bool verdict) {
    return std::make_shared<FunctionSimulator>([verdict](const Behavior&) { return verdict; });
}

/// Counts verdicts without interfering with the wrapped simulator.
class CountingSimulator final : public Simulator {
public:
    explicit CountingSimulator(SimulatorPtr inner) : inner_(std::move(inner)) {}
    bool verdict(const Behavior& f) const override {
        ++calls_;
        return inner_->verdict(f);
    }
    std::int64_t calls() const { return calls_; }

private:
    SimulatorPtr inner_;
    mutable std::int64_t calls_ = 0;
};

/// Every single cause node, restored alone (one bin step toward factual),
/// must break satisfaction.
inline bool one_minimal(const HPModel& model, const Simulator& sim, const CauseResult& result) {
    const int d = model.output_dims();
    for (const NodeId& id : result.cause) {
        std::vector<int> bins = result.counterfactual_minimal.bins();
        const std::size_t block = static_cast<std::size_t>(id.i * d + id.j);
        const int bf = result.factual.bins()[block];
        if (bins[block] == bf) return false; // cause node in an agreeing block
        bins[block] += bins[block] > bf ? -1 : 1;
        if (verdict_of(model, sim, NodeAssignment::from_bins(model, bins))) return false;
    }
    return true;
}

/// Deterministic mountain-car pipeline pieces for tests.
struct McSetup {
    PlantPtr plant;
    std::shared_ptr<const PlantSimulator> sim;

    explicit McSetup(bool stop_at_goal = true) {
        auto mc = std::make_shared<MountainCarPlant>(110);
        plant = mc;
        StlFormula prop = parse_stl("(F 0 110 (>= pos 0.45))", mc->state_name_map(), 2);
        sim = std::make_shared<PlantSimulator>(
            SimulatorConfig(plant, Vec{{-0.5, 0.0}}, std::move(prop), stop_at_goal));
    }
};

} // namespace crepair::test
