#include "crepair/simulate.hpp"

namespace crepair {

SimulatorConfig::SimulatorConfig(PlantPtr plant_, Vec s0_, StlFormula property_,
                                 bool stop_at_goal_)
    : plant(std::move(plant_)), s0(std::move(s0_)), property(std::move(property_)),
      stop_at_goal(stop_at_goal_) {
    if (!plant) throw ConfigError("simulator requires a plant");
    if (s0.size() != plant->state_dims()) {
        throw DimensionError("initial state has wrong dimension");
    }
    if (!plant->state_bounds().contains(s0)) {
        throw OutOfDomainError("initial state outside plant bounds");
    }
    if (property.max_time() > plant->horizon()) {
        throw ContractError("property time bounds exceed the plant horizon");
    }
}

PlantSimulator::PlantSimulator(SimulatorConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.stop_at_goal) {
        if (const StlFormula* goal = cfg_.property.goal_predicate()) {
            goal_ = *goal;
        }
    }
}

bool PlantSimulator::verdict(const Behavior& f) const { return rollout(f).verdict; }

Trajectory PlantSimulator::rollout(const Behavior& f) const {
    const Plant& plant = *cfg_.plant;
    if (!(f.input_space() == plant.controller_input_space()) ||
        !(f.output_space() == plant.control_bounds())) {
        throw DimensionError("behavior spaces do not match the plant's controller interface");
    }
    Trajectory traj;
    traj.states.reserve(static_cast<std::size_t>(plant.horizon()) + 1);
    Vec s = cfg_.s0;
    traj.states.push_back(s);
    for (int t = 0; t < plant.horizon(); ++t) {
        if (goal_ && goal_->eval_predicate(s)) break;
        const Vec ctrl = f.eval(plant.control_input(s));
        s = plant.step(s, ctrl);
        if (!s.allFinite()) {
            throw NumericDivergenceError("state diverged at step " + std::to_string(t));
        }
        traj.states.push_back(s);
        traj.controls.push_back(ctrl);
    }
    traj.verdict = stl_eval(cfg_.property, traj.states);
    return traj;
}

std::pair<bool, Trajectory> simulate(const Behavior& f, const SimulatorConfig& cfg) {
    PlantSimulator sim(cfg);
    Trajectory traj = sim.rollout(f);
    return {traj.verdict, std::move(traj)};
}

} // namespace crepair
