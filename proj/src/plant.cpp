#include "crepair/plant.hpp"

#include <cmath>

namespace crepair {

std::map<std::string, int> Plant::state_name_map() const {
    std::map<std::string, int> m;
    const auto names = state_names();
    for (std::size_t k = 0; k < names.size(); ++k) m[names[k]] = static_cast<int>(k);
    return m;
}

namespace {
constexpr double kPosMin = -1.2;
constexpr double kPosMax = 0.6;
constexpr double kVelMin = -0.07;
constexpr double kVelMax = 0.07;
constexpr double kPower = 0.0015;
constexpr double kSteepness = 0.0025; // z in the hill term z*cos(3*pos)
} // namespace

Eigen::Vector2d mountain_car_step(const Eigen::Vector2d& state, double ctrl) {
    const double pos = state[0];
    const double vel = state[1];
    double pos_next = std::clamp(pos + vel, kPosMin, kPosMax);
    double vel_next = std::clamp(vel + kPower * ctrl - kSteepness * std::cos(3.0 * pos),
                                 kVelMin, kVelMax);
    if (pos_next <= kPosMin) vel_next = std::max(vel_next, 0.0);
    return {pos_next, vel_next};
}

MountainCarPlant::MountainCarPlant(int horizon)
    : state_bounds_(Vec{{kPosMin, kVelMin}}, Vec{{kPosMax, kVelMax}}),
      control_bounds_(Vec{{-1.0}}, Vec{{1.0}}),
      horizon_(horizon) {
    if (horizon_ < 1) throw ConfigError("mountain car horizon must be >= 1");
}

Vec MountainCarPlant::step(const Vec& state, const Vec& control) const {
    if (state.size() != 2 || control.size() != 1) {
        throw DimensionError("mountain car expects 2-d state and 1-d control");
    }
    return mountain_car_step(Eigen::Vector2d(state[0], state[1]), control[0]);
}

namespace {

double pump_sign(double vel) { return vel >= 0.0 ? 1.0 : -1.0; }

// Inversion band of the flawed controller. Its edges sit on the 0.1-wide
// position grid used in the mountain-car experiment.
constexpr double kFlawLo = -0.4;
constexpr double kFlawHi = 0.1;

} // namespace

BehaviorPtr scripted_controller(const std::string& name, const Plant& plant) {
    const BoxSpace in = plant.controller_input_space();
    const BoxSpace out = plant.control_bounds();
    if (out.dims() != 1) {
        throw ConfigError("scripted controllers require a scalar control space");
    }
    std::function<Vec(const Vec&)> fn;
    if (name == "zero") {
        fn = [](const Vec&) { return Vec::Zero(1); };
    } else if (name == "energy_pump") {
        fn = [](const Vec& x) { return Vec{{pump_sign(x[1])}}; };
    } else if (name == "flawed_pump") {
        fn = [](const Vec& x) {
            double c = pump_sign(x[1]);
            if (x[0] >= kFlawLo && x[0] < kFlawHi) c = -c;
            return Vec{{c}};
        };
    } else {
        throw ConfigError("unknown scripted controller '" + name + "'");
    }
    return std::make_shared<FunctionBehavior>(in, out, std::move(fn), name);
}

std::vector<std::string> scripted_controller_names() {
    return {"zero", "energy_pump", "flawed_pump"};
}

} // namespace crepair
