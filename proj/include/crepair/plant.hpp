#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "crepair/behavior.hpp"

namespace crepair {

/// Deterministic discrete-time plant. `step` must be pure: equal
/// (state, control) pairs give bitwise-equal next states.
class Plant {
public:
    virtual ~Plant() = default;

    virtual int state_dims() const = 0;
    virtual const BoxSpace& state_bounds() const = 0;
    virtual const BoxSpace& control_bounds() const = 0;
    virtual int horizon() const = 0;

    virtual Vec step(const Vec& state, const Vec& control) const = 0;

    /// Point fed to the controller at a given state. Identity by default.
    virtual Vec control_input(const Vec& state) const { return state; }

    /// Box the controller reads from (the image of control_input).
    virtual const BoxSpace& controller_input_space() const { return state_bounds(); }

    virtual std::vector<std::string> state_names() const = 0;
    virtual std::vector<std::string> control_names() const = 0;

    std::map<std::string, int> state_name_map() const;
};

using PlantPtr = std::shared_ptr<const Plant>;

/// One transition of the mountain-car dynamics:
///   pos' = clamp(pos + vel, [-1.2, 0.6])
///   vel' = clamp(vel + 0.0015*ctrl - 0.0025*cos(3*pos), [-0.07, 0.07])
/// with velocity zeroed from below when the car is pressed against the left
/// wall. Position update uses the pre-update velocity.
Eigen::Vector2d mountain_car_step(const Eigen::Vector2d& state, double ctrl);

/// The mountain-car plant: state (pos, vel), scalar control in [-1, 1].
class MountainCarPlant final : public Plant {
public:
    explicit MountainCarPlant(int horizon = 110);

    int state_dims() const override { return 2; }
    const BoxSpace& state_bounds() const override { return state_bounds_; }
    const BoxSpace& control_bounds() const override { return control_bounds_; }
    int horizon() const override { return horizon_; }

    Vec step(const Vec& state, const Vec& control) const override;

    std::vector<std::string> state_names() const override { return {"pos", "vel"}; }
    std::vector<std::string> control_names() const override { return {"ctrl"}; }

private:
    BoxSpace state_bounds_;
    BoxSpace control_bounds_;
    int horizon_;
};

/// Scripted mountain-car controllers used as stand-ins for learned ones:
///   "zero"        - no control effort; cannot leave the valley
///   "energy_pump" - push along the current velocity (+1 at rest)
///   "flawed_pump" - energy pump with its sign inverted on pos in [-0.4, 0.1);
///                   constructed to violate the reach property from (-0.5, 0)
BehaviorPtr scripted_controller(const std::string& name, const Plant& plant);

/// Names accepted by scripted_controller.
std::vector<std::string> scripted_controller_names();

} // namespace crepair
