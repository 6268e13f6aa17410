#pragma once

#include <functional>
#include <optional>

#include "crepair/plant.hpp"
#include "crepair/stl.hpp"

namespace crepair {

/// Closed-loop rollout setup: plant, initial state, property and the
/// early-stop switch. When `stop_at_goal` is set and the property has the
/// form F[t1,t2](predicate), the rollout halts as soon as the predicate
/// holds; the verdict is unaffected because the last state persists in the
/// monitor's padding rule.
struct SimulatorConfig {
    PlantPtr plant;
    Vec s0;
    StlFormula property;
    bool stop_at_goal = true;

    SimulatorConfig(PlantPtr plant_, Vec s0_, StlFormula property_, bool stop_at_goal_ = true);
};

struct Trajectory {
    std::vector<Vec> states;   // length <= horizon + 1
    std::vector<Vec> controls; // one per step taken
    bool verdict = false;
};

/// The outcome function S: behaviors to {0, 1}. Implementations must be
/// pure and reentrant; many verdicts may be computed concurrently.
class Simulator {
public:
    virtual ~Simulator() = default;
    virtual bool verdict(const Behavior& f) const = 0;
};

using SimulatorPtr = std::shared_ptr<const Simulator>;

/// Simulator backed by a deterministic plant rollout and an STL monitor.
class PlantSimulator final : public Simulator {
public:
    explicit PlantSimulator(SimulatorConfig cfg);

    bool verdict(const Behavior& f) const override;
    Trajectory rollout(const Behavior& f) const;

    const SimulatorConfig& config() const { return cfg_; }

private:
    SimulatorConfig cfg_;
    std::optional<StlFormula> goal_;
};

/// Simulator defined by an arbitrary pure predicate on behaviors; used for
/// scripted verdict functions in analyses and tests.
class FunctionSimulator final : public Simulator {
public:
    explicit FunctionSimulator(std::function<bool(const Behavior&)> fn) : fn_(std::move(fn)) {}
    bool verdict(const Behavior& f) const override { return fn_(f); }

private:
    std::function<bool(const Behavior&)> fn_;
};

/// Roll the closed loop from s0 and evaluate the property on the trace.
std::pair<bool, Trajectory> simulate(const Behavior& f, const SimulatorConfig& cfg);

} // namespace crepair
