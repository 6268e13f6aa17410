#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "crepair/geometry.hpp"

namespace crepair {

enum class BehaviorKind { neural, scripted, representative };

/// An input/output map between two boxes. Implementations must be pure:
/// equal inputs yield bitwise-equal outputs. Outputs are clamped into the
/// output box, so a behavior is total on its input space.
class Behavior {
public:
    Behavior(BoxSpace input_space, BoxSpace output_space, BehaviorKind kind)
        : in_(std::move(input_space)), out_(std::move(output_space)), kind_(kind) {}
    virtual ~Behavior() = default;

    Vec eval(const Vec& x) const {
        if (x.size() != in_.dims()) {
            throw DimensionError("behavior input has wrong dimension");
        }
        return clamp_to(out_, eval_impl(x));
    }

    const BoxSpace& input_space() const { return in_; }
    const BoxSpace& output_space() const { return out_; }
    BehaviorKind kind() const { return kind_; }

protected:
    virtual Vec eval_impl(const Vec& x) const = 0;

private:
    BoxSpace in_;
    BoxSpace out_;
    BehaviorKind kind_;
};

using BehaviorPtr = std::shared_ptr<const Behavior>;

/// Wraps a plain function as a scripted behavior. The function must be pure.
class FunctionBehavior final : public Behavior {
public:
    FunctionBehavior(BoxSpace in, BoxSpace out, std::function<Vec(const Vec&)> fn,
                     std::string name = "scripted")
        : Behavior(std::move(in), std::move(out), BehaviorKind::scripted),
          fn_(std::move(fn)), name_(std::move(name)) {}

    const std::string& name() const { return name_; }

protected:
    Vec eval_impl(const Vec& x) const override { return fn_(x); }

private:
    std::function<Vec(const Vec&)> fn_;
    std::string name_;
};

/// A cell-to-cell map g over a pair of grids: every point of input cell i is
/// sent to the center of output cell g(i). These maps are the finite family
/// the causal analysis works in.
class RepresentativeBehavior final : public Behavior {
public:
    RepresentativeBehavior(GridPartition input_grid, GridPartition output_grid,
                           std::vector<std::int64_t> map);

    const GridPartition& input_grid() const { return in_grid_; }
    const GridPartition& output_grid() const { return out_grid_; }
    const std::vector<std::int64_t>& map() const { return map_; }

    std::int64_t target_cell(std::int64_t input_flat) const;

    bool same_grids(const RepresentativeBehavior& o) const {
        return in_grid_ == o.in_grid_ && out_grid_ == o.out_grid_;
    }

protected:
    Vec eval_impl(const Vec& x) const override;

private:
    GridPartition in_grid_;
    GridPartition out_grid_;
    std::vector<std::int64_t> map_;
};

/// Reconstruct an evaluatable behavior from a cell map. The result maps
/// every x in input cell i to center(O_{g(i)}).
BehaviorPtr recon(const RepresentativeBehavior& g);

/// Largest output gap between two behaviors over the probe points, in the
/// output max norm. This is a lower bound of the supremum over the whole
/// continuous input space, which is not computable for black boxes.
double behavior_distance(const Behavior& f1, const Behavior& f2, const SamplingPlan& probe);

/// Exact distance between two representative behaviors on shared grids
/// (one probe per cell suffices).
double behavior_distance(const RepresentativeBehavior& f1, const RepresentativeBehavior& f2);

/// Partial order on behaviors relative to a base: f1 precedes f2 iff on
/// every probe point and output dimension, f1's output lies between the
/// base's and f2's (two-sided).
bool leq_behavior(const Behavior& f1, const Behavior& f2, const Behavior& base,
                  const SamplingPlan& probe);

/// Exact ordering for representative behaviors on shared grids.
bool leq_behavior(const RepresentativeBehavior& f1, const RepresentativeBehavior& f2,
                  const RepresentativeBehavior& base);

// Cell-map JSON: {inputGrid, outputGrid, map:[j_0, ..., j_{m-1}]}.
nlohmann::ordered_json to_json(const RepresentativeBehavior& g);
RepresentativeBehavior representative_from_json(const nlohmann::json& j);

} // namespace crepair
