#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "crepair/geometry.hpp"

namespace crepair {

/// Bounded signal temporal logic with boolean semantics over discrete-time
/// state traces. Predicates are linear inequalities over state dimensions.
class StlFormula {
public:
    enum class Cmp { geq, leq, gt, lt };

    static StlFormula predicate(Vec coeffs, Cmp cmp, double bound);
    static StlFormula negation(StlFormula f);
    static StlFormula conjunction(std::vector<StlFormula> fs);
    static StlFormula disjunction(std::vector<StlFormula> fs);
    static StlFormula eventually(int t1, int t2, StlFormula f);
    static StlFormula always(int t1, int t2, StlFormula f);

    /// Largest time offset the formula can reach from evaluation time 0.
    int max_time() const;

    /// If the formula is exactly F[t1,t2](predicate), return the predicate;
    /// used for goal-directed early stopping of rollouts.
    const StlFormula* goal_predicate() const;

    bool is_predicate() const;
    bool eval_predicate(const Vec& state) const;

    std::string text() const;

    friend bool stl_eval(const StlFormula& f, std::span<const Vec> trace);

private:
    struct Node;
    std::shared_ptr<const Node> node_;
};

/// Evaluate at time 0. Time indices past the end of the trace read the last
/// state (the trace's final state persists).
bool stl_eval(const StlFormula& f, std::span<const Vec> trace);
bool stl_eval(const StlFormula& f, const std::vector<Vec>& trace);

/// Parse the prefix syntax, e.g. "(F 0 110 (>= pos 0.45))". Combinators:
/// F, G, and, or, not; comparisons >=, <=, >, < applied to a named state
/// variable and a constant. `vars` maps variable names to state dimensions;
/// `state_dims` sizes the predicate coefficient vectors.
StlFormula parse_stl(const std::string& text, const std::map<std::string, int>& vars,
                     int state_dims);

} // namespace crepair
