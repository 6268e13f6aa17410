#pragma once

#include <optional>
#include <variant>

#include "crepair/hp_model.hpp"
#include "crepair/stats.hpp"

namespace crepair {

struct SamplerConfig {
    double p = 0.001;     // probability threshold of the failure statement
    double alpha = 0.05;  // significance level
    std::uint64_t seed = 0;
    std::optional<std::int64_t> max_samples; // overrides the derived N
    int threads = 1;

    std::int64_t derived_n() const { return required_samples(p, alpha); }
};

/// Emitted after a full miss streak: with confidence 1 - alpha, the fraction
/// of satisfying assignments under uniform sampling is at most p. The
/// statistical claim requires at least the derived N misses; a smaller
/// override records the streak without the claim.
struct FailureStatement {
    double p = 0.0;
    double alpha = 0.0;
    std::int64_t required_n = 0;
    std::int64_t samples_taken = 0;
    std::uint64_t seed = 0;
    std::string statement;

    bool claim_holds() const { return samples_taken >= required_n; }

    nlohmann::ordered_json to_json() const;
};

struct SampleHit {
    NodeAssignment assignment;
    std::int64_t samples_taken = 0;
};

using SampleOutcome = std::variant<SampleHit, FailureStatement>;

/// Draw up to N valid assignments uniformly (independently per input cell,
/// an output cell uniform among the n options) and return the first one the
/// simulator accepts, else the failure statement. Reproducible from the
/// seed; with threads > 1 verdicts are evaluated in batches but acceptance
/// follows sample-index order, so the outcome and the reported sample count
/// equal the sequential run's.
SampleOutcome sample_counterfactual(const HPModel& model, const Simulator& sim,
                                    const SamplerConfig& cfg);

enum class InterpolationMode { incremental, binary };

/// Order in which differing nodes are visited. Lexicographic is the
/// (i, j, k) loop order; dim_major permutes the output dimensions (useful
/// when stepping one dimension before another should be explored); shuffled
/// applies a seeded permutation.
struct NodeOrder {
    enum class Kind { lexicographic, dim_major, shuffled } kind = Kind::lexicographic;
    std::vector<int> dim_order; // for dim_major: permutation of output dims
    std::uint64_t seed = 0;     // for shuffled

    static NodeOrder lex() { return {}; }
    static NodeOrder dims_first(std::vector<int> order);
    static NodeOrder shuffle(std::uint64_t seed);
};

struct CauseResult {
    NodeAssignment factual;
    NodeAssignment counterfactual_raw;
    NodeAssignment counterfactual_minimal;
    DiffSet cause;
    RepresentativeBehavior repaired;
    std::int64_t simulator_calls = 0; // distinct verdicts computed
    std::int64_t step_ops = 0;        // tentative steps attempted
};

/// Walk the satisfactory assignment back toward the factual one, one bin
/// step at a time, keeping only steps that preserve satisfaction, until no
/// step is possible. Incremental mode sweeps the differing nodes in order
/// to a fixed point; binary mode first binary-searches the longest ordered
/// prefix of restoring steps that keeps satisfaction, then runs the same
/// sweep from there. Either way every single remaining cause node is
/// pinned: restoring it alone breaks satisfaction.
CauseResult interpolate(const HPModel& model, const Simulator& sim, const NodeAssignment& factual,
                        const NodeAssignment& satisfactory,
                        InterpolationMode mode = InterpolationMode::incremental,
                        const NodeOrder& order = NodeOrder::lex());

struct ChangedCell {
    CellIndex input;
    CellIndex factual_output;
    CellIndex repaired_output;
};

struct CauseReport {
    DiffSet cause;
    std::vector<ChangedCell> changed_cells;
};

/// Diff two assignments and render the cause as cell remappings.
CauseReport extract_cause(const NodeAssignment& v, const NodeAssignment& v_star,
                          const HPModel& model);

/// Human-readable rendering: the control signals on the changed input cells
/// given by the factual behavior, with the repaired targets.
std::string describe_cause(const CauseReport& report, const HPModel& model);

nlohmann::ordered_json to_json(const CauseResult& result, const HPModel& model);

} // namespace crepair
