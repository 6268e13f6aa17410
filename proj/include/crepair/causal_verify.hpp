#pragma once

#include "crepair/hp_model.hpp"

namespace crepair {

/// A suspected cause: a node set together with its factual values and the
/// counterfactual values that flip the outcome. Values must differ on every
/// node.
struct CandidateCause {
    DiffSet nodes;
    std::vector<std::uint8_t> factual_bits;        // aligned with nodes
    std::vector<std::uint8_t> counterfactual_bits; // aligned with nodes

    void validate() const;
};

struct AcCheck {
    bool ac1 = false;
    bool ac2 = false;
    bool ac3 = false;

    bool all() const { return ac1 && ac2 && ac3; }
};

/// Exhaustive check of the three actual-cause conditions for the violation
/// event (simulator verdict 0) on a small model. AC2 searches partitions of
/// the remaining IO nodes and counterfactual values over valid assignments;
/// AC3 recurses over proper subsets of the candidate. Models beyond the
/// budget (valid assignments or node count) raise EnumerationBudgetError.
AcCheck check_ac(const CandidateCause& candidate, const HPModel& model, const Simulator& sim,
                 const NodeAssignment& v, std::int64_t budget = 1'000'000);

/// All subset-minimal node sets that admit counterfactual values satisfying
/// AC1 + AC2, in deterministic order (size, then lexicographic), each with
/// the first witness found. Ground truth for the search pipeline on desk-
/// scale models.
std::vector<CandidateCause> enumerate_minimal_causes(const HPModel& model, const Simulator& sim,
                                                     const NodeAssignment& v,
                                                     std::int64_t budget = 1'000'000);

/// Golden-file form: {model_hash, causes:[{nodes, factual, counterfactual}]}.
nlohmann::ordered_json causes_to_json(const std::vector<CandidateCause>& causes,
                                      const HPModel& model);
std::vector<CandidateCause> causes_from_json(const nlohmann::json& j, const HPModel& model);

} // namespace crepair
