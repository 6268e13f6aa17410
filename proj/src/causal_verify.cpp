#include "crepair/causal_verify.hpp"

#include <algorithm>

namespace crepair {

void CandidateCause::validate() const {
    if (nodes.empty()) throw ContractError("candidate cause must be nonempty");
    if (factual_bits.size() != nodes.size() || counterfactual_bits.size() != nodes.size()) {
        throw ContractError("candidate cause value vectors must align with its nodes");
    }
    if (!std::is_sorted(nodes.begin(), nodes.end())) {
        throw ContractError("candidate cause nodes must be in canonical order");
    }
    for (std::size_t t = 0; t < nodes.size(); ++t) {
        if (factual_bits[t] == counterfactual_bits[t]) {
            throw ContractError("candidate cause values must differ on every node");
        }
    }
}

namespace {

/// Shared enumeration state: valid assignments are indexed by the odometer
/// of per-cell output cells, verdicts memoized by that index.
class Oracle {
public:
    Oracle(const HPModel& model, const Simulator& sim, std::int64_t budget)
        : model_(model), sim_(sim) {
        const std::int64_t n = model.output_cells();
        std::int64_t t = 1;
        for (std::int64_t i = 0; i < model.input_cells(); ++i) {
            if (t > budget / n) {
                throw EnumerationBudgetError(
                    "model admits more valid assignments than the budget");
            }
            t *= n;
        }
        total_ = t;
        memo_.assign(static_cast<std::size_t>(total_), 0);
    }

    std::int64_t total() const { return total_; }

    std::vector<std::uint8_t> bits_at(std::int64_t flat) const {
        std::vector<int> bins(static_cast<std::size_t>(model_.input_cells() *
                                                       model_.output_dims()));
        const int d = model_.output_dims();
        for (std::int64_t i = model_.input_cells() - 1; i >= 0; --i) {
            const std::int64_t cell = flat % model_.output_cells();
            flat /= model_.output_cells();
            const std::vector<int> multi = model_.output_grid().multi_of(cell);
            for (int j = 0; j < d; ++j) bins[static_cast<std::size_t>(i * d + j)] = multi[j];
        }
        return NodeAssignment::from_bins(model_, std::move(bins)).bits();
    }

    /// Flat enumeration index of a valid bit vector; nullopt when the bits
    /// are not thermometer-coded.
    std::optional<std::int64_t> index_of(const std::vector<std::uint8_t>& bits) const {
        const int d = model_.output_dims();
        std::int64_t flat = 0;
        std::size_t pos = 0;
        std::vector<int> multi(static_cast<std::size_t>(d));
        for (std::int64_t i = 0; i < model_.input_cells(); ++i) {
            for (int j = 0; j < d; ++j) {
                const int nj = model_.bins_per_dim()[j];
                int ones = 0;
                bool prefix = true;
                for (int k = 0; k < nj; ++k) {
                    const bool b = bits[pos + static_cast<std::size_t>(k)] != 0;
                    if (b && !prefix) return std::nullopt;
                    if (b) {
                        ++ones;
                    } else {
                        prefix = false;
                    }
                }
                if (ones == 0) return std::nullopt;
                multi[static_cast<std::size_t>(j)] = ones - 1;
                pos += static_cast<std::size_t>(nj);
            }
            flat = flat * model_.output_cells() + model_.output_grid().flat_of(multi);
        }
        return flat;
    }

    bool verdict_at(std::int64_t flat) {
        auto& slot = memo_[static_cast<std::size_t>(flat)];
        if (slot == 0) {
            const bool r = sim_.verdict(*recon(decode(
                NodeAssignment::from_bits(model_, bits_at(flat)), model_)));
            slot = r ? 2 : 1;
        }
        return slot == 2;
    }

    const HPModel& model() const { return model_; }

private:
    const HPModel& model_;
    const Simulator& sim_;
    std::int64_t total_ = 1;
    mutable std::vector<std::int8_t> memo_;
};

std::int64_t bit_pos(const HPModel& model, const NodeId& id) { return model.bit_index(id); }

/// AC2 for node set S against factual v: some valid satisfying assignment w
/// agrees with v outside S once the partition is chosen as u1 = diff(w,v)\S
/// (any larger u1 induces the same scenario), and restoring S alone to its
/// factual values keeps the violation.
struct Ac2Witness {
    std::int64_t w_index = -1;
};

std::optional<Ac2Witness> ac2_holds(Oracle& oracle, const DiffSet& s,
                                    const std::vector<std::uint8_t>& v_bits,
                                    std::int64_t v_index) {
    const HPModel& model = oracle.model();
    std::vector<std::int64_t> s_pos;
    s_pos.reserve(s.size());
    for (const NodeId& id : s) s_pos.push_back(bit_pos(model, id));

    for (std::int64_t w = 0; w < oracle.total(); ++w) {
        if (w == v_index) continue;
        if (!oracle.verdict_at(w)) continue; // AC2(a) needs satisfaction
        const std::vector<std::uint8_t> w_bits = oracle.bits_at(w);
        // Scenario of AC2(b): factual on S, w's values elsewhere they
        // differ, factual on the untouched rest.
        std::vector<std::uint8_t> b_bits = w_bits;
        for (std::int64_t p : s_pos) b_bits[static_cast<std::size_t>(p)] =
            v_bits[static_cast<std::size_t>(p)];
        const std::optional<std::int64_t> b_index = oracle.index_of(b_bits);
        if (!b_index) continue; // scenario leaves the valid value space
        if (oracle.verdict_at(*b_index)) continue; // AC2(b) violated
        return Ac2Witness{w};
    }
    return std::nullopt;
}

std::vector<std::uint8_t> values_on(const std::vector<std::uint8_t>& bits, const HPModel& model,
                                    const DiffSet& nodes) {
    std::vector<std::uint8_t> vals;
    vals.reserve(nodes.size());
    for (const NodeId& id : nodes) {
        vals.push_back(bits[static_cast<std::size_t>(model.bit_index(id))]);
    }
    return vals;
}

} // namespace

AcCheck check_ac(const CandidateCause& candidate, const HPModel& model, const Simulator& sim,
                 const NodeAssignment& v, std::int64_t budget) {
    candidate.validate();
    if (candidate.nodes.size() > 20) {
        throw EnumerationBudgetError("candidate has too many nodes for subset recursion");
    }
    Oracle oracle(model, sim, budget);
    const std::vector<std::uint8_t>& v_bits = v.bits();
    const std::optional<std::int64_t> v_index = oracle.index_of(v_bits);
    if (!v_index) throw EncodingError("factual assignment is invalid");

    AcCheck out;

    // AC1: the factual run violates and carries the candidate's values.
    out.ac1 = !oracle.verdict_at(*v_index);
    for (std::size_t t = 0; t < candidate.nodes.size() && out.ac1; ++t) {
        const std::int64_t p = model.bit_index(candidate.nodes[t]);
        if (v_bits[static_cast<std::size_t>(p)] != candidate.factual_bits[t]) out.ac1 = false;
    }

    // AC2: try the candidate's own counterfactual values first, then the
    // full existential search.
    {
        std::vector<std::uint8_t> w_bits = v_bits;
        for (std::size_t t = 0; t < candidate.nodes.size(); ++t) {
            w_bits[static_cast<std::size_t>(model.bit_index(candidate.nodes[t]))] =
                candidate.counterfactual_bits[t];
        }
        const std::optional<std::int64_t> w_index = oracle.index_of(w_bits);
        const bool witness_ok =
            w_index && oracle.verdict_at(*w_index) && !oracle.verdict_at(*v_index);
        out.ac2 =
            witness_ok || ac2_holds(oracle, candidate.nodes, v_bits, *v_index).has_value();
    }

    // AC3: no proper nonempty subset may satisfy AC1 + AC2.
    out.ac3 = true;
    const std::size_t nn = candidate.nodes.size();
    for (std::uint64_t mask = 1; mask + 1 < (1ull << nn) && out.ac3; ++mask) {
        DiffSet subset;
        for (std::size_t t = 0; t < nn; ++t) {
            if (mask & (1ull << t)) subset.push_back(candidate.nodes[t]);
        }
        if (ac2_holds(oracle, subset, v_bits, *v_index)) out.ac3 = false;
    }
    return out;
}

std::vector<CandidateCause> enumerate_minimal_causes(const HPModel& model, const Simulator& sim,
                                                     const NodeAssignment& v,
                                                     std::int64_t budget) {
    if (model.io_node_count() > 16) {
        throw EnumerationBudgetError("too many IO nodes for minimal-cause enumeration");
    }
    Oracle oracle(model, sim, budget);
    const std::vector<std::uint8_t>& v_bits = v.bits();
    const std::optional<std::int64_t> v_index = oracle.index_of(v_bits);
    if (!v_index) throw EncodingError("factual assignment is invalid");

    const auto nn = static_cast<std::size_t>(model.io_node_count());
    std::vector<NodeId> all_nodes;
    all_nodes.reserve(nn);
    for (std::size_t p = 0; p < nn; ++p) {
        all_nodes.push_back(model.node_at(static_cast<std::int64_t>(p)));
    }

    std::vector<CandidateCause> found;
    std::vector<DiffSet> found_sets;

    // Subsets in canonical order: size ascending, then lexicographic over
    // node lists. Combinations are generated by index vectors.
    for (std::size_t size = 1; size <= nn; ++size) {
        std::vector<std::size_t> pick(size);
        for (std::size_t t = 0; t < size; ++t) pick[t] = t;
        for (;;) {
            DiffSet subset;
            subset.reserve(size);
            for (std::size_t t : pick) subset.push_back(all_nodes[t]);
            const bool covers_known = std::any_of(
                found_sets.begin(), found_sets.end(),
                [&](const DiffSet& known) { return diff_subset(known, subset); });
            if (!covers_known) {
                if (auto witness = ac2_holds(oracle, subset, v_bits, *v_index)) {
                    CandidateCause cause;
                    cause.nodes = subset;
                    cause.factual_bits = values_on(v_bits, model, subset);
                    cause.counterfactual_bits =
                        values_on(oracle.bits_at(witness->w_index), model, subset);
                    cause.validate();
                    found.push_back(std::move(cause));
                    found_sets.push_back(std::move(subset));
                }
            }
            // next combination
            std::size_t t = size;
            while (t > 0 && pick[t - 1] == nn - size + t - 1) --t;
            if (t == 0) break;
            ++pick[t - 1];
            for (std::size_t u = t; u < size; ++u) pick[u] = pick[u - 1] + 1;
        }
    }
    return found;
}

nlohmann::ordered_json causes_to_json(const std::vector<CandidateCause>& causes,
                                      const HPModel& model) {
    nlohmann::ordered_json j;
    j["model_hash"] = model.hash_hex();
    auto arr = nlohmann::ordered_json::array();
    for (const CandidateCause& c : causes) {
        nlohmann::ordered_json cj;
        auto nodes = nlohmann::ordered_json::array();
        for (const NodeId& id : c.nodes) {
            nodes.push_back(nlohmann::ordered_json::array({id.i, id.j, id.k}));
        }
        cj["nodes"] = std::move(nodes);
        cj["factual"] = c.factual_bits;
        cj["counterfactual"] = c.counterfactual_bits;
        arr.push_back(std::move(cj));
    }
    j["causes"] = std::move(arr);
    return j;
}

std::vector<CandidateCause> causes_from_json(const nlohmann::json& j, const HPModel& model) {
    if (j.contains("model_hash") && j.at("model_hash").get<std::string>() != model.hash_hex()) {
        throw IncompatibilityError("golden causes were produced for a different model");
    }
    std::vector<CandidateCause> causes;
    for (const auto& cj : j.at("causes")) {
        CandidateCause c;
        for (const auto& nj : cj.at("nodes")) {
            c.nodes.push_back(NodeId{nj[0].get<std::int64_t>(), nj[1].get<int>(),
                                     nj[2].get<int>()});
        }
        c.factual_bits = cj.at("factual").get<std::vector<std::uint8_t>>();
        c.counterfactual_bits = cj.at("counterfactual").get<std::vector<std::uint8_t>>();
        c.validate();
        causes.push_back(std::move(c));
    }
    return causes;
}

} // namespace crepair
