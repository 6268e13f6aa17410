#pragma once

#include <compare>
#include <cstdint>

#include "crepair/behavior.hpp"
#include "crepair/simulate.hpp"

namespace crepair {

/// Identifier of the proposition node u_{ijk}: input cell i, output
/// dimension j, bin index k (0-based; bin 0 starts at the box lower bound).
struct NodeId {
    std::int64_t i = 0;
    int j = 0;
    int k = 0;

    auto operator<=>(const NodeId&) const = default;
};

/// Set of node identifiers in canonical (i, j, k) order.
using DiffSet = std::vector<NodeId>;

bool diff_contains(const DiffSet& a, const NodeId& id);
bool diff_subset(const DiffSet& a, const DiffSet& b);

/// Propositional model over a finished discretization. Nodes u_{ijk}
/// (i over input cells, j over output dimensions, k over bins along j)
/// each state that the output's j-th coordinate reaches at least bin k.
/// The behavior itself is the single exogenous node; the property node's
/// value is the simulator verdict of the decoded behavior.
class HPModel {
public:
    HPModel(GridPartition input_grid, GridPartition output_grid, SimulatorPtr sim);

    const GridPartition& input_grid() const { return input_grid_; }
    const GridPartition& output_grid() const { return output_grid_; }
    const SimulatorPtr& simulator() const { return sim_; }

    std::int64_t input_cells() const { return input_grid_.total_cells(); } // m
    int output_dims() const { return output_grid_.dims(); }                // d
    const std::vector<int>& bins_per_dim() const { return output_grid_.counts(); } // n_j
    std::int64_t output_cells() const { return output_grid_.total_cells(); }       // n

    int bins_per_cell() const { return bins_per_cell_; } // sum_j n_j
    std::int64_t io_node_count() const { return input_cells() * bins_per_cell(); }
    std::int64_t total_node_count() const { return io_node_count() + 2; }

    /// Lower bound of output bin k along dimension j.
    double bin_lower_bound(int j, int k) const;

    /// log10 of the number of valid assignments n^m.
    double valid_assignment_count_log10() const;
    /// Exact decimal rendering of n^m.
    std::string valid_assignment_count_decimal() const;

    /// Bit position of node (i, j, k) in an assignment vector.
    std::int64_t bit_index(const NodeId& id) const;
    NodeId node_at(std::int64_t bit_index) const;

    /// Hash over the grid geometry; serialized artifacts carry it so stale
    /// or foreign files are rejected.
    std::uint64_t hash() const { return hash_; }
    std::string hash_hex() const;

    bool same_shape(const HPModel& o) const {
        return input_grid_ == o.input_grid_ && output_grid_ == o.output_grid_;
    }

    nlohmann::ordered_json summary_json() const;

private:
    GridPartition input_grid_;
    GridPartition output_grid_;
    SimulatorPtr sim_;
    int bins_per_cell_ = 0;
    std::vector<int> dim_offsets_; // bit offset of (j, 0) within a cell block
    std::uint64_t hash_ = 0;
};

HPModel build_model(const GridPartition& input_grid, const GridPartition& output_grid,
                    SimulatorPtr sim);

/// Boolean values of all IO nodes, thermometer-coded per (cell, dimension)
/// block: a prefix of 1s followed by 0s, never all 0s. Construction rejects
/// anything else. Assignments carry their block shape so set operations can
/// name nodes without the model.
class NodeAssignment {
public:
    /// From per-(i,j) bin indices (the output cell coordinate along j).
    static NodeAssignment from_bins(const HPModel& model, std::vector<int> bins);
    /// From raw bits; validates the thermometer property.
    static NodeAssignment from_bits(const HPModel& model, std::vector<std::uint8_t> bits);

    std::int64_t size() const { return static_cast<std::int64_t>(bits_.size()); }
    bool bit(std::int64_t index) const { return bits_[static_cast<std::size_t>(index)] != 0; }
    const std::vector<std::uint8_t>& bits() const { return bits_; }

    /// Bin index of block (i, j) = number of leading 1s minus one.
    int bin(std::int64_t i, int j) const;
    const std::vector<int>& bins() const { return bins_; }

    std::int64_t cells() const { return cells_; }
    int dims() const { return dims_; }
    const std::vector<int>& bins_per_dim() const { return nj_; }

    bool same_shape(const NodeAssignment& o) const {
        return cells_ == o.cells_ && dims_ == o.dims_ && nj_ == o.nj_;
    }

    bool operator==(const NodeAssignment& o) const { return bits_ == o.bits_; }

private:
    NodeAssignment() = default;
    std::vector<std::uint8_t> bits_;
    std::vector<int> bins_; // per (i, j), i-major
    std::vector<int> nj_;
    std::int64_t cells_ = 0;
    int dims_ = 0;
};

/// Evaluate the node propositions of a representative behavior.
NodeAssignment encode(const RepresentativeBehavior& g, const HPModel& model);

/// Inverse of encode: recover the cell map from the node values.
RepresentativeBehavior decode(const NodeAssignment& v, const HPModel& model);

/// Nodes whose values differ between two assignments, in canonical order.
DiffSet node_diff(const NodeAssignment& v1, const NodeAssignment& v2);

/// v1 precedes v2 relative to base iff diff(base, v1) is a subset of
/// diff(base, v2).
bool leq_nodes(const NodeAssignment& v1, const NodeAssignment& v2, const NodeAssignment& base);

/// Simulator verdict of the decoded behavior (the property node's equation).
bool verdict_of(const HPModel& model, const Simulator& sim, const NodeAssignment& v);

// Assignment JSON: {model_hash, blocks:[[bits...], ...]} with blocks in
// (i, j) order, i-major.
nlohmann::ordered_json to_json(const NodeAssignment& v, const HPModel& model);
NodeAssignment assignment_from_json(const nlohmann::json& j, const HPModel& model);

} // namespace crepair
