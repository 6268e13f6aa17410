#include "crepair/hp_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace crepair {

bool diff_contains(const DiffSet& a, const NodeId& id) {
    return std::binary_search(a.begin(), a.end(), id);
}

bool diff_subset(const DiffSet& a, const DiffSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string grid_canonical(const GridPartition& g) {
    std::string s;
    char buf[40];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g;", v);
        s += buf;
    };
    for (int k = 0; k < g.dims(); ++k) put(g.space().lower()[k]);
    for (int k = 0; k < g.dims(); ++k) put(g.space().upper()[k]);
    for (int k = 0; k < g.dims(); ++k) put(g.widths()[k]);
    return s;
}

} // namespace

HPModel::HPModel(GridPartition input_grid, GridPartition output_grid, SimulatorPtr sim)
    : input_grid_(std::move(input_grid)), output_grid_(std::move(output_grid)),
      sim_(std::move(sim)) {
    dim_offsets_.resize(static_cast<std::size_t>(output_dims()) + 1, 0);
    for (int j = 0; j < output_dims(); ++j) {
        dim_offsets_[static_cast<std::size_t>(j) + 1] =
            dim_offsets_[static_cast<std::size_t>(j)] + bins_per_dim()[j];
    }
    bins_per_cell_ = dim_offsets_.back();
    hash_ = fnv1a("in:" + grid_canonical(input_grid_) + "out:" + grid_canonical(output_grid_));
}

HPModel build_model(const GridPartition& input_grid, const GridPartition& output_grid,
                    SimulatorPtr sim) {
    return HPModel(input_grid, output_grid, std::move(sim));
}

double HPModel::bin_lower_bound(int j, int k) const {
    if (j < 0 || j >= output_dims() || k < 0 || k >= bins_per_dim()[j]) {
        throw IndexError("bin_lower_bound: bin out of range");
    }
    return output_grid_.space().lower()[j] + k * output_grid_.widths()[j];
}

double HPModel::valid_assignment_count_log10() const {
    return static_cast<double>(input_cells()) * std::log10(static_cast<double>(output_cells()));
}

std::string HPModel::valid_assignment_count_decimal() const {
    // n^m by repeated decimal multiplication; digits kept little-endian.
    std::vector<int> digits{1};
    const std::int64_t n = output_cells();
    for (std::int64_t rep = 0; rep < input_cells(); ++rep) {
        std::int64_t carry = 0;
        for (int& d : digits) {
            std::int64_t v = d * n + carry;
            d = static_cast<int>(v % 10);
            carry = v / 10;
        }
        while (carry > 0) {
            digits.push_back(static_cast<int>(carry % 10));
            carry /= 10;
        }
    }
    std::string s;
    s.reserve(digits.size());
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) s += static_cast<char>('0' + *it);
    return s;
}

std::int64_t HPModel::bit_index(const NodeId& id) const {
    if (id.i < 0 || id.i >= input_cells() || id.j < 0 || id.j >= output_dims() || id.k < 0 ||
        id.k >= bins_per_dim()[id.j]) {
        throw IndexError("node id out of range");
    }
    return id.i * bins_per_cell_ + dim_offsets_[static_cast<std::size_t>(id.j)] + id.k;
}

NodeId HPModel::node_at(std::int64_t bit_index) const {
    if (bit_index < 0 || bit_index >= io_node_count()) {
        throw IndexError("bit index out of range");
    }
    NodeId id;
    id.i = bit_index / bins_per_cell_;
    int rem = static_cast<int>(bit_index % bins_per_cell_);
    int j = 0;
    while (rem >= dim_offsets_[static_cast<std::size_t>(j) + 1]) ++j;
    id.j = j;
    id.k = rem - dim_offsets_[static_cast<std::size_t>(j)];
    return id;
}

std::string HPModel::hash_hex() const {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash_));
    return buf;
}

nlohmann::ordered_json HPModel::summary_json() const {
    nlohmann::ordered_json j;
    j["model_hash"] = hash_hex();
    j["input_cells"] = input_cells();
    j["output_cells"] = output_cells();
    j["output_dims"] = output_dims();
    j["bins_per_dim"] = bins_per_dim();
    j["io_nodes"] = io_node_count();
    j["total_nodes"] = total_node_count();
    j["valid_assignments_log10"] = valid_assignment_count_log10();
    j["valid_assignments"] = valid_assignment_count_decimal();
    auto bins = nlohmann::ordered_json::array();
    for (int dim = 0; dim < output_dims(); ++dim) {
        auto lows = nlohmann::ordered_json::array();
        for (int k = 0; k < bins_per_dim()[dim]; ++k) lows.push_back(bin_lower_bound(dim, k));
        bins.push_back(std::move(lows));
    }
    j["bin_lower_bounds"] = std::move(bins);
    return j;
}

NodeAssignment NodeAssignment::from_bins(const HPModel& model, std::vector<int> bins) {
    const std::int64_t m = model.input_cells();
    const int d = model.output_dims();
    if (static_cast<std::int64_t>(bins.size()) != m * d) {
        throw EncodingError("bin vector has wrong length");
    }
    NodeAssignment v;
    v.cells_ = m;
    v.dims_ = d;
    v.nj_ = model.bins_per_dim();
    v.bins_ = std::move(bins);
    v.bits_.assign(static_cast<std::size_t>(model.io_node_count()), 0);
    std::size_t pos = 0;
    for (std::int64_t i = 0; i < m; ++i) {
        for (int j = 0; j < d; ++j) {
            const int nj = v.nj_[static_cast<std::size_t>(j)];
            const int b = v.bins_[static_cast<std::size_t>(i * d + j)];
            if (b < 0 || b >= nj) {
                throw EncodingError("bin index out of range in block (" + std::to_string(i) +
                                    ", " + std::to_string(j) + ")");
            }
            for (int k = 0; k < nj; ++k) v.bits_[pos++] = k <= b ? 1 : 0;
        }
    }
    return v;
}

NodeAssignment NodeAssignment::from_bits(const HPModel& model, std::vector<std::uint8_t> bits) {
    if (static_cast<std::int64_t>(bits.size()) != model.io_node_count()) {
        throw EncodingError("bit vector has wrong length");
    }
    const std::int64_t m = model.input_cells();
    const int d = model.output_dims();
    std::vector<int> bins(static_cast<std::size_t>(m * d));
    std::size_t pos = 0;
    for (std::int64_t i = 0; i < m; ++i) {
        for (int j = 0; j < d; ++j) {
            const int nj = model.bins_per_dim()[j];
            int ones = 0;
            bool in_prefix = true;
            for (int k = 0; k < nj; ++k) {
                const bool b = bits[pos + static_cast<std::size_t>(k)] != 0;
                if (b && !in_prefix) {
                    throw EncodingError("assignment is not thermometer-coded in block (" +
                                        std::to_string(i) + ", " + std::to_string(j) + ")");
                }
                if (b) {
                    ++ones;
                } else {
                    in_prefix = false;
                }
            }
            if (ones == 0) {
                throw EncodingError("block (" + std::to_string(i) + ", " + std::to_string(j) +
                                    ") has no set bit; the bottom bin proposition always holds");
            }
            bins[static_cast<std::size_t>(i * d + j)] = ones - 1;
            pos += static_cast<std::size_t>(nj);
        }
    }
    NodeAssignment v;
    v.cells_ = m;
    v.dims_ = d;
    v.nj_ = model.bins_per_dim();
    v.bits_ = std::move(bits);
    v.bins_ = std::move(bins);
    return v;
}

int NodeAssignment::bin(std::int64_t i, int j) const {
    if (i < 0 || i >= cells_ || j < 0 || j >= dims_) {
        throw IndexError("bin: block out of range");
    }
    return bins_[static_cast<std::size_t>(i * dims_ + j)];
}

NodeAssignment encode(const RepresentativeBehavior& g, const HPModel& model) {
    if (!(g.input_grid() == model.input_grid()) || !(g.output_grid() == model.output_grid())) {
        throw GridMismatchError("encode: behavior grids do not match the model");
    }
    const std::int64_t m = model.input_cells();
    const int d = model.output_dims();
    std::vector<int> bins(static_cast<std::size_t>(m * d));
    for (std::int64_t i = 0; i < m; ++i) {
        const std::vector<int> multi = model.output_grid().multi_of(g.target_cell(i));
        for (int j = 0; j < d; ++j) bins[static_cast<std::size_t>(i * d + j)] = multi[j];
    }
    return NodeAssignment::from_bins(model, std::move(bins));
}

RepresentativeBehavior decode(const NodeAssignment& v, const HPModel& model) {
    if (v.size() != model.io_node_count() || v.bins_per_dim() != model.bins_per_dim()) {
        throw EncodingError("decode: assignment shape does not match the model");
    }
    const std::int64_t m = model.input_cells();
    const int d = model.output_dims();
    std::vector<std::int64_t> map(static_cast<std::size_t>(m));
    std::vector<int> multi(static_cast<std::size_t>(d));
    for (std::int64_t i = 0; i < m; ++i) {
        for (int j = 0; j < d; ++j) multi[static_cast<std::size_t>(j)] = v.bin(i, j);
        map[static_cast<std::size_t>(i)] = model.output_grid().flat_of(multi);
    }
    return RepresentativeBehavior(model.input_grid(), model.output_grid(), std::move(map));
}

DiffSet node_diff(const NodeAssignment& v1, const NodeAssignment& v2) {
    if (v1.size() != v2.size() || !v1.same_shape(v2)) {
        throw EncodingError("node_diff: assignments have different shapes");
    }
    DiffSet diff;
    std::size_t pos = 0;
    for (std::int64_t i = 0; i < v1.cells(); ++i) {
        for (int j = 0; j < v1.dims(); ++j) {
            const int nj = v1.bins_per_dim()[static_cast<std::size_t>(j)];
            for (int k = 0; k < nj; ++k, ++pos) {
                if (v1.bits()[pos] != v2.bits()[pos]) diff.push_back({i, j, k});
            }
        }
    }
    return diff;
}

bool leq_nodes(const NodeAssignment& v1, const NodeAssignment& v2, const NodeAssignment& base) {
    return diff_subset(node_diff(base, v1), node_diff(base, v2));
}

bool verdict_of(const HPModel& model, const Simulator& sim, const NodeAssignment& v) {
    return sim.verdict(*recon(decode(v, model)));
}

nlohmann::ordered_json to_json(const NodeAssignment& v, const HPModel& model) {
    if (v.size() != model.io_node_count()) {
        throw EncodingError("to_json: assignment length does not match the model");
    }
    nlohmann::ordered_json j;
    j["model_hash"] = model.hash_hex();
    auto blocks = nlohmann::ordered_json::array();
    std::size_t pos = 0;
    for (std::int64_t i = 0; i < model.input_cells(); ++i) {
        for (int dim = 0; dim < model.output_dims(); ++dim) {
            const int nj = model.bins_per_dim()[dim];
            auto block = nlohmann::ordered_json::array();
            for (int k = 0; k < nj; ++k) block.push_back(static_cast<int>(v.bits()[pos++]));
            blocks.push_back(std::move(block));
        }
    }
    j["blocks"] = std::move(blocks);
    return j;
}

NodeAssignment assignment_from_json(const nlohmann::json& j, const HPModel& model) {
    if (!j.contains("blocks")) throw IoError("assignment document requires 'blocks'");
    if (j.contains("model_hash") && j.at("model_hash").get<std::string>() != model.hash_hex()) {
        throw IncompatibilityError("assignment was produced for a different model");
    }
    std::vector<std::uint8_t> bits;
    bits.reserve(static_cast<std::size_t>(model.io_node_count()));
    for (const auto& block : j.at("blocks")) {
        for (const auto& b : block) bits.push_back(b.get<int>() != 0 ? 1 : 0);
    }
    return NodeAssignment::from_bits(model, std::move(bits));
}

} // namespace crepair
