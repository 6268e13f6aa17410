#include "crepair/search.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <thread>

namespace crepair {

nlohmann::ordered_json FailureStatement::to_json() const {
    nlohmann::ordered_json j;
    j["p"] = p;
    j["alpha"] = alpha;
    j["N"] = required_n;
    j["samples_taken"] = samples_taken;
    j["seed"] = seed;
    j["claim_holds"] = claim_holds();
    j["statement"] = statement;
    return j;
}

namespace {

std::string failure_text(double p, double alpha, std::int64_t required_n,
                         std::int64_t samples_taken) {
    char buf[256];
    if (samples_taken >= required_n) {
        std::snprintf(buf, sizeof(buf),
                      "After %lld consecutive unsatisfactory samples, with confidence %.10g the "
                      "probability that a uniformly sampled assignment satisfies the property is "
                      "at most %.10g.",
                      static_cast<long long>(samples_taken), 1.0 - alpha, p);
    } else {
        std::snprintf(buf, sizeof(buf),
                      "No satisfying assignment in %lld samples; %lld are required before the "
                      "p <= %.10g statement can be made at confidence %.10g.",
                      static_cast<long long>(samples_taken), static_cast<long long>(required_n),
                      p, 1.0 - alpha);
    }
    return buf;
}

/// Uniform integer in [0, n) by rejection; avoids modulo bias and gives the
/// same stream on every platform.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t bucket = std::numeric_limits<std::uint64_t>::max() / n;
    const std::uint64_t cap = bucket * n;
    for (;;) {
        const std::uint64_t r = rng();
        if (r < cap) return r % n;
    }
}

std::vector<int> draw_bins(std::mt19937_64& rng, const HPModel& model) {
    const std::int64_t m = model.input_cells();
    const int d = model.output_dims();
    const auto n = static_cast<std::uint64_t>(model.output_cells());
    std::vector<int> bins(static_cast<std::size_t>(m * d));
    for (std::int64_t i = 0; i < m; ++i) {
        const auto cell = static_cast<std::int64_t>(uniform_below(rng, n));
        const std::vector<int> multi = model.output_grid().multi_of(cell);
        for (int j = 0; j < d; ++j) bins[static_cast<std::size_t>(i * d + j)] = multi[j];
    }
    return bins;
}

} // namespace

SampleOutcome sample_counterfactual(const HPModel& model, const Simulator& sim,
                                    const SamplerConfig& cfg) {
    if (!(cfg.p > 0.0 && cfg.p < 1.0) || !(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
        throw ConfigError("sampler requires p and alpha in (0, 1)");
    }
    const std::int64_t required_n = cfg.derived_n();
    const std::int64_t budget = cfg.max_samples.value_or(required_n);
    if (budget < 1) throw ConfigError("sampler budget must be >= 1");

    std::mt19937_64 rng(cfg.seed);
    const int workers = std::max(1, cfg.threads);
    const std::int64_t batch =
        workers == 1 ? 1 : std::min<std::int64_t>(budget, static_cast<std::int64_t>(workers) * 8);

    std::int64_t taken = 0;
    while (taken < budget) {
        const std::int64_t count = std::min<std::int64_t>(batch, budget - taken);
        std::vector<NodeAssignment> samples;
        samples.reserve(static_cast<std::size_t>(count));
        for (std::int64_t s = 0; s < count; ++s) {
            samples.push_back(NodeAssignment::from_bins(model, draw_bins(rng, model)));
        }
        std::vector<char> verdicts(static_cast<std::size_t>(count), 0);
        if (workers == 1 || count == 1) {
            for (std::int64_t s = 0; s < count; ++s) {
                verdicts[static_cast<std::size_t>(s)] =
                    verdict_of(model, sim, samples[static_cast<std::size_t>(s)]) ? 1 : 0;
                // Sequential mode can stop at the first hit without evaluating
                // the rest of the batch.
                if (verdicts[static_cast<std::size_t>(s)]) {
                    return SampleHit{samples[static_cast<std::size_t>(s)], taken + s + 1};
                }
            }
        } else {
            std::vector<std::thread> pool;
            std::int64_t chunk = (count + workers - 1) / workers;
            for (int w = 0; w < workers; ++w) {
                const std::int64_t lo = w * chunk;
                const std::int64_t hi = std::min<std::int64_t>(count, lo + chunk);
                if (lo >= hi) break;
                pool.emplace_back([&, lo, hi] {
                    for (std::int64_t s = lo; s < hi; ++s) {
                        verdicts[static_cast<std::size_t>(s)] =
                            verdict_of(model, sim, samples[static_cast<std::size_t>(s)]) ? 1 : 0;
                    }
                });
            }
            for (auto& t : pool) t.join();
            for (std::int64_t s = 0; s < count; ++s) {
                if (verdicts[static_cast<std::size_t>(s)]) {
                    return SampleHit{samples[static_cast<std::size_t>(s)], taken + s + 1};
                }
            }
        }
        taken += count;
    }

    FailureStatement fs;
    fs.p = cfg.p;
    fs.alpha = cfg.alpha;
    fs.required_n = required_n;
    fs.samples_taken = taken;
    fs.seed = cfg.seed;
    fs.statement = failure_text(cfg.p, cfg.alpha, required_n, taken);
    return fs;
}

NodeOrder NodeOrder::dims_first(std::vector<int> order) {
    NodeOrder o;
    o.kind = Kind::dim_major;
    o.dim_order = std::move(order);
    return o;
}

NodeOrder NodeOrder::shuffle(std::uint64_t seed) {
    NodeOrder o;
    o.kind = Kind::shuffled;
    o.seed = seed;
    return o;
}

namespace {

/// Verdict cache keyed by the per-block bin vector; counts only true
/// simulator invocations.
class VerdictMemo {
public:
    VerdictMemo(const HPModel& model, const Simulator& sim) : model_(model), sim_(sim) {}

    bool verdict(const std::vector<int>& bins) {
        auto it = memo_.find(bins);
        if (it != memo_.end()) return it->second;
        const bool r =
            verdict_of(model_, sim_, NodeAssignment::from_bins(model_, bins));
        memo_.emplace(bins, r);
        ++calls_;
        return r;
    }

    std::int64_t calls() const { return calls_; }

private:
    const HPModel& model_;
    const Simulator& sim_;
    std::map<std::vector<int>, bool> memo_;
    std::int64_t calls_ = 0;
};

std::vector<NodeId> ordered_diff(const NodeAssignment& factual, const NodeAssignment& from,
                                 const NodeOrder& order, int output_dims) {
    DiffSet diff = node_diff(factual, from);
    std::vector<NodeId> list(diff.begin(), diff.end());
    switch (order.kind) {
        case NodeOrder::Kind::lexicographic:
            break;
        case NodeOrder::Kind::dim_major: {
            if (static_cast<int>(order.dim_order.size()) != output_dims) {
                throw ContractError("dim_major order must permute all output dimensions");
            }
            std::vector<int> rank(static_cast<std::size_t>(output_dims), -1);
            for (std::size_t r = 0; r < order.dim_order.size(); ++r) {
                const int j = order.dim_order[r];
                if (j < 0 || j >= output_dims || rank[static_cast<std::size_t>(j)] != -1) {
                    throw ContractError("dim_major order is not a permutation");
                }
                rank[static_cast<std::size_t>(j)] = static_cast<int>(r);
            }
            std::stable_sort(list.begin(), list.end(), [&](const NodeId& a, const NodeId& b) {
                return std::tuple(a.i, rank[static_cast<std::size_t>(a.j)], a.k) <
                       std::tuple(b.i, rank[static_cast<std::size_t>(b.j)], b.k);
            });
            break;
        }
        case NodeOrder::Kind::shuffled: {
            // Fisher-Yates with the project RNG; stable across platforms.
            std::mt19937_64 rng(order.seed);
            for (std::size_t idx = list.size(); idx > 1; --idx) {
                const auto pick = static_cast<std::size_t>(uniform_below(rng, idx));
                std::swap(list[idx - 1], list[pick]);
            }
            break;
        }
    }
    return list;
}

/// One sweep of the differing nodes in the given order; each visit tries to
/// move the node's block one bin toward the factual value. Returns whether
/// any step was accepted.
bool sweep(const std::vector<NodeId>& order_list, const NodeAssignment& factual, int d,
           std::vector<int>& bins, VerdictMemo& memo, std::int64_t& step_ops) {
    bool changed = false;
    for (const NodeId& id : order_list) {
        const std::size_t block = static_cast<std::size_t>(id.i * d + id.j);
        const int bf = factual.bins()[block];
        const int bc = bins[block];
        if (bc == bf) continue;
        const int lo = std::min(bf, bc);
        const int hi = std::max(bf, bc);
        if (!(id.k > lo && id.k <= hi)) continue; // node already agrees
        const int stepped = bc > bf ? bc - 1 : bc + 1;
        ++step_ops;
        std::vector<int> candidate = bins;
        candidate[block] = stepped;
        if (memo.verdict(candidate)) {
            bins = std::move(candidate);
            changed = true;
        }
    }
    return changed;
}

} // namespace

CauseResult interpolate(const HPModel& model, const Simulator& sim, const NodeAssignment& factual,
                        const NodeAssignment& satisfactory, InterpolationMode mode,
                        const NodeOrder& order) {
    if (!factual.same_shape(satisfactory) || factual.size() != model.io_node_count()) {
        throw EncodingError("interpolate: assignments do not fit the model");
    }
    VerdictMemo memo(model, sim);
    std::int64_t step_ops = 0;

    if (memo.verdict(factual.bins())) {
        throw ContractError("interpolate: the factual assignment already satisfies the property");
    }
    if (!memo.verdict(satisfactory.bins())) {
        throw ContractError("interpolate: the counterfactual assignment does not satisfy "
                            "the property");
    }

    const int d = model.output_dims();
    const std::vector<NodeId> order_list = ordered_diff(factual, satisfactory, order, d);
    std::vector<int> bins = satisfactory.bins();

    if (mode == InterpolationMode::binary) {
        // Largest ordered prefix of restoring steps that keeps satisfaction;
        // assign(0) = satisfactory (verdict 1), assign(|L|) = factual
        // (verdict 0), both already known.
        auto assign_prefix = [&](std::size_t q) {
            std::vector<int> b = satisfactory.bins();
            for (std::size_t idx = 0; idx < q; ++idx) {
                const NodeId& id = order_list[idx];
                const std::size_t block = static_cast<std::size_t>(id.i * d + id.j);
                const int bf = factual.bins()[block];
                if (b[block] > bf) {
                    --b[block];
                } else if (b[block] < bf) {
                    ++b[block];
                }
            }
            return b;
        };
        std::size_t lo = 0;
        std::size_t hi = order_list.size();
        while (hi - lo > 1) {
            const std::size_t mid = lo + (hi - lo) / 2;
            ++step_ops;
            if (memo.verdict(assign_prefix(mid))) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        bins = assign_prefix(lo);
    }

    while (sweep(order_list, factual, d, bins, memo, step_ops)) {
    }

    NodeAssignment minimal = NodeAssignment::from_bins(model, bins);
    CauseResult result{factual,
                       satisfactory,
                       minimal,
                       node_diff(factual, minimal),
                       decode(minimal, model),
                       memo.calls(),
                       step_ops};
    return result;
}

CauseReport extract_cause(const NodeAssignment& v, const NodeAssignment& v_star,
                          const HPModel& model) {
    if (v.size() != model.io_node_count() || !v.same_shape(v_star)) {
        throw EncodingError("extract_cause: assignments do not fit the model");
    }
    CauseReport report;
    report.cause = node_diff(v, v_star);
    const int d = model.output_dims();
    std::vector<int> multi_f(static_cast<std::size_t>(d));
    std::vector<int> multi_r(static_cast<std::size_t>(d));
    for (std::int64_t i = 0; i < model.input_cells(); ++i) {
        bool differs = false;
        for (int j = 0; j < d; ++j) {
            multi_f[static_cast<std::size_t>(j)] = v.bin(i, j);
            multi_r[static_cast<std::size_t>(j)] = v_star.bin(i, j);
            differs = differs || multi_f[static_cast<std::size_t>(j)] !=
                                     multi_r[static_cast<std::size_t>(j)];
        }
        if (!differs) continue;
        ChangedCell cell;
        cell.input.flat = i;
        cell.input.multi = model.input_grid().multi_of(i);
        cell.factual_output.multi = multi_f;
        cell.factual_output.flat = model.output_grid().flat_of(multi_f);
        cell.repaired_output.multi = multi_r;
        cell.repaired_output.flat = model.output_grid().flat_of(multi_r);
        report.changed_cells.push_back(std::move(cell));
    }
    return report;
}

std::string describe_cause(const CauseReport& report, const HPModel& model) {
    std::ostringstream os;
    os << "The control signals on " << report.changed_cells.size() << " (out of "
       << model.input_cells() << ") input cells given by the factual controller are an actual "
       << "cause of the violation; remapping exactly these cells to the repaired output cells "
       << "makes the run satisfy the property.";
    return os.str();
}

nlohmann::ordered_json to_json(const CauseResult& result, const HPModel& model) {
    nlohmann::ordered_json j;
    j["model_hash"] = model.hash_hex();
    j["inputGrid"] = to_json(model.input_grid());
    j["outputGrid"] = to_json(model.output_grid());
    j["factual"] = to_json(result.factual, model);
    j["counterfactual_raw"] = to_json(result.counterfactual_raw, model);
    j["counterfactual_minimal"] = to_json(result.counterfactual_minimal, model);
    auto cause = nlohmann::ordered_json::array();
    for (const NodeId& id : result.cause) {
        cause.push_back(nlohmann::ordered_json::array({id.i, id.j, id.k}));
    }
    j["cause"] = std::move(cause);
    const CauseReport report = extract_cause(result.factual, result.counterfactual_minimal, model);
    auto cells = nlohmann::ordered_json::array();
    for (const ChangedCell& c : report.changed_cells) {
        nlohmann::ordered_json cj;
        cj["input_cell"] = c.input.flat;
        cj["input_multi"] = c.input.multi;
        cj["factual_output_cell"] = c.factual_output.flat;
        cj["repaired_output_cell"] = c.repaired_output.flat;
        cells.push_back(std::move(cj));
    }
    j["changed_cells"] = std::move(cells);
    j["changed_cell_count"] = report.changed_cells.size();
    j["description"] = describe_cause(report, model);
    j["simulator_calls"] = result.simulator_calls;
    j["step_ops"] = result.step_ops;
    return j;
}

} // namespace crepair
