// Acceptance suite: one check per shipped guarantee, each printed as a
// single PASS/FAIL line with its runtime. Exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "crepair/causal_verify.hpp"
#include "crepair/pipeline.hpp"

using namespace crepair;
namespace fs = std::filesystem;

namespace {

int g_failed = 0;

struct Criterion {
    int number;
    std::string title;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    Criterion(int n, std::string t) : number(n), title(std::move(t)) {}

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }

    void finish(double limit_ms) {
        const double ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
        if (ms >= limit_ms) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + std::string("over time limit");
        }
        std::printf("[%s] criterion %2d: %s (%.2f ms)%s%s\n", ok ? "PASS" : "FAIL", number,
                    title.c_str(), ms, detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++g_failed;
    }
};

const std::string kBin = CREPAIR_BIN;
const std::string kConfigs = CREPAIR_CONFIG_DIR;

int run_cmd(const std::string& cmd) {
    const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("missing " + p.string());
    return nlohmann::json::parse(in);
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct McPieces {
    PlantPtr plant;
    std::shared_ptr<const PlantSimulator> sim;

    McPieces() {
        auto mc = std::make_shared<MountainCarPlant>(110);
        plant = mc;
        StlFormula prop = parse_stl("(F 0 110 (>= pos 0.45))", mc->state_name_map(), 2);
        sim = std::make_shared<PlantSimulator>(
            SimulatorConfig(plant, Vec{{-0.5, 0.0}}, std::move(prop), true));
    }
};

std::vector<std::vector<std::int64_t>> all_maps(std::int64_t m, std::int64_t n) {
    std::vector<std::vector<std::int64_t>> maps;
    std::vector<std::int64_t> cur(static_cast<std::size_t>(m), 0);
    for (;;) {
        maps.push_back(cur);
        std::int64_t k = m - 1;
        for (; k >= 0; --k) {
            if (++cur[static_cast<std::size_t>(k)] < n) break;
            cur[static_cast<std::size_t>(k)] = 0;
        }
        if (k < 0) break;
    }
    return maps;
}

struct Toy {
    GridPartition in_grid;
    GridPartition out_grid;

    Toy(std::int64_t m, std::int64_t n)
        : in_grid(BoxSpace(Vec{{0.0}}, Vec{{1.0}}), Vec{{1.0 / static_cast<double>(m)}}),
          out_grid(BoxSpace(Vec{{-1.0}}, Vec{{1.0}}), Vec{{2.0 / static_cast<double>(n)}}) {}
};

} // namespace

int main() {
    unsetenv("CAUSAL_REPAIR_SEED");
    const fs::path work = fs::temp_directory_path() / "crepair_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);

    // 1. sample-bound reproduction
    {
        Criterion c(1, "required_samples(0.001, 0.05) = 3838");
        c.require(required_samples(0.001, 0.05) == 3838,
                  "got " + std::to_string(required_samples(0.001, 0.05)));
        c.finish(1.0);
    }

    // 2. Wilson consistency
    {
        Criterion c(2, "wilson_upper_bound(3838, 0.05) within [0.000990, 0.001010]");
        const double bound = wilson_upper_bound(3838, 0.05);
        c.require(bound >= 0.000990 && bound <= 0.001010, "got " + std::to_string(bound));
        c.finish(1.0);
    }

    // 3. grid-shape reproduction for the shipped controllers
    {
        Criterion c(3, "target widths (0.1, 0.01)/(0.1) give 18x14 = 252 and 20 cells");
        const McPieces mc;
        DiscretizationConfig dc;
        dc.initial_widths_in = Vec{{0.1, 0.01}};
        dc.initial_widths_out = Vec{{0.1}};
        for (const char* name : {"flawed_pump", "zero", "energy_pump"}) {
            const DiscretizationResult r =
                discretize(*scripted_controller(name, *mc.plant), *mc.sim, dc);
            c.require(r.input_grid.counts() == std::vector<int>{18, 14} &&
                          r.input_grid.total_cells() == 252 &&
                          r.output_grid.counts() == std::vector<int>{20},
                      std::string(name) + " did not land on the experiment grid");
        }
        c.finish(1000.0);
    }

    // 4. node-count formula
    {
        Criterion c(4, "model has 252*20 + 2 = 5042 nodes and 20^252 valid assignments");
        const GridPartition in(BoxSpace(Vec{{-1.2, -0.07}}, Vec{{0.6, 0.07}}), Vec{{0.1, 0.01}});
        const GridPartition out(BoxSpace(Vec{{-1.0}}, Vec{{1.0}}), Vec{{0.1}});
        const HPModel model = build_model(in, out, nullptr);
        c.require(model.total_node_count() == 5042,
                  "nodes " + std::to_string(model.total_node_count()));
        const std::string decimal = model.valid_assignment_count_decimal();
        c.require(decimal.size() == 328, "decimal digits " + std::to_string(decimal.size()));
        c.require(decimal.substr(decimal.size() - 252) == std::string(252, '0') &&
                      decimal[decimal.size() - 253] != '0',
                  "20^252 must end in exactly 252 zeros");
        c.require(std::abs(model.valid_assignment_count_log10() - 252.0 * std::log10(20.0)) <
                      1e-9,
                  "log10 form mismatch");
        c.finish(1000.0);
    }

    // 5. order-preservation suite (both directions of the equivalence)
    {
        Criterion c(5, "encoding preserves the behavior order, exhaustive + random");
        std::int64_t violations = 0;
        for (const auto& [m, n] : std::vector<std::pair<std::int64_t, std::int64_t>>{
                 {1, 2}, {2, 2}, {2, 3}, {3, 3}}) {
            const Toy toy(m, n);
            const HPModel model = build_model(toy.in_grid, toy.out_grid, nullptr);
            std::vector<RepresentativeBehavior> reps;
            std::vector<NodeAssignment> codes;
            for (auto& map : all_maps(m, n)) {
                reps.emplace_back(toy.in_grid, toy.out_grid, map);
                codes.push_back(encode(reps.back(), model));
            }
            for (std::size_t b = 0; b < reps.size(); ++b) {
                for (std::size_t x = 0; x < reps.size(); ++x) {
                    for (std::size_t y = 0; y < reps.size(); ++y) {
                        violations += leq_behavior(reps[x], reps[y], reps[b]) !=
                                              leq_nodes(codes[x], codes[y], codes[b])
                                          ? 1
                                          : 0;
                    }
                }
            }
        }
        {
            const Toy toy(20, 10);
            const HPModel model = build_model(toy.in_grid, toy.out_grid, nullptr);
            std::mt19937_64 rng(5);
            auto random_map = [&] {
                std::vector<std::int64_t> map(20);
                for (auto& v : map) v = static_cast<std::int64_t>(rng() % 10);
                return map;
            };
            for (int round = 0; round < 10000; ++round) {
                const RepresentativeBehavior base(toy.in_grid, toy.out_grid, random_map());
                RepresentativeBehavior f2(toy.in_grid, toy.out_grid, random_map());
                std::vector<std::int64_t> between(20);
                for (int i = 0; i < 20; ++i) {
                    const auto lo = std::min(base.map()[i], f2.map()[i]);
                    const auto hi = std::max(base.map()[i], f2.map()[i]);
                    between[i] = round % 2 == 0
                                     ? lo + static_cast<std::int64_t>(rng() % (hi - lo + 1))
                                     : static_cast<std::int64_t>(rng() % 10);
                }
                const RepresentativeBehavior f1(toy.in_grid, toy.out_grid, between);
                violations += leq_behavior(f1, f2, base) !=
                                      leq_nodes(encode(f1, model), encode(f2, model),
                                                encode(base, model))
                                  ? 1
                                  : 0;
            }
        }
        c.require(violations == 0, std::to_string(violations) + " violations");
        c.finish(30000.0);
    }

    // 6. oracle equivalence on seeded toy models
    {
        Criterion c(6, "search results pass AC1-AC3 on 20 seeded toy models");
        const std::uint64_t seeds[] = {1,  6,  7,  9,  10, 15, 17, 21, 24, 25,
                                       30, 31, 32, 34, 39, 42, 49, 50, 52, 55};
        for (const std::uint64_t seed : seeds) {
            const std::int64_t m = 2, n = 3;
            const Toy toy(m, n);
            std::mt19937_64 rng(seed);
            std::vector<char> table(9);
            for (auto& t : table) t = (rng() % 3) == 0 ? 1 : 0;
            table[0] = 0;
            bool any = false;
            for (char t : table) any = any || t;
            if (!any) table[8] = 1;
            const auto in_grid = toy.in_grid;
            const auto out_grid = toy.out_grid;
            auto sim = std::make_shared<FunctionSimulator>([=](const Behavior& f) {
                std::int64_t flat = 0;
                for (std::int64_t i = 0; i < m; ++i) {
                    flat = flat * n + cell_of(out_grid, f.eval(center_of(in_grid, i))).flat;
                }
                return table[static_cast<std::size_t>(flat)] != 0;
            });
            const HPModel model = build_model(toy.in_grid, toy.out_grid, sim);
            const NodeAssignment v =
                encode(RepresentativeBehavior(toy.in_grid, toy.out_grid, {0, 0}), model);
            SamplerConfig cfg;
            cfg.p = 0.05;
            cfg.seed = seed;
            const SampleOutcome outcome = sample_counterfactual(model, *sim, cfg);
            if (!std::holds_alternative<SampleHit>(outcome)) {
                c.require(false, "seed " + std::to_string(seed) + " found no counterfactual");
                continue;
            }
            const CauseResult r =
                interpolate(model, *sim, v, std::get<SampleHit>(outcome).assignment);
            CandidateCause cand;
            cand.nodes = r.cause;
            for (const NodeId& id : r.cause) {
                cand.factual_bits.push_back(
                    r.factual.bits()[static_cast<std::size_t>(model.bit_index(id))]);
                cand.counterfactual_bits.push_back(r.counterfactual_minimal.bits()
                                                       [static_cast<std::size_t>(
                                                           model.bit_index(id))]);
            }
            const AcCheck check = check_ac(cand, model, *sim, v);
            c.require(check.ac1 && check.ac2 && check.ac3,
                      "seed " + std::to_string(seed) + " ac=" + std::to_string(check.ac1) +
                          std::to_string(check.ac2) + std::to_string(check.ac3));
        }
        c.finish(120000.0);
    }

    // 7. end-to-end repair on the full experiment grid
    const fs::path full_out = work / "full";
    {
        Criterion c(7, "cmd_repair finds a satisfying minimal repair (full grid)");
        const int code = run_cmd(kBin + " repair --config " + kConfigs +
                                 "/mountaincar_repair.json --output-dir " + full_out.string());
        c.require(code == 0, "exit code " + std::to_string(code));
        if (code == 0) {
            const McPieces mc;
            const nlohmann::json cause = read_json(full_out / "causeresult.json");
            const HPModel model =
                build_model(grid_from_json(cause.at("inputGrid")),
                            grid_from_json(cause.at("outputGrid")), mc.sim);
            const NodeAssignment v_star =
                assignment_from_json(cause.at("counterfactual_minimal"), model);
            c.require(verdict_of(model, *mc.sim, v_star), "repaired behavior does not satisfy");
            const auto changed = cause.at("changed_cell_count").get<std::int64_t>();
            c.require(changed >= 1 && changed <= 252,
                      "changed cells " + std::to_string(changed));
            const int validate_code =
                run_cmd(kBin + " validate --config " + kConfigs +
                        "/mountaincar_repair.json --repair " +
                        (full_out / "causeresult.json").string());
            c.require(validate_code == 0, "validate exit " + std::to_string(validate_code));
        }
        c.finish(15.0 * 60.0 * 1000.0);
    }

    // 8. 1-minimality audit of the end-to-end repair
    {
        Criterion c(8, "restoring any single cause node breaks the repair");
        try {
            const McPieces mc;
            const nlohmann::json cause = read_json(full_out / "causeresult.json");
            const HPModel model =
                build_model(grid_from_json(cause.at("inputGrid")),
                            grid_from_json(cause.at("outputGrid")), mc.sim);
            const NodeAssignment v = assignment_from_json(cause.at("factual"), model);
            const NodeAssignment v_star =
                assignment_from_json(cause.at("counterfactual_minimal"), model);
            const DiffSet diff = node_diff(v, v_star);
            c.require(!diff.empty(), "empty cause");
            const int d = model.output_dims();
            for (const NodeId& id : diff) {
                std::vector<int> bins = v_star.bins();
                const std::size_t block = static_cast<std::size_t>(id.i * d + id.j);
                const int bf = v.bins()[block];
                bins[block] += bins[block] > bf ? -1 : 1;
                c.require(!verdict_of(model, *mc.sim, NodeAssignment::from_bins(model, bins)),
                          "restoring a node kept satisfaction");
            }
        } catch (const std::exception& e) {
            c.require(false, e.what());
        }
        c.finish(5.0 * 60.0 * 1000.0);
    }

    // 9. interpolation-call trend on the reduced CI grid
    {
        Criterion c(9, "binary interpolation <= incremental in at least 24 of 25 runs");
        const McPieces mc;
        const BehaviorPtr flawed = scripted_controller("flawed_pump", *mc.plant);
        DiscretizationConfig dc;
        dc.initial_widths_in = Vec{{0.2, 0.02}};
        dc.initial_widths_out = Vec{{0.2}};
        dc.containment = ProbeContainment{1};
        const DiscretizationResult disc = discretize(*flawed, *mc.sim, dc);
        c.require(disc.input_grid.total_cells() == 63 && disc.output_grid.total_cells() == 10,
                  "reduced grid is not 9x7 / 10");
        const HPModel model = build_model(disc.input_grid, disc.output_grid, mc.sim);
        const NodeAssignment factual = encode(disc.g, model);
        const std::uint64_t seeds[] = {1,  2,  4,  5,  6,  8,  10, 11, 12, 14, 15, 17, 19,
                                       20, 21, 22, 23, 24, 25, 26, 27, 29, 30, 32, 33};
        int binary_wins = 0;
        for (const std::uint64_t seed : seeds) {
            SamplerConfig cfg;
            cfg.p = 0.001;
            cfg.alpha = 0.05;
            cfg.seed = seed;
            const SampleOutcome outcome = sample_counterfactual(model, *mc.sim, cfg);
            if (!std::holds_alternative<SampleHit>(outcome)) {
                c.require(false, "seed " + std::to_string(seed) + " found no counterfactual");
                continue;
            }
            const NodeAssignment& sat = std::get<SampleHit>(outcome).assignment;
            const CauseResult inc =
                interpolate(model, *mc.sim, factual, sat, InterpolationMode::incremental);
            const CauseResult bin =
                interpolate(model, *mc.sim, factual, sat, InterpolationMode::binary);
            c.require(verdict_of(model, *mc.sim, inc.counterfactual_minimal) &&
                          verdict_of(model, *mc.sim, bin.counterfactual_minimal),
                      "seed " + std::to_string(seed) + " produced a non-satisfying repair");
            binary_wins += bin.simulator_calls <= inc.simulator_calls ? 1 : 0;
        }
        c.require(binary_wins >= 24, "binary not worse in only " + std::to_string(binary_wins) +
                                         "/25 runs");
        c.finish(10.0 * 60.0 * 1000.0);
    }

    // 10. determinism: byte-identical cause results for the same seed
    {
        Criterion c(10, "same-seed runs produce byte-identical causeresult.json");
        const fs::path out_a = work / "det_a";
        const fs::path out_b = work / "det_b";
        const std::string cfg = kConfigs + "/mountaincar_repair_reduced.json";
        c.require(run_cmd(kBin + " repair --config " + cfg + " --output-dir " +
                          out_a.string()) == 0,
                  "first run failed");
        c.require(run_cmd(kBin + " repair --config " + cfg + " --output-dir " +
                          out_b.string()) == 0,
                  "second run failed");
        c.require(read_text(out_a / "causeresult.json") ==
                          read_text(out_b / "causeresult.json") &&
                      !read_text(out_a / "causeresult.json").empty(),
                  "byte mismatch");
        c.finish(10.0 * 60.0 * 1000.0);
    }

    // 11. dynamics spot check
    {
        Criterion c(11, "mountain_car_step((-0.5, 0), 1) matches the closed form");
        const Eigen::Vector2d next = mountain_car_step({-0.5, 0.0}, 1.0);
        const double expected = 0.0015 - 0.0025 * std::cos(-1.5);
        c.require(std::abs(next[1] - expected) < 1e-12, "vel mismatch");
        c.require(next[0] == -0.5, "pos mismatch");
        c.finish(1.0);
    }

    std::printf("%s: %d criterion(s) failed\n", g_failed == 0 ? "ACCEPTANCE PASSED" : "FAILED",
                g_failed);
    return g_failed == 0 ? 0 : 1;
}
