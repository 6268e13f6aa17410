#pragma once

#include <filesystem>

#include "crepair/causal_verify.hpp"
#include "crepair/discretize.hpp"
#include "crepair/neural.hpp"
#include "crepair/search.hpp"

namespace crepair {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes of the command-line pipeline.
inline constexpr int kExitRepaired = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitValidationFailed = 2;
inline constexpr int kExitSearchFailed = 3;

struct ControllerSource {
    std::string scripted;             // one of scripted_controller_names()
    std::filesystem::path weights;    // or a weights JSON file
};

struct InterpolationConfig {
    InterpolationMode mode = InterpolationMode::incremental;
    NodeOrder order = NodeOrder::lex();
};

/// Fully validated run description. Field errors are collected and reported
/// together before any compute starts.
struct PipelineConfig {
    std::string plant_name = "mountain_car";
    int horizon = 110;
    Vec s0;
    std::string property_text;
    bool stop_at_goal = true;
    ControllerSource controller;
    DiscretizationConfig discretization;
    SamplerConfig sampler;
    InterpolationConfig interpolation;
    std::filesystem::path output_dir = "out";
    int threads = 1;

    static PipelineConfig from_json(const nlohmann::json& j);
};

/// Parse and validate a config file. The CAUSAL_REPAIR_SEED environment
/// variable, when set, overrides the sampler seed.
PipelineConfig load_config(const std::filesystem::path& path);

/// Instantiated run pieces shared by the subcommands.
struct PipelineSetup {
    PlantPtr plant;
    std::shared_ptr<const PlantSimulator> simulator;
    BehaviorPtr controller;
};

PipelineSetup build_setup(const PipelineConfig& cfg);

// Subcommands. Each returns a process exit code and writes its artifacts
// into cfg.output_dir.
int cmd_repair(const PipelineConfig& cfg);
int cmd_validate(const PipelineConfig& cfg, const std::filesystem::path& repair_json);
int cmd_export_heatmap(const std::filesystem::path& artifact, const std::string& assignment,
                       const std::filesystem::path& out_csv);
int cmd_discretize(const PipelineConfig& cfg);
int cmd_build_model(const PipelineConfig& cfg);
int cmd_search(const PipelineConfig& cfg);
int cmd_interpolate(const PipelineConfig& cfg);

// Plot-ready CSV of a cell map (one row per input cell).
std::string heatmap_csv(const RepresentativeBehavior& g);

// Trajectory CSV with header t,<state names...>,<control names...>.
std::string trajectory_csv(const Trajectory& traj, const Plant& plant);

} // namespace crepair
