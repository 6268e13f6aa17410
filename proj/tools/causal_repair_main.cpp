// Command-line front end for the causal diagnosis-and-repair pipeline:
// tabulate a controller, discretize it, build the propositional model,
// sample a satisfying counterfactual, interpolate it to a minimal cause,
// and validate or export the artifacts.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "crepair/pipeline.hpp"

namespace {

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const crepair::Error& e) {
        std::fprintf(stderr, "error [%s]: %s\n", e.code().c_str(), e.what());
        return crepair::kExitError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return crepair::kExitError;
    }
}

crepair::PipelineConfig load(const std::string& config_path, const std::string& output_dir,
                             int threads) {
    crepair::PipelineConfig cfg = crepair::load_config(config_path);
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    if (threads > 0) {
        cfg.threads = threads;
        cfg.sampler.threads = threads;
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal diagnosis and repair of controller I/O behaviors"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    std::string repair_path;
    std::string artifact_path;
    std::string assignment = "factual";
    std::string out_csv;
    int threads = 0;

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "pipeline config JSON")->required();
        sub->add_option("--output-dir", output_dir, "override the config's output directory");
        sub->add_option("--threads", threads, "worker cap (results are independent of it)");
    };

    CLI::App* repair = app.add_subcommand("repair", "run the full pipeline");
    add_config(repair);

    CLI::App* validate = app.add_subcommand("validate", "re-simulate an emitted repair");
    add_config(validate);
    validate->add_option("--repair", repair_path, "causeresult.json or assignment JSON")
        ->required();

    CLI::App* exporth = app.add_subcommand("export-heatmap", "cell map to plot-ready CSV");
    exporth->add_option("--artifact", artifact_path, "g.json or causeresult.json")->required();
    exporth->add_option("--assignment", assignment, "factual | sampled | minimal");
    exporth->add_option("--out", out_csv, "output CSV path")->required();

    CLI::App* disc = app.add_subcommand("discretize", "grids + cell map only");
    add_config(disc);
    CLI::App* bm = app.add_subcommand("build-model", "model summary from the cell map");
    add_config(bm);
    CLI::App* search = app.add_subcommand("search", "counterfactual sampling from the cell map");
    add_config(search);
    CLI::App* interp = app.add_subcommand("interpolate", "minimal cause from the sampled "
                                                         "counterfactual");
    add_config(interp);

    CLI11_PARSE(app, argc, argv);

    if (repair->parsed()) {
        return run_guarded([&] { return crepair::cmd_repair(load(config_path, output_dir,
                                                                 threads)); });
    }
    if (validate->parsed()) {
        return run_guarded(
            [&] { return crepair::cmd_validate(load(config_path, output_dir, threads),
                                               repair_path); });
    }
    if (exporth->parsed()) {
        return run_guarded(
            [&] { return crepair::cmd_export_heatmap(artifact_path, assignment, out_csv); });
    }
    if (disc->parsed()) {
        return run_guarded([&] { return crepair::cmd_discretize(load(config_path, output_dir,
                                                                     threads)); });
    }
    if (bm->parsed()) {
        return run_guarded([&] { return crepair::cmd_build_model(load(config_path, output_dir,
                                                                      threads)); });
    }
    if (search->parsed()) {
        return run_guarded([&] { return crepair::cmd_search(load(config_path, output_dir,
                                                                 threads)); });
    }
    if (interp->parsed()) {
        return run_guarded([&] { return crepair::cmd_interpolate(load(config_path, output_dir,
                                                                      threads)); });
    }
    return crepair::kExitError;
}
