#include "crepair/pipeline.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace crepair {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
}

void write_json_file(const fs::path& path, const ordered_json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

/// Collects field-level validation problems so a bad config is reported in
/// one pass.
struct FieldErrors {
    std::vector<std::string> messages;

    void add(const std::string& field, const std::string& what) {
        messages.push_back(field + ": " + what);
    }

    void raise_if_any() const {
        if (messages.empty()) return;
        std::string all = "invalid config";
        for (const auto& m : messages) all += "\n  - " + m;
        throw ConfigError(all);
    }
};

Vec vec_field(const json& j, const std::string& field, FieldErrors& errs) {
    if (!j.is_array() || j.empty()) {
        errs.add(field, "expected a nonempty number array");
        return Vec();
    }
    Vec v(j.size());
    for (std::size_t k = 0; k < j.size(); ++k) {
        if (!j[k].is_number()) {
            errs.add(field, "expected a number at index " + std::to_string(k));
            return Vec();
        }
        v[static_cast<int>(k)] = j[k].get<double>();
    }
    return v;
}

std::chrono::steady_clock::time_point now() { return std::chrono::steady_clock::now(); }

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(now() - start).count();
}

struct Manifest {
    ordered_json j;

    explicit Manifest(const std::string& command) {
        j["schema"] = "crepair/manifest/1";
        j["tool_version"] = kToolVersion;
        j["command"] = command;
        j["timings_ms"] = ordered_json::object();
        j["counts"] = ordered_json::object();
    }

    void error(const std::string& code, const std::string& message) {
        j["error"] = {{"code", code}, {"message", message}};
    }

    void finish(const fs::path& dir, int exit_code) {
        j["exit_code"] = exit_code;
        write_json_file(dir / "manifest.json", j);
    }
};

} // namespace

PipelineConfig PipelineConfig::from_json(const json& j) {
    PipelineConfig cfg;
    FieldErrors errs;

    if (j.contains("plant")) {
        const auto& p = j.at("plant");
        cfg.plant_name = p.value("name", std::string("mountain_car"));
        cfg.horizon = p.value("horizon", 110);
        if (cfg.plant_name != "mountain_car") errs.add("plant.name", "only mountain_car ships");
        if (cfg.horizon < 1) errs.add("plant.horizon", "must be >= 1");
    }
    if (j.contains("s0")) {
        cfg.s0 = vec_field(j.at("s0"), "s0", errs);
    } else {
        errs.add("s0", "required");
    }
    if (j.contains("property") && j.at("property").is_string()) {
        cfg.property_text = j.at("property").get<std::string>();
    } else {
        errs.add("property", "required string, e.g. \"(F 0 110 (>= pos 0.45))\"");
    }
    cfg.stop_at_goal = j.value("stop_at_goal", true);

    if (j.contains("controller")) {
        const auto& c = j.at("controller");
        if (c.contains("scripted") && c.contains("weights")) {
            errs.add("controller", "choose either 'scripted' or 'weights'");
        } else if (c.contains("scripted")) {
            cfg.controller.scripted = c.at("scripted").get<std::string>();
        } else if (c.contains("weights")) {
            cfg.controller.weights = c.at("weights").get<std::string>();
        } else {
            errs.add("controller", "requires 'scripted' or 'weights'");
        }
    } else {
        errs.add("controller", "required");
    }

    if (j.contains("discretization")) {
        const auto& d = j.at("discretization");
        if (d.contains("initial_widths_in")) {
            cfg.discretization.initial_widths_in =
                vec_field(d.at("initial_widths_in"), "discretization.initial_widths_in", errs);
        } else {
            errs.add("discretization.initial_widths_in", "required");
        }
        if (d.contains("initial_widths_out")) {
            cfg.discretization.initial_widths_out =
                vec_field(d.at("initial_widths_out"), "discretization.initial_widths_out", errs);
        } else {
            errs.add("discretization.initial_widths_out", "required");
        }
        cfg.discretization.max_halvings = d.value("max_halvings", 20);
        if (cfg.discretization.max_halvings < 1) {
            errs.add("discretization.max_halvings", "must be >= 1");
        }
        if (d.contains("containment")) {
            const auto& c = d.at("containment");
            const std::string mode = c.value("mode", std::string("probe"));
            if (mode == "probe") {
                ProbeContainment pc;
                pc.samples_per_cell = c.value("samples_per_cell", 0);
                if (pc.samples_per_cell < 0) {
                    errs.add("discretization.containment.samples_per_cell", "must be >= 0");
                }
                cfg.discretization.containment = pc;
            } else if (mode == "lipschitz") {
                LipschitzContainment lc;
                lc.c = c.value("c", 0.0);
                if (!(lc.c > 0.0)) errs.add("discretization.containment.c", "must be > 0");
                cfg.discretization.containment = lc;
            } else {
                errs.add("discretization.containment.mode", "expected 'probe' or 'lipschitz'");
            }
        }
    } else {
        errs.add("discretization", "required");
    }

    if (j.contains("sampler")) {
        const auto& s = j.at("sampler");
        cfg.sampler.p = s.value("p", 0.001);
        cfg.sampler.alpha = s.value("alpha", 0.05);
        cfg.sampler.seed = s.value("seed", 0ull);
        if (s.contains("max_samples") && !s.at("max_samples").is_null()) {
            cfg.sampler.max_samples = s.at("max_samples").get<std::int64_t>();
            if (*cfg.sampler.max_samples < 1) errs.add("sampler.max_samples", "must be >= 1");
        }
        if (!(cfg.sampler.p > 0.0 && cfg.sampler.p < 1.0)) {
            errs.add("sampler.p", "must be in (0, 1)");
        }
        if (!(cfg.sampler.alpha > 0.0 && cfg.sampler.alpha < 1.0)) {
            errs.add("sampler.alpha", "must be in (0, 1)");
        }
    } else {
        errs.add("sampler", "required");
    }

    if (j.contains("interpolation")) {
        const auto& i = j.at("interpolation");
        const std::string mode = i.value("mode", std::string("incremental"));
        if (mode == "incremental") {
            cfg.interpolation.mode = InterpolationMode::incremental;
        } else if (mode == "binary") {
            cfg.interpolation.mode = InterpolationMode::binary;
        } else {
            errs.add("interpolation.mode", "expected 'incremental' or 'binary'");
        }
        const std::string order = i.value("order", std::string("lex"));
        if (order == "lex") {
            cfg.interpolation.order = NodeOrder::lex();
        } else if (order == "shuffled") {
            cfg.interpolation.order = NodeOrder::shuffle(i.value("order_seed", 0ull));
        } else {
            errs.add("interpolation.order", "expected 'lex' or 'shuffled'");
        }
    }

    cfg.output_dir = j.value("output_dir", std::string("out"));
    cfg.threads = j.value("threads", 1);
    if (cfg.threads < 0) errs.add("threads", "must be >= 0");
    if (cfg.threads == 0) cfg.threads = 1;
    cfg.sampler.threads = cfg.threads;

    errs.raise_if_any();
    return cfg;
}

PipelineConfig load_config(const fs::path& path) {
    PipelineConfig cfg = PipelineConfig::from_json(read_json_file(path));
    if (const char* env_seed = std::getenv("CAUSAL_REPAIR_SEED")) {
        const std::string text = env_seed;
        const bool digits =
            !text.empty() && text.find_first_not_of("0123456789") == std::string::npos;
        try {
            if (!digits) throw std::invalid_argument(text);
            cfg.sampler.seed = std::stoull(text);
        } catch (const std::exception&) {
            throw ConfigError("CAUSAL_REPAIR_SEED is not an unsigned integer");
        }
    }
    return cfg;
}

PipelineSetup build_setup(const PipelineConfig& cfg) {
    PipelineSetup setup;
    auto plant = std::make_shared<MountainCarPlant>(cfg.horizon);
    setup.plant = plant;
    StlFormula property =
        parse_stl(cfg.property_text, plant->state_name_map(), plant->state_dims());
    setup.simulator = std::make_shared<PlantSimulator>(
        SimulatorConfig(setup.plant, cfg.s0, std::move(property), cfg.stop_at_goal));
    if (!cfg.controller.scripted.empty()) {
        setup.controller = scripted_controller(cfg.controller.scripted, *setup.plant);
    } else {
        const json weights = read_json_file(cfg.controller.weights);
        auto nb = NeuralBehavior::from_json(weights, setup.plant->controller_input_space());
        if (!(nb.output_space() == setup.plant->control_bounds())) {
            throw IncompatibilityError(
                "weights output box does not match the plant's control bounds");
        }
        setup.controller = std::make_shared<NeuralBehavior>(std::move(nb));
    }
    return setup;
}

namespace {

ordered_json cellmap_doc(const DiscretizationResult& result, bool factual_verdict) {
    ordered_json j;
    j["schema"] = "crepair/cellmap/1";
    ordered_json body = to_json(result.g);
    for (auto& [key, value] : body.items()) j[key] = value;
    j["halvings"] = {{"input", result.halvings_used.input},
                     {"output", result.halvings_used.output}};
    j["factual_verdict"] = factual_verdict ? 1 : 0;
    return j;
}

DiscretizationResult run_discretize(const PipelineConfig& cfg, const PipelineSetup& setup) {
    return discretize(*setup.controller, *setup.simulator, cfg.discretization);
}

fs::path cellmap_path(const PipelineConfig& cfg) { return cfg.output_dir / "g.json"; }
fs::path raw_path(const PipelineConfig& cfg) {
    return cfg.output_dir / "counterfactual_raw.json";
}
fs::path cause_path(const PipelineConfig& cfg) { return cfg.output_dir / "causeresult.json"; }

RepresentativeBehavior load_cellmap(const fs::path& path) {
    return representative_from_json(read_json_file(path));
}

int probe_samples(const PipelineConfig& cfg) {
    if (const auto* pc = std::get_if<ProbeContainment>(&cfg.discretization.containment)) {
        return pc->samples_per_cell;
    }
    return 1;
}

} // namespace

std::string heatmap_csv(const RepresentativeBehavior& g) {
    std::ostringstream os;
    const int din = g.input_grid().dims();
    const int dout = g.output_grid().dims();
    if (din == 2 && dout == 1) {
        os << "pos_cell,vel_cell,control_center\n";
    } else {
        for (int k = 0; k < din; ++k) os << "cell_" << k << ",";
        for (int k = 0; k < dout; ++k) os << "out_center_" << k << (k + 1 < dout ? "," : "");
        os << "\n";
    }
    char buf[64];
    for (std::int64_t i = 0; i < g.input_grid().total_cells(); ++i) {
        const std::vector<int> multi = g.input_grid().multi_of(i);
        for (int k = 0; k < din; ++k) os << multi[k] << ",";
        const Vec c = center_of(g.output_grid(), g.target_cell(i));
        for (int k = 0; k < dout; ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", c[k]);
            os << buf << (k + 1 < dout ? "," : "");
        }
        os << "\n";
    }
    return os.str();
}

std::string trajectory_csv(const Trajectory& traj, const Plant& plant) {
    std::ostringstream os;
    os << "t";
    for (const auto& n : plant.state_names()) os << ',' << n;
    for (const auto& n : plant.control_names()) os << ',' << n;
    os << "\n";
    char buf[64];
    for (std::size_t t = 0; t < traj.states.size(); ++t) {
        os << t;
        const Vec& s = traj.states[t];
        for (int k = 0; k < s.size(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", s[k]);
            os << ',' << buf;
        }
        if (t < traj.controls.size()) {
            const Vec& c = traj.controls[t];
            for (int k = 0; k < c.size(); ++k) {
                std::snprintf(buf, sizeof(buf), "%.17g", c[k]);
                os << ',' << buf;
            }
        } else {
            for (int k = 0; k < plant.control_bounds().dims(); ++k) os << ',';
        }
        os << "\n";
    }
    return os.str();
}

int cmd_discretize(const PipelineConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    const PipelineSetup setup = build_setup(cfg);
    const bool factual_verdict = setup.simulator->verdict(*setup.controller);
    const DiscretizationResult result = run_discretize(cfg, setup);
    write_json_file(cellmap_path(cfg), cellmap_doc(result, factual_verdict));
    const IoTable table = tabulate(*setup.controller, result.input_grid, probe_samples(cfg));
    write_text_file(cfg.output_dir / "io_table.csv", table.to_csv());
    return kExitRepaired;
}

int cmd_build_model(const PipelineConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    const PipelineSetup setup = build_setup(cfg);
    const RepresentativeBehavior g = load_cellmap(cellmap_path(cfg));
    const HPModel model = build_model(g.input_grid(), g.output_grid(), setup.simulator);
    ordered_json doc;
    doc["schema"] = "crepair/model/1";
    ordered_json body = model.summary_json();
    for (auto& [key, value] : body.items()) doc[key] = value;
    write_json_file(cfg.output_dir / "model.json", doc);
    return kExitRepaired;
}

namespace {

ordered_json assignment_doc(const NodeAssignment& v, const HPModel& model,
                            const char* schema_name) {
    ordered_json doc;
    doc["schema"] = schema_name;
    ordered_json body = to_json(v, model);
    for (auto& [key, value] : body.items()) doc[key] = value;
    return doc;
}

struct SearchArtifacts {
    HPModel model;
    NodeAssignment factual;
    SampleOutcome outcome;
    double sample_ms = 0.0;
};

SearchArtifacts run_search(const PipelineConfig& cfg, const PipelineSetup& setup,
                           const RepresentativeBehavior& g) {
    HPModel model = build_model(g.input_grid(), g.output_grid(), setup.simulator);
    NodeAssignment factual = encode(g, model);
    if (verdict_of(model, *setup.simulator, factual)) {
        throw ContractError("the factual behavior already satisfies the property; "
                            "there is nothing to repair");
    }
    const auto start = now();
    SampleOutcome outcome = sample_counterfactual(model, *setup.simulator, cfg.sampler);
    return SearchArtifacts{std::move(model), std::move(factual), std::move(outcome),
                           ms_since(start)};
}

} // namespace

int cmd_search(const PipelineConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    const PipelineSetup setup = build_setup(cfg);
    const RepresentativeBehavior g = load_cellmap(cellmap_path(cfg));
    SearchArtifacts art = run_search(cfg, setup, g);
    write_json_file(cfg.output_dir / "factual_assignment.json",
                    assignment_doc(art.factual, art.model, "crepair/assignment/1"));
    if (const auto* hit = std::get_if<SampleHit>(&art.outcome)) {
        ordered_json doc = assignment_doc(hit->assignment, art.model, "crepair/assignment/1");
        doc["samples_taken"] = hit->samples_taken;
        write_json_file(raw_path(cfg), doc);
        return kExitRepaired;
    }
    const auto& fs_stmt = std::get<FailureStatement>(art.outcome);
    ordered_json doc;
    doc["schema"] = "crepair/failure/1";
    ordered_json body = fs_stmt.to_json();
    for (auto& [key, value] : body.items()) doc[key] = value;
    write_json_file(cfg.output_dir / "failure.json", doc);
    return kExitSearchFailed;
}

int cmd_interpolate(const PipelineConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    const PipelineSetup setup = build_setup(cfg);
    const RepresentativeBehavior g = load_cellmap(cellmap_path(cfg));
    const HPModel model = build_model(g.input_grid(), g.output_grid(), setup.simulator);
    const NodeAssignment factual = encode(g, model);
    const NodeAssignment sampled = assignment_from_json(read_json_file(raw_path(cfg)), model);
    const CauseResult result = interpolate(model, *setup.simulator, factual, sampled,
                                           cfg.interpolation.mode, cfg.interpolation.order);
    ordered_json doc;
    doc["schema"] = "crepair/causeresult/1";
    ordered_json body = to_json(result, model);
    for (auto& [key, value] : body.items()) doc[key] = value;
    write_json_file(cause_path(cfg), doc);
    return kExitRepaired;
}

int cmd_repair(const PipelineConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    Manifest manifest("repair");
    manifest.j["seed"] = cfg.sampler.seed;
    const auto t_total = now();
    try {
        const PipelineSetup setup = build_setup(cfg);
        const bool factual_verdict = setup.simulator->verdict(*setup.controller);

        const auto t_disc = now();
        const DiscretizationResult disc = run_discretize(cfg, setup);
        manifest.j["timings_ms"]["discretize"] = ms_since(t_disc);
        write_json_file(cellmap_path(cfg), cellmap_doc(disc, factual_verdict));
        const IoTable table = tabulate(*setup.controller, disc.input_grid, probe_samples(cfg));
        write_text_file(cfg.output_dir / "io_table.csv", table.to_csv());

        const auto t_model = now();
        HPModel model = build_model(disc.input_grid, disc.output_grid, setup.simulator);
        manifest.j["timings_ms"]["build_model"] = ms_since(t_model);
        {
            ordered_json doc;
            doc["schema"] = "crepair/model/1";
            ordered_json body = model.summary_json();
            for (auto& [key, value] : body.items()) doc[key] = value;
            write_json_file(cfg.output_dir / "model.json", doc);
        }

        NodeAssignment factual = encode(disc.g, model);
        if (verdict_of(model, *setup.simulator, factual)) {
            throw ContractError("the factual behavior already satisfies the property; "
                                "there is nothing to repair");
        }
        write_json_file(cfg.output_dir / "factual_assignment.json",
                        assignment_doc(factual, model, "crepair/assignment/1"));
        write_text_file(cfg.output_dir / "heatmap_factual.csv", heatmap_csv(disc.g));
        write_text_file(cfg.output_dir / "trajectory_factual.csv",
                        trajectory_csv(setup.simulator->rollout(*setup.controller),
                                       *setup.plant));

        const auto t_sample = now();
        SampleOutcome outcome = sample_counterfactual(model, *setup.simulator, cfg.sampler);
        manifest.j["timings_ms"]["sample"] = ms_since(t_sample);

        if (const auto* failure = std::get_if<FailureStatement>(&outcome)) {
            ordered_json doc;
            doc["schema"] = "crepair/failure/1";
            ordered_json body = failure->to_json();
            for (auto& [key, value] : body.items()) doc[key] = value;
            write_json_file(cfg.output_dir / "failure.json", doc);
            manifest.j["counts"]["sampler_samples"] = failure->samples_taken;
            manifest.j["timings_ms"]["total"] = ms_since(t_total);
            manifest.finish(cfg.output_dir, kExitSearchFailed);
            return kExitSearchFailed;
        }

        const auto& hit = std::get<SampleHit>(outcome);
        manifest.j["counts"]["sampler_samples"] = hit.samples_taken;
        {
            ordered_json doc = assignment_doc(hit.assignment, model, "crepair/assignment/1");
            doc["samples_taken"] = hit.samples_taken;
            write_json_file(raw_path(cfg), doc);
        }
        write_text_file(cfg.output_dir / "heatmap_counterfactual.csv",
                        heatmap_csv(decode(hit.assignment, model)));

        const auto t_interp = now();
        const CauseResult result = interpolate(model, *setup.simulator, factual, hit.assignment,
                                               cfg.interpolation.mode, cfg.interpolation.order);
        manifest.j["timings_ms"]["interpolate"] = ms_since(t_interp);
        manifest.j["counts"]["interpolate_sim_calls"] = result.simulator_calls;
        manifest.j["counts"]["interpolate_step_ops"] = result.step_ops;

        {
            ordered_json doc;
            doc["schema"] = "crepair/causeresult/1";
            ordered_json body = to_json(result, model);
            for (auto& [key, value] : body.items()) doc[key] = value;
            write_json_file(cause_path(cfg), doc);
        }
        write_text_file(cfg.output_dir / "heatmap_repaired.csv", heatmap_csv(result.repaired));
        write_text_file(cfg.output_dir / "trajectory_repaired.csv",
                        trajectory_csv(setup.simulator->rollout(*recon(result.repaired)),
                                       *setup.plant));

        manifest.j["timings_ms"]["total"] = ms_since(t_total);
        manifest.finish(cfg.output_dir, kExitRepaired);
        return kExitRepaired;
    } catch (const Error& e) {
        manifest.error(e.code(), e.what());
        manifest.j["timings_ms"]["total"] = ms_since(t_total);
        manifest.finish(cfg.output_dir, kExitError);
        throw;
    }
}

int cmd_validate(const PipelineConfig& cfg, const fs::path& repair_json) {
    const PipelineSetup setup = build_setup(cfg);
    const json doc = read_json_file(repair_json);

    const DiscretizationResult disc = discretize(*setup.controller, *setup.simulator,
                                                 cfg.discretization);
    const HPModel model = build_model(disc.input_grid, disc.output_grid, setup.simulator);

    const json* assignment = nullptr;
    if (doc.contains("counterfactual_minimal")) {
        assignment = &doc.at("counterfactual_minimal");
    } else if (doc.contains("blocks")) {
        assignment = &doc;
    } else {
        throw IoError("repair document carries no assignment "
                      "(expected 'counterfactual_minimal' or 'blocks')");
    }
    if (!assignment->contains("model_hash")) {
        throw IncompatibilityError("repair assignment has no model_hash");
    }
    const NodeAssignment v_star = assignment_from_json(*assignment, model);
    const bool verdict = verdict_of(model, *setup.simulator, v_star);
    std::printf("validate: verdict %d\n", verdict ? 1 : 0);
    return verdict ? kExitRepaired : kExitValidationFailed;
}

int cmd_export_heatmap(const fs::path& artifact, const std::string& assignment,
                       const fs::path& out_csv) {
    const json doc = read_json_file(artifact);
    std::optional<RepresentativeBehavior> g;
    if (doc.contains("map")) {
        g = representative_from_json(doc);
    } else if (doc.contains("inputGrid") && doc.contains("outputGrid")) {
        const HPModel model =
            build_model(grid_from_json(doc.at("inputGrid")), grid_from_json(doc.at("outputGrid")),
                        nullptr);
        std::string key = assignment;
        if (key == "factual" || key.empty()) {
            key = "factual";
        } else if (key == "sampled") {
            key = "counterfactual_raw";
        } else if (key == "minimal") {
            key = "counterfactual_minimal";
        } else {
            throw ConfigError("assignment must be one of factual, sampled, minimal");
        }
        if (!doc.contains(key)) throw IoError("artifact has no '" + key + "' assignment");
        g = decode(assignment_from_json(doc.at(key), model), model);
    } else {
        throw IoError("artifact is neither a cell map nor a cause result");
    }
    write_text_file(out_csv, heatmap_csv(*g));
    return kExitRepaired;
}

} // namespace crepair
