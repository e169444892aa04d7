/*
 * Copyright 2026 The geospm authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// geospm command-line front end. All file I/O of the toolkit happens here.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geospm/analysis.hpp"
#include "geospm/harness.hpp"
#include "geospm/io.hpp"
#include "geospm/metrics.hpp"
#include "geospm/render.hpp"
#include "geospm/rng.hpp"
#include "geospm/scale_selection.hpp"
#include "geospm/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace geospm;

namespace {

enum Exit : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,
    kMissingFile = 3,
    kMalformedInput = 4,
    kInvalidData = 5,
};

struct FileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ifstream open_in(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw FileError("cannot open '" + p.string() + "' for reading");
    return in;
}

std::ofstream open_out(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw FileError("cannot open '" + p.string() + "' for writing");
    return out;
}

json read_json(const fs::path& p) {
    auto in = open_in(p);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw io::FormatError("'" + p.string() + "' is not valid JSON: " + e.what());
    }
}

void write_json(const fs::path& p, const json& j) {
    auto out = open_out(p);
    out << j.dump(2) << '\n';
}

void write_field(const fs::path& p, const ScalarField& f) {
    auto out = open_out(p);
    io::write_field(out, f);
}

void write_map(const fs::path& p, const BinaryMap& m) {
    auto out = open_out(p);
    io::write_map(out, m);
}

void write_bytes(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw FileError("cannot open '" + p.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

// File-name-safe rendering of a design column ("bmi*income" -> "bmi_x_income").
std::string safe_name(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '*') out += "_x_";
        else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.') out += c;
        else out += '_';
    }
    return out;
}

std::string diameter_dir(double d) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "d%g", d);
    return buf;
}

std::vector<double> parse_pair(const std::string& text, const char* what) {
    std::vector<double> v;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            v.push_back(std::stod(item));
        } catch (const std::logic_error&) {
            throw UsageError(std::string(what) + " expects numbers, got '" + text + "'");
        }
    }
    if (v.size() != 2) throw UsageError(std::string(what) + " expects two comma-separated numbers");
    return v;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
    std::string layout = "univariate_snowflake";
    std::optional<double> gamma;
    std::optional<double> c3;
    std::size_t n = 0;
    std::uint64_t seed = 1;
    std::string output;
    std::string targets;
    bool print_layout = false;
};

int cmd_generate(const GenerateArgs& a) {
    if (a.layout == "standin_birmingham") {
        if (a.output.empty()) throw UsageError("--output is required");
        const auto d = synthetic::make_empirical_standin(a.n ? a.n : 7000, a.seed);
        auto out = open_out(a.output);
        io::write_dataset_csv(out, d);
        write_json(a.output + ".json", {{"spec_version", harness::kSpecVersion},
                                        {"generator", std::string(Philox4x32::algorithm_id)},
                                        {"seed", a.seed},
                                        {"layout", a.layout},
                                        {"n", d.size()},
                                        {"domain", io::domain_to_json(d.domain)},
                                        {"variables", d.variable_names}});
        return kOk;
    }
    synthetic::LayoutSpec layout;
    try {
        layout = synthetic::default_layout(synthetic::parse_layout(a.layout));
    } catch (const synthetic::LayoutError& e) {
        throw UsageError(e.what());
    }
    if (a.print_layout) {
        std::cout << io::layout_to_json(layout).dump(2) << '\n';
        return kOk;
    }
    if (a.output.empty()) throw UsageError("--output is required");
    if (a.n == 0) throw UsageError("--n must be positive");
    if (a.gamma && a.c3) throw UsageError("give either --gamma or --c3, not both");
    const auto partition = synthetic::build_partition(layout);
    const int P = synthetic::is_bivariate(layout.layout) ? 2 : 1;
    synthetic::DistributionModel model;
    if (a.c3 && P != 2) throw UsageError("--c3 needs a bivariate layout");
    try {
        model = a.c3 ? synthetic::interaction_model(*a.c3)
                     : synthetic::noise_model(a.gamma.value_or(0.0), partition.regions, P);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    const auto gen = synthetic::sample_dataset(partition, model, a.n, a.seed);
    {
        auto out = open_out(a.output);
        io::write_dataset_csv(out, gen.dataset);
    }
    json side = {{"spec_version", harness::kSpecVersion},
                 {"generator", gen.generator},
                 {"seed", gen.seed},
                 {"layout", a.layout},
                 {"model", model.kind},
                 {"parameter", model.parameter},
                 {"n", a.n},
                 {"domain", io::domain_to_json(gen.dataset.domain)},
                 {"variables", gen.dataset.variable_names}};
    if (!a.targets.empty()) {
        const fs::path dir(a.targets);
        json files = json::object();
        for (int p = 0; p < P; ++p) {
            const auto name = "target_z" + std::to_string(p + 1) + ".map";
            write_map(dir / name, synthetic::target_map(partition, model, p));
            files["z" + std::to_string(p + 1)] = (dir / name).string();
        }
        if (a.c3) {
            write_map(dir / "target_z1_x_z2.map", synthetic::product_target_map(partition, model, {0, 1}));
            files["z1*z2"] = (dir / "target_z1_x_z2.map").string();
        }
        side["targets"] = files;
    }
    write_json(a.output + ".json", side);
    return kOk;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
    std::string data;
    std::string domain_json;
    std::string domain;
    std::string origin = "0,0";
    double cell_size = 1.0;
    std::string design;
    std::string contrasts;
    std::string diameters = "10:60:5";
    double alpha = 0.05;
    std::string tail = "pos";
    std::string correction = "min_of_both";
    std::string smoothness = "analytic";
    std::optional<double> density_fraction;
    bool congruent = false;
    bool no_constant = false;
    bool zscore = false;
    bool select_scale = false;
    std::string models;
    bool png = false;
    std::string output;
};

Dataset load_dataset(const AnalyzeArgs& a) {
    SpatialDomain domain;
    if (!a.domain.empty()) {
        const auto wh = parse_pair(a.domain, "--domain");
        const auto o = parse_pair(a.origin, "--origin");
        domain = SpatialDomain(static_cast<int>(wh[0]), static_cast<int>(wh[1]), {o[0], o[1]}, a.cell_size);
    } else {
        const fs::path sidecar = a.domain_json.empty() ? fs::path(a.data + ".json") : fs::path(a.domain_json);
        if (!fs::exists(sidecar))
            throw UsageError("no domain given: pass --domain or provide the sidecar '" + sidecar.string() + "'");
        const auto j = read_json(sidecar);
        domain = io::domain_from_json(j.contains("domain") ? j.at("domain") : j);
    }
    auto in = open_in(a.data);
    return io::read_dataset_csv(in, domain);
}

json smoothness_json(const rft::SmoothnessEstimate& s) {
    return {{"source", s.source},
            {"fwhm_x", s.fwhm_x},
            {"fwhm_y", s.fwhm_y},
            {"resels", s.resels},
            {"degenerate", s.degenerate}};
}

json write_scale_bundle(const fs::path& dir, const ScaleResult& s, const std::optional<double>& shared_scale,
                        bool png) {
    fs::create_directories(dir);
    write_map(dir / "mask.map", s.mask);
    json meta;
    meta["diameter"] = s.diameter;
    meta["df"] = s.fit.df;
    meta["rank"] = s.fit.rank;
    meta["clamped_cells"] = s.fit.clamped_cells;
    meta["mask_cells"] = s.mask.count();
    meta["smoothness"] = smoothness_json(s.smoothness);
    for (std::size_t c = 0; c < s.fit.columns.size(); ++c)
        write_field(dir / ("beta_" + safe_name(s.fit.columns[c]) + ".field"), s.fit.beta[c]);
    write_field(dir / "sigma2.field", s.fit.sigma2);
    json contrasts = json::array();
    for (const auto& c : s.contrasts) {
        const auto name = safe_name(c.column);
        write_field(dir / ("t_" + name + ".field"), c.t.t);
        write_map(dir / ("sig_" + name + ".map"), c.significant);
        json cj = {{"column", c.column},
                   {"tail", glm::to_string(c.tail)},
                   {"threshold", c.threshold},
                   {"significant_cells", c.significant.count()},
                   {"degenerate_cells", c.t.degenerate_cells}};
        if (c.signed_maps) {
            write_map(dir / ("sig_" + name + "_pos.map"), c.signed_maps->positive);
            write_map(dir / ("sig_" + name + "_neg.map"), c.signed_maps->negative);
            cj["positive_cells"] = c.signed_maps->positive.count();
            cj["negative_cells"] = c.signed_maps->negative.count();
        }
        if (png) {
            const auto idx = static_cast<std::size_t>(
                std::find(s.fit.columns.begin(), s.fit.columns.end(), c.column) - s.fit.columns.begin());
            render::ColormapSpec spec;
            spec.scale = shared_scale;
            spec.pixels_per_cell = 4;
            const auto r = render::render_png(s.fit.beta[idx], {c.significant}, spec);
            if (!r.warning.empty()) std::cerr << "warning: beta_" << name << ": " << r.warning << '\n';
            write_bytes(dir / ("beta_" + name + ".png"), r.png);
        }
        contrasts.push_back(std::move(cj));
    }
    meta["contrasts"] = contrasts;
    if (shared_scale) meta["shared_beta_scale"] = *shared_scale;
    return meta;
}

int cmd_analyze_models(const AnalyzeArgs& a, const Dataset& data) {
    auto config = harness::EmpiricalConfig::from_json(read_json(a.models));
    const auto result = harness::run_empirical_models(data, config);
    const fs::path root(a.output);
    json meta;
    meta["spec_version"] = harness::kSpecVersion;
    meta["config"] = config.to_json();
    meta["observations"] = data.size();
    meta["shared_beta_scale"] = result.shared_beta_scale;
    meta["models"] = json::array();
    for (const auto& m : result.models) {
        auto mj = write_scale_bundle(root / m.spec.name, m.result, result.shared_beta_scale, a.png);
        mj["name"] = m.spec.name;
        mj["columns"] = m.spec.columns;
        meta["models"].push_back(std::move(mj));
    }
    meta["conjunctions"] = json::array();
    for (const auto& c : result.conjunctions) {
        write_map(root / "conjunctions" / (safe_name(c.name) + ".map"), c.result.map);
        json inputs = json::array();
        for (const auto& s : c.result.inputs)
            inputs.push_back({{"model", s.model}, {"variable", s.variable}, {"tail", glm::to_string(s.tail)}});
        meta["conjunctions"].push_back({{"name", c.name},
                                        {"cells", c.result.map.count()},
                                        {"inputs", inputs},
                                        {"unsigned_inputs", c.result.unsigned_inputs}});
    }
    write_json(root / "metadata.json", meta);
    return kOk;
}

int cmd_analyze(const AnalyzeArgs& a) {
    if (a.output.empty()) throw UsageError("--output is required");
    const Dataset data = load_dataset(a);
    require_valid(data);
    if (!a.models.empty()) return cmd_analyze_models(a, data);
    if (a.design.empty()) throw UsageError("--design (or --models) is required");

    AnalysisConfig cfg;
    cfg.design_columns = glm::parse_column_list(a.design);
    cfg.contrasts = glm::parse_column_list(a.contrasts);
    cfg.design.include_constant = !a.no_constant;
    cfg.design.zscore = a.zscore;
    cfg.schedule = smoothing::SmoothingSchedule::parse(a.diameters);
    cfg.threshold = rft::ThresholdSpec{a.alpha, glm::parse_tail(a.tail), rft::parse_correction(a.correction)};
    cfg.threshold.validate();
    cfg.accumulate.congruent = a.congruent;
    cfg.smoothness = parse_smoothness_source(a.smoothness);
    cfg.density_fraction = a.density_fraction;

    json meta;
    meta["spec_version"] = harness::kSpecVersion;
    meta["data"] = a.data;
    meta["observations"] = data.size();
    meta["domain"] = io::domain_to_json(data.domain);
    meta["design"] = cfg.design_columns;
    meta["constant"] = cfg.design.include_constant;
    meta["zscore"] = cfg.design.zscore;
    meta["alpha"] = a.alpha;
    meta["tail"] = glm::to_string(cfg.threshold.tail);
    meta["correction"] = rft::to_string(cfg.threshold.correction);
    meta["congruent"] = a.congruent;
    meta["schedule"] = cfg.schedule.diameters();

    if (a.select_scale) {
        std::vector<std::string> vars;
        for (const auto& c : cfg.design_columns)
            if (c.find('*') == std::string::npos) vars.push_back(c);
        scale::ScaleSelectionOptions so;
        so.alpha = a.alpha;
        so.correction = cfg.threshold.correction;
        so.smoothness = cfg.smoothness;
        so.congruent = a.congruent;
        const auto sel = scale::score_scales(data, vars, cfg.schedule, so);
        json table = json::array();
        for (const auto& s : sel.scores)
            table.push_back({{"diameter", s.diameter}, {"score", s.score}, {"selected", s.diameter == sel.selected}});
        meta["scale_selection"] = table;
        cfg.schedule = smoothing::SmoothingSchedule({sel.selected});
    }

    const auto result = analyze(data, cfg);
    std::optional<double> shared;
    if (a.png) {
        std::vector<ScalarField> betas;
        for (const auto& s : result.scales)
            for (std::size_t c = 0; c < s.fit.columns.size(); ++c)
                if (s.fit.columns[c] != glm::kConstantColumn) betas.push_back(s.fit.beta[c]);
        shared = render::shared_abs_scale(betas);
    }
    meta["scales"] = json::array();
    const fs::path root(a.output);
    for (const auto& s : result.scales)
        meta["scales"].push_back(write_scale_bundle(root / diameter_dir(s.diameter), s, shared, a.png));
    write_json(root / "metadata.json", meta);
    return kOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
    std::string config;
    std::string preset;
    std::string output;
    std::size_t workers = 0;
};

int cmd_sweep(const SweepArgs& a) {
    if (a.output.empty()) throw UsageError("--output is required");
    harness::ExperimentSpec spec;
    if (!a.config.empty()) {
        spec = harness::ExperimentSpec::from_json(read_json(a.config));
    } else if (a.preset == "noise-univariate") {
        spec = harness::full_scale_noise_spec(synthetic::Layout::univariate_snowflake);
    } else if (a.preset == "noise-bivariate") {
        spec = harness::full_scale_noise_spec(synthetic::Layout::bivariate_snowflake);
    } else if (a.preset == "interaction") {
        spec = harness::full_scale_interaction_spec();
    } else {
        throw UsageError("give --config or --preset (noise-univariate, noise-bivariate, interaction)");
    }
    if (a.workers) spec.workers = a.workers;
    const fs::path root(a.output);
    fs::create_directories(root);
    write_json(root / "metadata.json", {{"spec", spec.to_json()},
                                        {"generator", std::string(Philox4x32::algorithm_id)},
                                        {"workers", harness::resolve_workers(spec.workers)}});
    auto scores = open_out(root / "scores.csv");
    io::write_scores_header(scores);
    const auto result = harness::run_sweep(spec, [&](const harness::RunRow& row) {
        io::write_score_row(scores, row);
        scores.flush();
    });
    {
        auto agg = open_out(root / "aggregate.csv");
        io::write_aggregate_csv(agg, result.aggregate);
    }
    for (const auto& [id, run] : result.runs) {
        for (const auto& m : run.maps) {
            const auto base = harness::to_string(m.method) + "_" + safe_name(m.variable);
            write_map(root / "maps" / id / (base + ".map"), m.recovered);
            write_map(root / "maps" / id / ("target_" + safe_name(m.variable) + ".map"), m.target);
        }
    }
    std::size_t failed = 0;
    for (const auto& r : result.rows) failed += r.failed ? 1 : 0;
    std::cerr << result.rows.size() << " rows written, " << failed << " flagged as failed\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// score / render

int cmd_score(const std::string& recovered, const std::string& target) {
    auto rin = open_in(recovered);
    auto tin = open_in(target);
    const auto r = io::read_map(rin);
    const auto t = io::read_map(tin);
    std::cout << io::score_to_json(metrics::score_pair(r, t)).dump(2) << '\n';
    return kOk;
}

struct RenderArgs {
    std::string field;
    std::vector<std::string> overlays;
    std::vector<std::string> shared_with;
    std::optional<double> scale;
    std::string colormap = "diverging";
    int pixels = 4;
    std::string output;
};

ScalarField load_raster_values(const std::string& path) {
    auto in = open_in(path);
    return io::read_raster(in).values;
}

int cmd_render(const RenderArgs& a) {
    if (a.output.empty()) throw UsageError("--output is required");
    const auto field = load_raster_values(a.field);
    std::vector<BinaryMap> overlays;
    for (const auto& p : a.overlays) {
        auto in = open_in(p);
        overlays.push_back(io::read_map(in));
    }
    render::ColormapSpec spec;
    if (a.colormap == "diverging") spec.kind = render::Colormap::diverging;
    else if (a.colormap == "sequential") spec.kind = render::Colormap::sequential;
    else throw UsageError("unknown colormap '" + a.colormap + "'");
    spec.pixels_per_cell = a.pixels;
    spec.scale = a.scale;
    if (!a.shared_with.empty()) {
        std::vector<ScalarField> all{field};
        for (const auto& p : a.shared_with) all.push_back(load_raster_values(p));
        spec.scale = render::shared_abs_scale(all);
    }
    const auto r = render::render_png(field, overlays, spec);
    if (!r.warning.empty()) std::cerr << "warning: " << r.warning << '\n';
    write_bytes(a.output, r.png);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geospm: geostatistical parametric mapping"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Sample a synthetic dataset");
    g->add_option("--layout", gen.layout,
                  "univariate_snowflake, univariate_anti, snowflake_field, bivariate_snowflake, bivariate_anti "
                  "or standin_birmingham");
    g->add_option("--gamma", gen.gamma, "noise parameter in [0, 0.5]");
    g->add_option("--c3", gen.c3, "interaction effect in [0, 0.9] (bivariate layouts)");
    g->add_option("--n", gen.n, "number of observations");
    g->add_option("--seed", gen.seed, "generator seed");
    g->add_option("-o,--output", gen.output, "output CSV; a .json sidecar is written next to it");
    g->add_option("--targets", gen.targets, "directory for target maps");
    g->add_flag("--print-layout", gen.print_layout, "print the layout geometry as JSON and exit");

    AnalyzeArgs an;
    auto* a = app.add_subcommand("analyze", "Scale-space GLM analysis of a dataset");
    a->add_option("--data", an.data, "dataset CSV (x,y,<vars>)")->required();
    a->add_option("--domain-json", an.domain_json, "JSON with the domain (default: <data>.json)");
    a->add_option("--domain", an.domain, "grid size as a,b");
    a->add_option("--origin", an.origin, "domain origin as x,y");
    a->add_option("--cell-size", an.cell_size, "cell size in world units");
    a->add_option("--design", an.design, "design columns, e.g. z1,z2,z1*z2");
    a->add_option("--contrasts", an.contrasts, "columns to test (default: all but the constant)");
    a->add_option("--diameters", an.diameters, "smoothing diameters lo:hi:step or a single value");
    a->add_option("--alpha", an.alpha, "family-wise error rate");
    a->add_option("--tail", an.tail, "pos, neg or two");
    a->add_option("--correction", an.correction, "rft, bonferroni or min_of_both");
    a->add_option("--smoothness", an.smoothness, "analytic or residual");
    a->add_option("--density-fraction", an.density_fraction, "mask cells below this fraction of peak density");
    a->add_flag("--congruent", an.congruent, "snap locations to cell centres");
    a->add_flag("--no-constant", an.no_constant, "omit the constant column");
    a->add_flag("--zscore", an.zscore, "standardise non-indicator columns");
    a->add_flag("--select-scale", an.select_scale, "pick one diameter by coverage score");
    a->add_option("--models", an.models, "model ladder JSON (runs every model at one diameter)");
    a->add_flag("--png", an.png, "also render coefficient maps with significance outlines");
    a->add_option("-o,--output", an.output, "bundle directory");

    SweepArgs sw;
    auto* s = app.add_subcommand("sweep", "Run an experiment sweep");
    s->add_option("--config", sw.config, "experiment JSON");
    s->add_option("--preset", sw.preset, "noise-univariate, noise-bivariate or interaction (full scale)");
    s->add_option("--workers", sw.workers, "worker threads (default: GEOSPM_WORKERS or all cores)");
    s->add_option("-o,--output", sw.output, "run directory");

    std::string recovered, target;
    auto* sc = app.add_subcommand("score", "Compare a recovered map with a target map");
    sc->add_option("--recovered", recovered, "recovered map file")->required();
    sc->add_option("--target", target, "target map file")->required();

    RenderArgs rn;
    auto* r = app.add_subcommand("render", "Render a field to PNG");
    r->add_option("--field", rn.field, "raster file")->required();
    r->add_option("--overlay", rn.overlays, "map files drawn as outlines");
    r->add_option("--shared-with", rn.shared_with, "other fields sharing the colour scale");
    r->add_option("--scale", rn.scale, "symmetric colour limit");
    r->add_option("--colormap", rn.colormap, "diverging or sequential");
    r->add_option("--pixels", rn.pixels, "pixels per cell");
    r->add_option("-o,--output", rn.output, "PNG file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*g) return cmd_generate(gen);
        if (*a) return cmd_analyze(an);
        if (*s) return cmd_sweep(sw);
        if (*sc) return cmd_score(recovered, target);
        if (*r) return cmd_render(rn);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const FileError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kMissingFile;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kMissingFile;
    } catch (const io::FormatError& e) {
        std::cerr << "error: malformed input: " << e.what() << '\n';
        return kMalformedInput;
    } catch (const harness::SpecError& e) {
        std::cerr << "error: malformed config: " << e.what() << '\n';
        return kMalformedInput;
    } catch (const DatasetError& e) {
        std::cerr << "error: invalid dataset:\n" << e.what() << '\n';
        return kInvalidData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}
