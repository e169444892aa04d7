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

#include "geospm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "geospm/rng.hpp"

namespace geospm::harness {

using nlohmann::json;

std::string to_string(Method m) { return m == Method::geospm ? "geospm" : "kriging"; }

Method parse_method(const std::string& text) {
    if (text == "geospm") return Method::geospm;
    if (text == "kriging") return Method::kriging;
    throw SpecError("unknown method '" + text + "' (expected geospm or kriging)");
}

std::string to_string(SweepKind k) { return k == SweepKind::noise ? "noise" : "interaction"; }

// ---------------------------------------------------------------------------
// Experiment specs

void ExperimentSpec::validate() const {
    if (repetitions < 1) throw SpecError("repetitions must be at least 1");
    if (n_levels.empty()) throw SpecError("no sample sizes given");
    if (parameters.empty()) throw SpecError("no parameter levels given");
    if (methods.empty()) throw SpecError("no methods given");
    for (auto n : n_levels)
        if (n < 2) throw SpecError("sample sizes must be at least 2");
    for (double p : parameters) {
        if (kind == SweepKind::noise && !(p >= 0.0 && p <= 0.5)) throw SpecError("gamma must lie in [0, 0.5]");
        if (kind == SweepKind::interaction && !(p >= 0.0 && p <= 0.9)) throw SpecError("c3 must lie in [0, 0.9]");
    }
    if (kind == SweepKind::interaction && !synthetic::is_bivariate(layout))
        throw SpecError("interaction sweeps need a bivariate layout");
    if (!(alpha > 0.0 && alpha < 1.0)) throw SpecError("alpha must lie in (0, 1)");
    if (diameter && !(*diameter > 0.0)) throw SpecError("diameter must be positive");
    if (!diameter && schedule.empty()) throw SpecError("no smoothing schedule given");
}

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    return j.contains(key) && !j.at(key).is_null() ? j.at(key).get<T>() : fallback;
}

void reject_unknown(const json& j, const std::set<std::string>& known, const char* what) {
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw SpecError(std::string("unknown ") + what + " key '" + key + "'");
}

void check_version(const json& j) {
    if (!j.contains("spec_version")) throw SpecError("config lacks spec_version");
    const int v = j.at("spec_version").get<int>();
    if (v != kSpecVersion) throw SpecError("unsupported spec_version " + std::to_string(v));
}

}  // namespace

ExperimentSpec ExperimentSpec::from_json(const json& j) {
    if (!j.is_object()) throw SpecError("experiment config must be a JSON object");
    check_version(j);
    reject_unknown(j,
                   {"spec_version", "kind", "layout", "n_levels", "parameters", "gamma", "c3", "repetitions",
                    "methods", "schedule", "diameter", "seed_base", "alpha", "correction", "kriging", "workers",
                    "keep_maps"},
                   "experiment");
    ExperimentSpec s;
    try {
        const auto kind = get_or<std::string>(j, "kind", "noise");
        if (kind == "noise") s.kind = SweepKind::noise;
        else if (kind == "interaction") s.kind = SweepKind::interaction;
        else throw SpecError("unknown sweep kind '" + kind + "'");
        s.layout = synthetic::parse_layout(get_or<std::string>(
            j, "layout", s.kind == SweepKind::interaction ? "bivariate_snowflake" : "univariate_snowflake"));
        s.n_levels = j.at("n_levels").get<std::vector<std::size_t>>();
        for (const char* key : {"parameters", "gamma", "c3"})
            if (j.contains(key)) s.parameters = j.at(key).get<std::vector<double>>();
        s.repetitions = get_or<std::size_t>(j, "repetitions", 1);
        if (j.contains("methods")) {
            s.methods.clear();
            for (const auto& m : j.at("methods")) s.methods.push_back(parse_method(m.get<std::string>()));
        }
        if (j.contains("schedule")) {
            const auto& sch = j.at("schedule");
            s.schedule = sch.is_string() ? smoothing::SmoothingSchedule::parse(sch.get<std::string>())
                                         : smoothing::SmoothingSchedule(sch.get<std::vector<double>>());
        }
        if (j.contains("diameter") && !j.at("diameter").is_null()) s.diameter = j.at("diameter").get<double>();
        s.seed_base = get_or<std::uint64_t>(j, "seed_base", 1);
        s.alpha = get_or<double>(j, "alpha", 0.05);
        s.correction = rft::parse_correction(get_or<std::string>(j, "correction", "min_of_both"));
        if (j.contains("kriging")) {
            const auto& k = j.at("kriging");
            reject_unknown(k, {"family", "kappa", "bins", "max_lag", "coincidence", "fit"}, "kriging");
            s.kriging.family = kriging::parse_family(get_or<std::string>(k, "family", "matern"));
            s.kriging.kappa = get_or<double>(k, "kappa", 1.5);
            s.kriging.bins = get_or<std::size_t>(k, "bins", 15);
            s.kriging.max_lag = get_or<double>(k, "max_lag", 0.0);
            s.kriging.coincidence =
                kriging::parse_coincidence_policy(get_or<std::string>(k, "coincidence", "jitter-assumed"));
        }
        s.workers = get_or<std::size_t>(j, "workers", 0);
        s.keep_maps = get_or<bool>(j, "keep_maps", false);
    } catch (const json::exception& e) {
        throw SpecError(std::string("malformed experiment config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw SpecError(e.what());
    } catch (const std::domain_error& e) {
        throw SpecError(e.what());
    }
    s.validate();
    return s;
}

json ExperimentSpec::to_json() const {
    json j;
    j["spec_version"] = kSpecVersion;
    j["kind"] = to_string(kind);
    j["layout"] = synthetic::to_string(layout);
    j["n_levels"] = n_levels;
    j["parameters"] = parameters;
    j["repetitions"] = repetitions;
    std::vector<std::string> m;
    for (auto x : methods) m.push_back(to_string(x));
    j["methods"] = m;
    j["schedule"] = schedule.diameters();
    j["diameter"] = diameter ? json(*diameter) : json(nullptr);
    j["seed_base"] = seed_base;
    j["alpha"] = alpha;
    j["correction"] = rft::to_string(correction);
    j["kriging"] = {{"family", kriging::to_string(kriging.family)},
                    {"kappa", kriging.kappa},
                    {"bins", kriging.bins},
                    {"max_lag", kriging.max_lag},
                    {"coincidence", kriging::to_string(kriging.coincidence)},
                    {"fit", "weighted least squares on the empirical variogram"}};
    j["workers"] = workers;
    j["keep_maps"] = keep_maps;
    return j;
}

ExperimentSpec full_scale_noise_spec(synthetic::Layout layout) {
    ExperimentSpec s;
    s.kind = SweepKind::noise;
    s.layout = layout;
    s.n_levels = synthetic::is_bivariate(layout) ? std::vector<std::size_t>{1600, 3200}
                                                 : std::vector<std::size_t>{600, 1200, 1800};
    for (int i = 0; i <= 35; ++i) s.parameters.push_back(i / 100.0);
    s.repetitions = 10;
    return s;
}

ExperimentSpec full_scale_interaction_spec() {
    ExperimentSpec s;
    s.kind = SweepKind::interaction;
    s.layout = synthetic::Layout::bivariate_snowflake;
    s.n_levels = {15000};
    s.parameters = {0.25, 0.30, 0.35, 0.40, 0.45, 0.50};
    s.repetitions = 10;
    s.methods = {Method::geospm};
    s.diameter = 60.0;
    return s;
}

std::uint64_t run_seed(std::uint64_t seed_base, const std::string& model, std::size_t n, double parameter,
                       std::size_t repetition) {
    std::uint64_t h = mix64(seed_base);
    h = hash_combine(h, hash_string(model));
    h = hash_combine(h, n);
    // Parameters are keyed at micro-resolution so 0.1 and 0.1000000001 agree.
    h = hash_combine(h, static_cast<std::uint64_t>(std::llround(parameter * 1e6)));
    h = hash_combine(h, repetition);
    return h;
}

std::string run_id(const RunRow& row) {
    std::ostringstream s;
    s << "n" << row.n << "_p" << std::llround(row.parameter * 1000) << "_r" << row.repetition;
    return s.str();
}

// ---------------------------------------------------------------------------
// Single runs

namespace {

std::string model_name(const ExperimentSpec& spec) {
    return synthetic::to_string(spec.layout) + "/" + to_string(spec.kind);
}

}  // namespace

RunOutput run_single(const ExperimentSpec& spec, std::size_t n, double parameter, std::size_t repetition,
                     bool parallel_kernels) {
    const auto partition = synthetic::build_partition(synthetic::default_layout(spec.layout));
    const int P = synthetic::is_bivariate(spec.layout) ? 2 : 1;
    const auto model = spec.kind == SweepKind::noise ? synthetic::noise_model(parameter, partition.regions, P)
                                                     : synthetic::interaction_model(parameter);
    RunRow base;
    base.model = model_name(spec);
    base.n = n;
    base.parameter = parameter;
    base.repetition = repetition;
    base.seed = run_seed(spec.seed_base, base.model, n, parameter, repetition);
    const auto gen = synthetic::sample_dataset(partition, model, n, base.seed);
    base.generator = gen.generator;

    Dataset data = gen.dataset;
    std::vector<std::string> variables = data.variable_names;
    std::vector<BinaryMap> targets;
    for (int p = 0; p < P; ++p) targets.push_back(synthetic::target_map(partition, model, p));
    if (spec.kind == SweepKind::interaction) {
        data.variable_names.push_back("z1*z2");
        for (auto& o : data.observations) o.values.push_back(o.values[0] * o.values[1]);
        variables.push_back("z1*z2");
        targets.push_back(synthetic::product_target_map(partition, model, {0, 1}));
    }

    RunOutput out;
    auto emit = [&](Method method, std::size_t v, const BinaryMap& recovered, double diameter,
                    const std::string& error) {
        RunRow row = base;
        row.variable = variables[v];
        row.method = method;
        row.diameter = diameter;
        row.scores = metrics::score_pair(recovered, targets[v]);
        row.significant_cells = recovered.count();
        row.failed = !error.empty();
        row.error = error;
        out.rows.push_back(std::move(row));
        if (spec.keep_maps) out.maps.push_back({variables[v], method, recovered, targets[v]});
    };

    for (Method method : spec.methods) {
        if (method == Method::geospm) {
            double diameter = spec.diameter.value_or(0.0);
            try {
                if (!spec.diameter) {
                    scale::ScaleSelectionOptions so;
                    so.alpha = spec.alpha;
                    so.correction = spec.correction;
                    so.parallel = parallel_kernels;
                    const std::vector<std::string> base_vars(gen.dataset.variable_names);
                    const auto sel = scale::score_scales(data, base_vars, spec.schedule, so);
                    out.scale_scores = sel.scores;
                    diameter = sel.selected;
                }
                AnalysisConfig cfg;
                cfg.design_columns = variables;
                cfg.schedule = smoothing::SmoothingSchedule({diameter});
                cfg.threshold = rft::ThresholdSpec{spec.alpha, glm::Tail::positive, spec.correction};
                cfg.accumulate.parallel = parallel_kernels;
                const auto result = analyze(data, cfg);
                for (std::size_t v = 0; v < variables.size(); ++v)
                    emit(method, v, result.scales.front().contrast(variables[v]).significant, diameter, "");
            } catch (const std::exception& e) {
                for (std::size_t v = 0; v < variables.size(); ++v)
                    emit(method, v, BinaryMap(data.domain), diameter, e.what());
            }
        } else {
            auto kopts = spec.kriging;
            kopts.alpha = spec.alpha;
            kopts.parallel = parallel_kernels;
            for (std::size_t v = 0; v < variables.size(); ++v) {
                const auto ka = kriging::analyze_variable(data, v, kopts);
                emit(method, v, ka.significant, 0.0, ka.error);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sweeps

std::size_t resolve_workers(std::size_t requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("GEOSPM_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<AggregateRow> aggregate_rows(const std::vector<RunRow>& rows) {
    struct Group {
        AggregateRow row;
        std::vector<metrics::ScoreRecord> scores;
        std::vector<double> cells;
    };
    std::vector<Group> groups;
    auto same = [](const AggregateRow& a, const RunRow& r) {
        return a.model == r.model && a.n == r.n && a.parameter == r.parameter && a.variable == r.variable &&
               a.method == r.method;
    };
    for (const auto& r : rows) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) { return same(g.row, r); });
        if (it == groups.end()) {
            Group g;
            g.row.model = r.model;
            g.row.n = r.n;
            g.row.parameter = r.parameter;
            g.row.variable = r.variable;
            g.row.method = r.method;
            groups.push_back(std::move(g));
            it = std::prev(groups.end());
        }
        it->scores.push_back(r.scores);
        it->cells.push_back(static_cast<double>(r.significant_cells));
        it->row.failures += r.failed ? 1 : 0;
    }
    std::vector<AggregateRow> out;
    for (auto& g : groups) {
        g.row.scores = metrics::aggregate_scores(g.scores);
        g.row.mean_significant_cells = metrics::summarize(g.cells).mean;
        out.push_back(std::move(g.row));
    }
    return out;
}

SweepResult run_sweep(const ExperimentSpec& spec, const RowSink& sink) {
    spec.validate();
    struct Job {
        std::size_t n;
        double parameter;
        std::size_t repetition;
    };
    std::vector<Job> jobs;
    for (auto n : spec.n_levels)
        for (double p : spec.parameters)
            for (std::size_t r = 0; r < spec.repetitions; ++r) jobs.push_back({n, p, r});

    const std::size_t workers = std::min(resolve_workers(spec.workers), jobs.size());
    // Nested OpenMP teams inside a thread pool oversubscribe; kernels go serial then.
    const bool parallel_kernels = workers <= 1;
    std::vector<std::optional<RunOutput>> outputs(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex mutex;
    std::size_t flushed = 0;

    // Rows reach the sink in job order regardless of completion order.
    auto flush_ready = [&]() {
        while (flushed < jobs.size() && outputs[flushed]) {
            if (sink)
                for (const auto& row : outputs[flushed]->rows) sink(row);
            ++flushed;
        }
    };
    auto work = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            RunOutput o = run_single(spec, jobs[i].n, jobs[i].parameter, jobs[i].repetition, parallel_kernels);
            std::lock_guard<std::mutex> lock(mutex);
            outputs[i] = std::move(o);
            flush_ready();
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    SweepResult result;
    result.spec = spec;
    for (auto& o : outputs) {
        for (const auto& row : o->rows) result.rows.push_back(row);
        if (spec.keep_maps && !o->rows.empty()) result.runs.emplace(run_id(o->rows.front()), std::move(*o));
    }
    result.aggregate = aggregate_rows(result.rows);
    return result;
}

SweepResult run_noise_sweep(const ExperimentSpec& spec, const RowSink& sink) {
    if (spec.kind != SweepKind::noise) throw SpecError("spec is not a noise sweep");
    return run_sweep(spec, sink);
}

SweepResult run_interaction_sweep(const ExperimentSpec& spec, const RowSink& sink) {
    if (spec.kind != SweepKind::interaction) throw SpecError("spec is not an interaction sweep");
    return run_sweep(spec, sink);
}

// ---------------------------------------------------------------------------
// Empirical models

void EmpiricalConfig::validate() const {
    if (models.empty()) throw SpecError("no models given");
    std::set<std::string> names;
    for (const auto& m : models) {
        if (m.name.empty()) throw SpecError("model without a name");
        if (!names.insert(m.name).second) throw SpecError("duplicate model '" + m.name + "'");
        if (m.columns.empty()) throw SpecError("model '" + m.name + "' has no columns");
    }
    if (!(diameter > 0.0)) throw SpecError("diameter must be positive");
    if (!(density_fraction > 0.0 && density_fraction < 1.0)) throw SpecError("density fraction must lie in (0, 1)");
    if (!(alpha > 0.0 && alpha < 1.0)) throw SpecError("alpha must lie in (0, 1)");
    for (const auto& c : conjunctions) {
        if (c.terms.size() < 2) throw SpecError("conjunction '" + c.name + "' needs at least two terms");
        for (const auto& t : c.terms) {
            if (!names.count(t.model)) throw SpecError("conjunction '" + c.name + "' names unknown model '" + t.model + "'");
            if (t.sign == glm::Tail::two_sided && tail != glm::Tail::two_sided)
                throw SpecError("unsigned conjunction terms need a two-sided test");
        }
    }
}

EmpiricalConfig EmpiricalConfig::from_json(const json& j) {
    if (!j.is_object()) throw SpecError("model config must be a JSON object");
    check_version(j);
    reject_unknown(j, {"spec_version", "models", "diameter", "density_fraction", "alpha", "tail", "zscore", "conjunctions"},
                   "model config");
    EmpiricalConfig c;
    try {
        for (const auto& m : j.at("models")) {
            reject_unknown(m, {"name", "columns"}, "model");
            c.models.push_back({m.at("name").get<std::string>(), m.at("columns").get<std::vector<std::string>>()});
        }
        c.diameter = get_or<double>(j, "diameter", 7000.0);
        c.density_fraction = get_or<double>(j, "density_fraction", 0.1);
        c.alpha = get_or<double>(j, "alpha", 0.05);
        c.tail = glm::parse_tail(get_or<std::string>(j, "tail", "two"));
        c.zscore = get_or<bool>(j, "zscore", true);
        if (j.contains("conjunctions")) {
            for (const auto& cj : j.at("conjunctions")) {
                reject_unknown(cj, {"name", "terms"}, "conjunction");
                ConjunctionSpec spec;
                spec.name = cj.at("name").get<std::string>();
                for (const auto& t : cj.at("terms")) {
                    reject_unknown(t, {"model", "variable", "sign"}, "conjunction term");
                    spec.terms.push_back({t.at("model").get<std::string>(), t.at("variable").get<std::string>(),
                                          glm::parse_tail(get_or<std::string>(t, "sign", "pos"))});
                }
                c.conjunctions.push_back(std::move(spec));
            }
        }
    } catch (const json::exception& e) {
        throw SpecError(std::string("malformed model config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw SpecError(e.what());
    }
    c.validate();
    return c;
}

json EmpiricalConfig::to_json() const {
    json j;
    j["spec_version"] = kSpecVersion;
    j["models"] = json::array();
    for (const auto& m : models) j["models"].push_back({{"name", m.name}, {"columns", m.columns}});
    j["diameter"] = diameter;
    j["density_fraction"] = density_fraction;
    j["alpha"] = alpha;
    j["tail"] = glm::to_string(tail);
    j["zscore"] = zscore;
    j["conjunctions"] = json::array();
    for (const auto& c : conjunctions) {
        json terms = json::array();
        for (const auto& t : c.terms)
            terms.push_back({{"model", t.model}, {"variable", t.variable}, {"sign", glm::to_string(t.sign)}});
        j["conjunctions"].push_back({{"name", c.name}, {"terms", terms}});
    }
    return j;
}

const ModelBundle& EmpiricalResult::model(const std::string& name) const {
    for (const auto& m : models)
        if (m.spec.name == name) return m;
    throw std::out_of_range("no model '" + name + "'");
}

EmpiricalResult run_empirical_models(const Dataset& dataset, const EmpiricalConfig& config) {
    config.validate();
    EmpiricalResult out;
    for (const auto& m : config.models) {
        AnalysisConfig cfg;
        cfg.design_columns = m.columns;
        cfg.design.zscore = config.zscore;
        cfg.schedule = smoothing::SmoothingSchedule({config.diameter});
        cfg.threshold = rft::ThresholdSpec{config.alpha, config.tail, rft::Correction::min_of_both};
        cfg.accumulate.parallel = config.parallel;
        cfg.density_fraction = config.density_fraction;
        auto result = analyze(dataset, cfg);
        ModelBundle bundle{m, std::move(result.scales.front())};
        const auto& fit = bundle.result.fit;
        for (std::size_t c = 0; c < fit.columns.size(); ++c) {
            if (fit.columns[c] == glm::kConstantColumn) continue;
            for (std::size_t v = 0; v < fit.beta[c].size(); ++v)
                if (bundle.result.mask[v]) out.shared_beta_scale = std::max(out.shared_beta_scale, std::abs(fit.beta[c][v]));
        }
        out.models.push_back(std::move(bundle));
    }
    for (const auto& cj : config.conjunctions) {
        std::vector<BinaryMap> maps;
        std::vector<conjunction::MapSource> sources;
        for (const auto& term : cj.terms) {
            const auto& contrast = out.model(term.model).result.contrast(term.variable);
            if (term.sign == glm::Tail::two_sided) {
                maps.push_back(contrast.significant);
            } else if (contrast.signed_maps) {
                maps.push_back(term.sign == glm::Tail::positive ? contrast.signed_maps->positive
                                                                : contrast.signed_maps->negative);
            } else if (contrast.tail == term.sign) {
                maps.push_back(contrast.significant);
            } else {
                throw SpecError("conjunction term " + term.variable + " asks for a tail that was not tested");
            }
            sources.push_back({term.variable, term.model, term.sign});
        }
        out.conjunctions.push_back({cj.name, conjunction::conjoin(maps, sources)});
    }
    return out;
}

EmpiricalConfig standin_model_ladder() {
    EmpiricalConfig c;
    c.models = {
        {"model_1", {"diabetes"}},
        {"model_2", {"diabetes", "sex", "age", "bmi"}},
        {"model_3", {"diabetes", "sex", "age", "bmi", "income"}},
        {"model_4", {"diabetes", "sex", "age", "bmi", "income", "bmi*income"}},
    };
    const auto pos = glm::Tail::positive, neg = glm::Tail::negative;
    c.conjunctions = {
        {"diabetes_and_male", {{"model_4", "diabetes", pos}, {"model_4", "sex", pos}}},
        {"diabetes_and_younger", {{"model_4", "diabetes", pos}, {"model_4", "age", neg}}},
        {"diabetes_and_lower_income", {{"model_4", "diabetes", pos}, {"model_4", "income", neg}}},
        {"diabetes_younger_male_lower_income",
         {{"model_4", "diabetes", pos}, {"model_4", "sex", pos}, {"model_4", "age", neg}, {"model_4", "income", neg}}},
    };
    return c;
}

}  // namespace geospm::harness
