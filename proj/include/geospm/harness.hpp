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

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "geospm/analysis.hpp"
#include "geospm/conjunction.hpp"
#include "geospm/kriging.hpp"
#include "geospm/metrics.hpp"
#include "geospm/scale_selection.hpp"
#include "geospm/synthetic.hpp"

namespace geospm::harness {

inline constexpr int kSpecVersion = 1;

class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Method { geospm, kriging };
std::string to_string(Method m);
Method parse_method(const std::string& text);

enum class SweepKind { noise, interaction };
std::string to_string(SweepKind k);

struct ExperimentSpec {
    SweepKind kind = SweepKind::noise;
    synthetic::Layout layout = synthetic::Layout::univariate_snowflake;
    std::vector<std::size_t> n_levels;
    std::vector<double> parameters;  // gamma (noise) or c3 (interaction)
    std::size_t repetitions = 1;
    std::vector<Method> methods{Method::geospm, Method::kriging};
    smoothing::SmoothingSchedule schedule = smoothing::SmoothingSchedule::synthetic_default();
    std::optional<double> diameter;  // fixed scale, bypasses scale selection
    std::uint64_t seed_base = 1;
    double alpha = 0.05;
    rft::Correction correction = rft::Correction::min_of_both;
    kriging::KrigingAnalysisOptions kriging;
    std::size_t workers = 0;  // 0 = GEOSPM_WORKERS or hardware concurrency
    bool keep_maps = false;

    void validate() const;
    static ExperimentSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// Full-scale noise sweep (univariate or bivariate layout).
ExperimentSpec full_scale_noise_spec(synthetic::Layout layout);
/// Full-scale interaction sweep with c3 in 0.25..0.5.
ExperimentSpec full_scale_interaction_spec();

/// hash(seed_base, model, N, parameter, repetition).
std::uint64_t run_seed(std::uint64_t seed_base, const std::string& model, std::size_t n, double parameter,
                       std::size_t repetition);

struct RunRow {
    std::string model;
    std::size_t n = 0;
    double parameter = 0.0;
    std::size_t repetition = 0;
    std::string variable;
    Method method = Method::geospm;
    std::uint64_t seed = 0;
    std::string generator;
    double diameter = 0.0;  // GeoSPM scale used; 0 for kriging
    metrics::ScoreRecord scores;
    std::size_t significant_cells = 0;
    bool failed = false;
    std::string error;
};

struct RunMaps {
    std::string variable;
    Method method = Method::geospm;
    BinaryMap recovered;
    BinaryMap target;
};

struct RunOutput {
    std::vector<RunRow> rows;
    std::vector<RunMaps> maps;  // filled when keep_maps is set
    std::vector<scale::ScaleScore> scale_scores;
};

struct AggregateRow {
    std::string model;
    std::size_t n = 0;
    double parameter = 0.0;
    std::string variable;
    Method method = Method::geospm;
    metrics::AggregateScores scores;
    double mean_significant_cells = 0.0;
    std::size_t failures = 0;
};

struct SweepResult {
    ExperimentSpec spec;
    std::vector<RunRow> rows;  // ordered by (N, parameter, repetition, variable, method)
    std::vector<AggregateRow> aggregate;
    std::map<std::string, RunOutput> runs;  // keyed by run id, only with keep_maps
};

std::string run_id(const RunRow& row);

/// One generated dataset analysed by every configured method.
RunOutput run_single(const ExperimentSpec& spec, std::size_t n, double parameter, std::size_t repetition,
                     bool parallel_kernels = true);

using RowSink = std::function<void(const RunRow&)>;

/// Runs every (N, parameter, repetition) job on a worker pool. `sink` is
/// called for each finished row from one thread at a time.
SweepResult run_sweep(const ExperimentSpec& spec, const RowSink& sink = {});
SweepResult run_noise_sweep(const ExperimentSpec& spec, const RowSink& sink = {});
SweepResult run_interaction_sweep(const ExperimentSpec& spec, const RowSink& sink = {});

std::vector<AggregateRow> aggregate_rows(const std::vector<RunRow>& rows);

std::size_t resolve_workers(std::size_t requested);

// ---------------------------------------------------------------------------
// Empirical model ladder

struct ModelSpec {
    std::string name;
    std::vector<std::string> columns;
};

struct ConjunctionTerm {
    std::string model;
    std::string variable;
    glm::Tail sign = glm::Tail::positive;  // positive or negative half of a two-sided map
};

struct ConjunctionSpec {
    std::string name;
    std::vector<ConjunctionTerm> terms;
};

struct EmpiricalConfig {
    std::vector<ModelSpec> models;
    double diameter = 7000.0;
    double density_fraction = 0.1;
    double alpha = 0.05;
    glm::Tail tail = glm::Tail::two_sided;
    bool zscore = true;
    std::vector<ConjunctionSpec> conjunctions;
    bool parallel = true;

    void validate() const;
    static EmpiricalConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct ModelBundle {
    ModelSpec spec;
    ScaleResult result;
};

struct NamedConjunction {
    std::string name;
    conjunction::ConjunctionResult result;
};

struct EmpiricalResult {
    std::vector<ModelBundle> models;
    /// max |beta| of every non-constant coefficient inside the mask across all models.
    double shared_beta_scale = 0.0;
    std::vector<NamedConjunction> conjunctions;

    const ModelBundle& model(const std::string& name) const;
};

EmpiricalResult run_empirical_models(const Dataset& dataset, const EmpiricalConfig& config);

/// The four-model ladder for the stand-in data, with the conjunctions of
/// diabetes with each model-4 covariate.
EmpiricalConfig standin_model_ladder();

}  // namespace geospm::harness
