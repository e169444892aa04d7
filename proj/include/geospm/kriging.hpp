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

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geospm/covariance.hpp"
#include "geospm/grid_domain.hpp"

namespace geospm::kriging {

class KrigingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class CoincidencePolicy { jitter_assumed, average };

std::string to_string(CoincidencePolicy policy);
CoincidencePolicy parse_coincidence_policy(const std::string& text);

/// jitter_assumed: throws KrigingError naming the first duplicated rows.
/// average: merges exact-duplicate locations into one row carrying the mean values.
Dataset coincidence_policy(const Dataset& dataset, CoincidencePolicy policy);

struct VariogramBin {
    double lag = 0.0;     // mean pair distance in the bin
    double gamma = 0.0;   // method-of-moments semivariance
    std::size_t pairs = 0;
};

struct EmpiricalVariogram {
    std::vector<VariogramBin> bins;
};

/// Default lag cutoff: a third of the domain diagonal.
double default_max_lag(const SpatialDomain& domain);

/// Equal-width bins over (0, max_lag]; empty bins are dropped.
EmpiricalVariogram empirical_variogram(const Dataset& dataset, std::size_t variable, std::size_t n_bins,
                                       double max_lag);

struct FitReport {
    CovarianceModel model;
    double loss = 0.0;
    std::size_t starts = 0;
};

/// Weighted least squares (weights n_h / h^2) over nugget, partial sill and
/// range. For a fixed range the sill parameters solve a non-negative linear
/// problem; the range is searched on a fixed log grid and refined by golden section.
FitReport fit_covariance_report(const EmpiricalVariogram& ev, CovarianceFamily family, double kappa = 1.5);
CovarianceModel fit_covariance(const EmpiricalVariogram& ev, CovarianceFamily family, double kappa = 1.5);

inline constexpr std::size_t kMaxExactObservations = 5000;

struct KrigingResult {
    ScalarField mean;
    ScalarField variance;
    std::size_t clamped = 0;  // cells whose variance was clamped to 0
};

struct KrigeOptions {
    bool parallel = true;
};

/// Ordinary kriging with a constant unknown mean over a global window,
/// predicted at every cell centre of `domain`.
KrigingResult krige(const Dataset& dataset, std::size_t variable, const CovarianceModel& model,
                    const SpatialDomain& domain, const KrigeOptions& options = {});

/// Ordinary-kriging weights lambda for one target location.
Eigen::VectorXd kriging_weights(const Dataset& dataset, const CovarianceModel& model, Point2 target);

struct SignificanceMap {
    BinaryMap significant;
    ScalarField z;            // (mean - null) / sd, NaN on excluded cells
    std::size_t excluded = 0;  // cells with zero variance
    double critical = 0.0;
};

/// Uncorrected one-sided z-test of the prediction against `null_mean`.
SignificanceMap kriging_significance(const KrigingResult& result, double alpha, double null_mean = 0.5);

struct KrigingAnalysisOptions {
    CovarianceFamily family = CovarianceFamily::matern;
    double kappa = 1.5;
    std::size_t bins = 15;
    double max_lag = 0.0;  // 0 = default_max_lag
    double alpha = 0.05;
    CoincidencePolicy coincidence = CoincidencePolicy::jitter_assumed;
    bool parallel = true;
};

/// Variogram, fit, prediction and z-test for one variable. A failure at any
/// stage leaves `error` set and an empty significance map.
struct KrigingAnalysis {
    std::optional<CovarianceModel> model;
    std::optional<KrigingResult> result;
    BinaryMap significant;
    std::size_t excluded = 0;
    std::string error;
    bool failed() const { return !error.empty(); }
};

KrigingAnalysis analyze_variable(const Dataset& dataset, std::size_t variable,
                                 const KrigingAnalysisOptions& options = {});

}  // namespace geospm::kriging
