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

#include <cmath>
#include <string>

namespace geospm::kriging {

enum class CovarianceFamily { matern, gaussian };

std::string to_string(CovarianceFamily family);
CovarianceFamily parse_family(const std::string& name);

/// Isotropic stationary covariance: partial_sill * rho(h / range) plus a nugget
/// that only acts at zero lag. Matern smoothness is restricted to 0.5, 1.5 and 2.5,
/// which have closed forms.
struct CovarianceModel {
    CovarianceFamily family = CovarianceFamily::matern;
    double partial_sill = 1.0;
    double range_phi = 1.0;
    double kappa = 1.5;
    double nugget = 0.0;

    void validate() const;

    /// Sill-normalised correlation of the structured component; rho(0) = 1.
    double correlation(double h) const {
        const double u = h / range_phi;
        if (family == CovarianceFamily::gaussian) return std::exp(-u * u);
        if (kappa == 0.5) return std::exp(-u);
        if (kappa == 1.5) return (1.0 + u) * std::exp(-u);
        return (1.0 + u + u * u / 3.0) * std::exp(-u);
    }

    /// Covariance between two distinct locations at distance h.
    double covariance(double h) const { return partial_sill * correlation(h); }
    double total_sill() const { return partial_sill + nugget; }

    /// Semivariance at lag h > 0.
    double semivariance(double h) const { return nugget + partial_sill * (1.0 - correlation(h)); }
};

}  // namespace geospm::kriging
