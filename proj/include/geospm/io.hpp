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
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "geospm/grid_domain.hpp"
#include "geospm/harness.hpp"
#include "geospm/metrics.hpp"
#include "geospm/synthetic.hpp"

namespace geospm::io {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Dataset CSV: header x,y,<var1>,...,<varP>

/// Parses the CSV into a dataset on `domain`; does not validate locations.
Dataset read_dataset_csv(std::istream& in, const SpatialDomain& domain);
void write_dataset_csv(std::ostream& out, const Dataset& dataset);
/// Smallest unit-cell domain at the origin that contains every location.
SpatialDomain bounding_domain(const Dataset& dataset, double cell_size = 1.0);

nlohmann::json domain_to_json(const SpatialDomain& domain);
SpatialDomain domain_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Raster text format
//
//   GEOSPM-RASTER 1
//   width <a>
//   height <b>
//   origin <ox> <oy>
//   cell_size <h>
//   dtype float64|bool
//   <b lines of a values, row k = 1 first>

inline constexpr const char* kRasterMagic = "GEOSPM-RASTER";

void write_field(std::ostream& out, const ScalarField& field);
void write_map(std::ostream& out, const BinaryMap& map);
ScalarField read_field(std::istream& in);
BinaryMap read_map(std::istream& in);

/// Reads either dtype; a bool raster comes back as 0/1 values.
struct Raster {
    std::string dtype;
    ScalarField values;
};
Raster read_raster(std::istream& in);

// ---------------------------------------------------------------------------
// Score tables

void write_scores_header(std::ostream& out);
void write_score_row(std::ostream& out, const harness::RunRow& row);
void write_aggregate_csv(std::ostream& out, const std::vector<harness::AggregateRow>& rows);

nlohmann::json score_to_json(const metrics::ScoreRecord& r);

nlohmann::json layout_to_json(const synthetic::LayoutSpec& layout);

/// Shortest round-trip rendering used by every text output.
std::string format_double(double v);

}  // namespace geospm::io
