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

#include "geospm/grid_domain.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace geospm {

SpatialDomain::SpatialDomain(int width, int height, Point2 origin, double cell_size)
    : width_(width), height_(height), origin_(origin), cell_size_(cell_size) {
    if (width < 1 || height < 1) throw DomainError("domain must have at least one cell per axis");
    if (!(cell_size > 0.0) || !std::isfinite(cell_size)) throw DomainError("cell size must be positive");
    if (!std::isfinite(origin.x) || !std::isfinite(origin.y)) throw DomainError("origin must be finite");
}

bool SpatialDomain::contains(Point2 p) const {
    const double ux = (p.x - origin_.x) / cell_size_;
    const double uy = (p.y - origin_.y) / cell_size_;
    return ux >= 0.0 && ux < width_ && uy >= 0.0 && uy < height_;
}

CellIndex world_to_cell(const SpatialDomain& domain, Point2 location) {
    if (!domain.contains(location)) {
        std::ostringstream msg;
        msg << "location (" << location.x << ", " << location.y << ") outside domain";
        throw DomainError(msg.str());
    }
    const double ux = (location.x - domain.origin().x) / domain.cell_size();
    const double uy = (location.y - domain.origin().y) / domain.cell_size();
    // Rounding in the division can land exactly on the upper edge.
    const int j = std::min(static_cast<int>(std::floor(ux)) + 1, domain.width());
    const int k = std::min(static_cast<int>(std::floor(uy)) + 1, domain.height());
    return {j, k};
}

Point2 cell_center(const SpatialDomain& domain, CellIndex cell) {
    if (!domain.contains(cell)) throw DomainError("cell index out of range");
    return {(cell.j - 0.5) * domain.cell_size() + domain.origin().x,
            (cell.k - 0.5) * domain.cell_size() + domain.origin().y};
}

std::size_t Dataset::variable_index(const std::string& name) const {
    auto it = std::find(variable_names.begin(), variable_names.end(), name);
    if (it == variable_names.end()) throw std::out_of_range("unknown variable '" + name + "'");
    return static_cast<std::size_t>(it - variable_names.begin());
}

std::vector<double> Dataset::column(std::size_t variable) const {
    std::vector<double> out;
    out.reserve(observations.size());
    for (const auto& o : observations) out.push_back(o.values.at(variable));
    return out;
}

std::string ValidationReport::to_string() const {
    std::ostringstream out;
    out << violations.size() << " dataset violation(s)";
    for (const auto& v : violations) {
        out << "\n  ";
        if (v.row == DatasetViolation::npos)
            out << "dataset: ";
        else
            out << "row " << v.row << ": ";
        out << v.reason;
    }
    return out.str();
}

ValidationReport validate_dataset(const Dataset& d) {
    ValidationReport report;
    auto add = [&](std::size_t row, std::string reason) {
        report.violations.push_back({row, std::move(reason)});
    };
    if (d.observations.empty()) add(DatasetViolation::npos, "no observations");
    std::set<std::string> names;
    for (const auto& n : d.variable_names)
        if (!names.insert(n).second) add(DatasetViolation::npos, "duplicate variable name '" + n + "'");

    const auto& dom = d.domain;
    const double xmax = dom.origin().x + dom.width() * dom.cell_size();
    const double ymax = dom.origin().y + dom.height() * dom.cell_size();
    for (std::size_t i = 0; i < d.observations.size(); ++i) {
        const auto& o = d.observations[i];
        if (o.values.size() != d.variable_names.size()) {
            add(i, "expected " + std::to_string(d.variable_names.size()) + " values, found " +
                       std::to_string(o.values.size()));
        }
        for (std::size_t p = 0; p < o.values.size(); ++p) {
            if (!std::isfinite(o.values[p])) {
                const std::string col = p < d.variable_names.size() ? d.variable_names[p] : std::to_string(p);
                add(i, "non-finite value in column '" + col + "'");
            }
        }
        if (!std::isfinite(o.location.x) || !std::isfinite(o.location.y)) {
            add(i, "non-finite location");
        } else if (!dom.contains(o.location)) {
            std::ostringstream msg;
            msg << "location (" << o.location.x << ", " << o.location.y << ") outside [" << dom.origin().x
                << "," << xmax << ")x[" << dom.origin().y << "," << ymax << ")";
            add(i, msg.str());
        }
    }
    return report;
}

const Dataset& require_valid(const Dataset& dataset) {
    auto report = validate_dataset(dataset);
    if (!report.ok()) throw DatasetError(std::move(report));
    return dataset;
}

ScalarField::ScalarField(const SpatialDomain& domain, std::vector<double> values)
    : domain_(domain), values_(std::move(values)) {
    if (values_.size() != domain_.cell_count()) throw DomainError("field size does not match domain");
}

double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }

std::size_t BinaryMap::count() const {
    return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 1));
}

void require_same_domain(const SpatialDomain& a, const SpatialDomain& b, const char* what) {
    if (!(a == b)) throw DomainError(std::string(what) + ": domains differ");
}

}  // namespace geospm
