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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace geospm {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// 1-based grid cell coordinate (j along x, k along y).
struct CellIndex {
    int j = 1;
    int k = 1;
    friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

/// Rectangular domain [ox, ox + a*h) x [oy, oy + b*h) decomposed into a x b cells.
class SpatialDomain {
public:
    SpatialDomain() = default;
    SpatialDomain(int width, int height, Point2 origin = {}, double cell_size = 1.0);

    int width() const { return width_; }
    int height() const { return height_; }
    Point2 origin() const { return origin_; }
    double cell_size() const { return cell_size_; }
    std::size_t cell_count() const { return static_cast<std::size_t>(width_) * height_; }
    double cell_area() const { return cell_size_ * cell_size_; }

    /// Half-open containment; the upper bounds are excluded.
    bool contains(Point2 p) const;
    bool contains(CellIndex c) const { return c.j >= 1 && c.j <= width_ && c.k >= 1 && c.k <= height_; }

    /// Row-major storage offset of a 1-based cell index.
    std::size_t offset(CellIndex c) const {
        return static_cast<std::size_t>(c.k - 1) * width_ + static_cast<std::size_t>(c.j - 1);
    }
    CellIndex cell_at(std::size_t offset) const {
        return {static_cast<int>(offset % width_) + 1, static_cast<int>(offset / width_) + 1};
    }

    friend bool operator==(const SpatialDomain& a, const SpatialDomain& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.origin_.x == b.origin_.x &&
               a.origin_.y == b.origin_.y && a.cell_size_ == b.cell_size_;
    }

private:
    int width_ = 1;
    int height_ = 1;
    Point2 origin_{};
    double cell_size_ = 1.0;
};

CellIndex world_to_cell(const SpatialDomain& domain, Point2 location);
Point2 cell_center(const SpatialDomain& domain, CellIndex cell);

struct Observation {
    Point2 location;
    std::vector<double> values;
};

struct Dataset {
    SpatialDomain domain;
    std::vector<std::string> variable_names;
    std::vector<Observation> observations;

    std::size_t size() const { return observations.size(); }
    std::size_t variable_count() const { return variable_names.size(); }
    /// Column index of a named variable; throws std::out_of_range.
    std::size_t variable_index(const std::string& name) const;
    std::vector<double> column(std::size_t variable) const;
};

struct DatasetViolation {
    std::size_t row;  // 0-based observation index, or npos for dataset-level problems
    std::string reason;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct ValidationReport {
    std::vector<DatasetViolation> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

ValidationReport validate_dataset(const Dataset& dataset);

class DatasetError : public std::runtime_error {
public:
    explicit DatasetError(ValidationReport report)
        : std::runtime_error(report.to_string()), report_(std::move(report)) {}
    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

/// Returns the dataset unchanged or throws DatasetError carrying the full report.
const Dataset& require_valid(const Dataset& dataset);

class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const SpatialDomain& domain, double fill = 0.0)
        : domain_(domain), values_(domain.cell_count(), fill) {}
    ScalarField(const SpatialDomain& domain, std::vector<double> values);

    const SpatialDomain& domain() const { return domain_; }
    std::size_t size() const { return values_.size(); }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& at(CellIndex c) { return values_[domain_.offset(c)]; }
    double at(CellIndex c) const { return values_[domain_.offset(c)]; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double max() const;
    double min() const;

private:
    SpatialDomain domain_;
    std::vector<double> values_;
};

class BinaryMap {
public:
    BinaryMap() = default;
    explicit BinaryMap(const SpatialDomain& domain, bool fill = false)
        : domain_(domain), mask_(domain.cell_count(), fill ? 1 : 0) {}

    const SpatialDomain& domain() const { return domain_; }
    std::size_t size() const { return mask_.size(); }

    bool operator[](std::size_t i) const { return mask_[i] != 0; }
    void set(std::size_t i, bool v) { mask_[i] = v ? 1 : 0; }
    bool at(CellIndex c) const { return mask_[domain_.offset(c)] != 0; }
    void set(CellIndex c, bool v) { mask_[domain_.offset(c)] = v ? 1 : 0; }

    std::size_t count() const;
    bool empty() const { return count() == 0; }

    const std::vector<unsigned char>& raw() const { return mask_; }

    friend bool operator==(const BinaryMap& a, const BinaryMap& b) {
        return a.domain_ == b.domain_ && a.mask_ == b.mask_;
    }

private:
    SpatialDomain domain_;
    std::vector<unsigned char> mask_;
};

void require_same_domain(const SpatialDomain& a, const SpatialDomain& b, const char* what);

}  // namespace geospm
