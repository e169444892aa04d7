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
#include <optional>
#include <string>
#include <vector>

#include "geospm/grid_domain.hpp"

namespace geospm::synthetic {

// ---------------------------------------------------------------------------
// Fractal geometry

struct Polygon {
    std::vector<Point2> vertices;  // closed implicitly

    std::size_t edge_count() const { return vertices.size(); }
    double signed_area() const;
    double area() const;
    double perimeter() const;
    Polygon translated(double dx, double dy) const;
};

/// Equilateral triangle with counter-clockwise vertices; `rotation` is the
/// angle of the first vertex measured from the +x axis.
Polygon equilateral_triangle(Point2 center, double circumradius, double rotation);

enum class KochVariant { snowflake, anti_snowflake };

std::string to_string(KochVariant v);
KochVariant parse_koch_variant(const std::string& name);

inline constexpr int kMaxKochDepth = 8;

/// Replaces every edge by the four-segment Koch generator `depth` times; the
/// middle bump points outward for the snowflake and inward for the anti-snowflake.
Polygon koch_fractal(const Polygon& start, int depth, KochVariant variant);

/// Even-odd fill: a cell is inside iff its centre is inside the polygon.
BinaryMap rasterize_polygon(const Polygon& polygon, const SpatialDomain& domain);

// ---------------------------------------------------------------------------
// Region partitions

enum class Layout { univariate_snowflake, univariate_anti, snowflake_field, bivariate_snowflake, bivariate_anti };

std::string to_string(Layout layout);
Layout parse_layout(const std::string& name);
bool is_bivariate(Layout layout);

struct ShapePlacement {
    KochVariant variant = KochVariant::snowflake;
    Point2 center{};
    double circumradius = 10.0;
    int depth = 4;
    double rotation = 1.5707963267948966;  // first vertex points up
    int label = 1;
    /// When set, cells inside the shape are labelled by angular sector around
    /// `center`, one label per start-triangle vertex (the three anti-snowflake lobes).
    std::optional<std::vector<int>> sector_labels;
};

struct LayoutSpec {
    Layout layout = Layout::univariate_snowflake;
    SpatialDomain domain;
    int regions = 2;
    std::vector<ShapePlacement> shapes;  // later shapes win on overlap
};

/// Built-in placements: univariate shapes on 120 x 120, bivariate on 220 x 210.
LayoutSpec default_layout(Layout layout);

struct RegionPartition {
    SpatialDomain domain;
    std::vector<int> labels;  // row-major, 0 = background
    int regions = 1;

    int label(std::size_t cell) const { return labels[cell]; }
    BinaryMap region_mask(int k) const;
    std::size_t region_size(int k) const;
};

class LayoutError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

RegionPartition build_partition(const LayoutSpec& spec);

// ---------------------------------------------------------------------------
// Local distributions

/// Probability table over {0,1}^P, indexed by sum_p 2^p z_p.
struct LocalDistribution {
    int variables = 2;
    std::vector<double> probabilities;

    double probability(int outcome) const { return probabilities.at(static_cast<std::size_t>(outcome)); }
    /// Pr(Z_var = 1).
    double marginal(int var) const;
    /// Pr(all listed variables equal 1).
    double joint_ones(const std::vector<int>& vars) const;
};

/// Noise parameterisation: (p, q) per region from gamma, factorised table.
/// Bivariate regions: R0 (g, g), R1 (1-g, g), R2 (g, 1-g), R3 (1-g, 1-g);
/// univariate regions: R0 p = g, R1 p = 1-g.
LocalDistribution noise_distribution(double gamma, int region, int variables = 2);

struct InteractionParameters {
    double p0 = 0.25, c1 = 0.0, c2 = 0.0, c3 = 0.0;
    double p1() const { return p0 + c1; }
    double p2() const { return p0 + c2; }
    double p3() const { return p0 + c1 + c2 + c3; }
};

inline constexpr double kInteractionBaseP0 = 0.025;

InteractionParameters interaction_parameters(double c3, int region);
LocalDistribution interaction_distribution(double c3, int region);

struct DistributionModel {
    std::string kind;  // "noise" or "interaction"
    double parameter = 0.0;  // gamma or c3
    std::vector<LocalDistribution> regions;
    int variables() const { return regions.empty() ? 0 : regions.front().variables; }
};

DistributionModel noise_model(double gamma, int regions, int variables);
DistributionModel interaction_model(double c3);

struct CellSample {
    int cell_x = 0;  // 0-based cell origin, so the jittered x lies in [cell_x, cell_x + 1)
    int cell_y = 0;
    std::vector<int> z;
};

struct GeneratedDataset {
    Dataset dataset;
    std::vector<CellSample> cell_samples;
    std::uint64_t seed = 0;
    std::string generator;
};

inline constexpr double kValueJitter = 0.005;

/// Uniform cells, outcomes from the cell's region distribution, then jitter:
/// y = z + U[0, 0.005]^P and x = w + U[0, 1)^2 (w the cell's lower corner).
GeneratedDataset sample_dataset(const RegionPartition& partition, const DistributionModel& model, std::size_t n,
                                std::uint64_t seed);

/// Cells whose region has Pr(Z_var = 1) > 0.5.
BinaryMap target_map(const RegionPartition& partition, const DistributionModel& model, int variable);
/// Cells whose region has Pr(product of the listed variables = 1) > 0.5.
BinaryMap product_target_map(const RegionPartition& partition, const DistributionModel& model,
                             const std::vector<int>& variables);

/// Tabular stand-in for the empirical workflow: a 35 km square on a 250 m grid
/// with km-rounded locations, and planted spatial structure (raised diabetes
/// prevalence and a younger population in overlapping discs).
Dataset make_empirical_standin(std::size_t n, std::uint64_t seed);

}  // namespace geospm::synthetic
