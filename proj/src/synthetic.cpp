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

#include "geospm/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "geospm/rng.hpp"

namespace geospm::synthetic {

// ---------------------------------------------------------------------------
// Geometry

double Polygon::signed_area() const {
    double s = 0.0;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = vertices[i];
        const auto& q = vertices[(i + 1) % n];
        s += p.x * q.y - q.x * p.y;
    }
    return 0.5 * s;
}

double Polygon::area() const { return std::abs(signed_area()); }

double Polygon::perimeter() const {
    double s = 0.0;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = vertices[i];
        const auto& q = vertices[(i + 1) % n];
        s += std::hypot(q.x - p.x, q.y - p.y);
    }
    return s;
}

Polygon Polygon::translated(double dx, double dy) const {
    Polygon out = *this;
    for (auto& v : out.vertices) {
        v.x += dx;
        v.y += dy;
    }
    return out;
}

Polygon equilateral_triangle(Point2 center, double r, double rotation) {
    Polygon tri;
    for (int i = 0; i < 3; ++i) {
        const double a = rotation + 2.0 * std::numbers::pi * i / 3.0;
        tri.vertices.push_back({center.x + r * std::cos(a), center.y + r * std::sin(a)});
    }
    return tri;
}

std::string to_string(KochVariant v) { return v == KochVariant::snowflake ? "snowflake" : "anti_snowflake"; }

KochVariant parse_koch_variant(const std::string& name) {
    if (name == "snowflake") return KochVariant::snowflake;
    if (name == "anti_snowflake" || name == "anti") return KochVariant::anti_snowflake;
    throw LayoutError("unknown Koch variant '" + name + "'");
}

Polygon koch_fractal(const Polygon& start, int depth, KochVariant variant) {
    if (depth < 0) throw LayoutError("Koch depth must be non-negative");
    if (depth > kMaxKochDepth) throw LayoutError("Koch depth above 8 refused (vertex blow-up)");
    if (start.vertices.size() < 3) throw LayoutError("start polygon needs at least 3 vertices");
    Polygon current = start;
    // Orientation decides which side is "outward".
    const double orientation = start.signed_area() >= 0.0 ? 1.0 : -1.0;
    const double sign = (variant == KochVariant::snowflake ? 1.0 : -1.0) * orientation;
    const double bump = std::sqrt(3.0) / 6.0;
    for (int level = 0; level < depth; ++level) {
        Polygon next;
        const std::size_t n = current.vertices.size();
        next.vertices.reserve(4 * n);
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 a = current.vertices[i];
            const Point2 b = current.vertices[(i + 1) % n];
            const double dx = b.x - a.x, dy = b.y - a.y;
            next.vertices.push_back(a);
            next.vertices.push_back({a.x + dx / 3.0, a.y + dy / 3.0});
            next.vertices.push_back({a.x + dx / 2.0 + sign * bump * dy, a.y + dy / 2.0 - sign * bump * dx});
            next.vertices.push_back({a.x + 2.0 * dx / 3.0, a.y + 2.0 * dy / 3.0});
        }
        current = std::move(next);
    }
    return current;
}

BinaryMap rasterize_polygon(const Polygon& polygon, const SpatialDomain& domain) {
    BinaryMap mask(domain);
    if (polygon.vertices.size() < 3 || polygon.area() == 0.0) return mask;
    const double h = domain.cell_size();
    const std::size_t n = polygon.vertices.size();
    std::vector<double> crossings;
    for (int k = 1; k <= domain.height(); ++k) {
        const double y = (k - 0.5) * h + domain.origin().y;
        crossings.clear();
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 p = polygon.vertices[i];
            const Point2 q = polygon.vertices[(i + 1) % n];
            if ((p.y > y) != (q.y > y)) crossings.push_back(p.x + (y - p.y) * (q.x - p.x) / (q.y - p.y));
        }
        std::sort(crossings.begin(), crossings.end());
        // Centres in [left, right) of each crossing pair are inside.
        for (std::size_t c = 0; c + 1 < crossings.size(); c += 2) {
            const double left = (crossings[c] - domain.origin().x) / h;
            const double right = (crossings[c + 1] - domain.origin().x) / h;
            const int j_first = std::max(1, static_cast<int>(std::ceil(left - 0.5)) + 1);
            const int j_last = std::min(domain.width(), static_cast<int>(std::ceil(right - 0.5)));
            for (int j = j_first; j <= j_last; ++j) mask.set(CellIndex{j, k}, true);
        }
    }
    return mask;
}

// ---------------------------------------------------------------------------
// Layouts

std::string to_string(Layout layout) {
    switch (layout) {
        case Layout::univariate_snowflake: return "univariate_snowflake";
        case Layout::univariate_anti: return "univariate_anti";
        case Layout::snowflake_field: return "snowflake_field";
        case Layout::bivariate_snowflake: return "bivariate_snowflake";
        case Layout::bivariate_anti: return "bivariate_anti";
    }
    return "univariate_snowflake";
}

Layout parse_layout(const std::string& name) {
    for (auto l : {Layout::univariate_snowflake, Layout::univariate_anti, Layout::snowflake_field,
                   Layout::bivariate_snowflake, Layout::bivariate_anti})
        if (to_string(l) == name) return l;
    throw LayoutError("unknown layout '" + name + "'");
}

bool is_bivariate(Layout layout) {
    return layout == Layout::bivariate_snowflake || layout == Layout::bivariate_anti;
}

LayoutSpec default_layout(Layout layout) {
    LayoutSpec spec;
    spec.layout = layout;
    switch (layout) {
        case Layout::univariate_snowflake:
        case Layout::univariate_anti: {
            spec.domain = SpatialDomain(120, 120);
            spec.regions = 2;
            ShapePlacement s;
            s.variant = layout == Layout::univariate_snowflake ? KochVariant::snowflake : KochVariant::anti_snowflake;
            s.center = {60.0, 60.0};
            s.circumradius = 45.0;
            s.depth = 4;
            spec.shapes.push_back(s);
            break;
        }
        case Layout::snowflake_field: {
            spec.domain = SpatialDomain(120, 120);
            spec.regions = 2;
            for (double cy : {20.0, 60.0, 100.0}) {
                for (double cx : {20.0, 60.0, 100.0}) {
                    ShapePlacement s;
                    s.center = {cx, cy};
                    s.circumradius = 15.0;
                    s.depth = 2;
                    spec.shapes.push_back(s);
                }
            }
            break;
        }
        case Layout::bivariate_snowflake: {
            spec.domain = SpatialDomain(220, 210);
            spec.regions = 4;
            const Point2 centers[3] = {{60.0, 62.0}, {160.0, 62.0}, {110.0, 150.0}};
            for (int i = 0; i < 3; ++i) {
                ShapePlacement s;
                s.center = centers[i];
                s.circumradius = 48.0;
                s.depth = 4;
                s.label = i + 1;
                spec.shapes.push_back(s);
            }
            break;
        }
        case Layout::bivariate_anti: {
            spec.domain = SpatialDomain(220, 210);
            spec.regions = 4;
            ShapePlacement s;
            s.variant = KochVariant::anti_snowflake;
            s.center = {110.0, 105.0};
            s.circumradius = 100.0;
            s.depth = 4;
            s.sector_labels = std::vector<int>{1, 2, 3};
            spec.shapes.push_back(s);
            break;
        }
    }
    return spec;
}

BinaryMap RegionPartition::region_mask(int k) const {
    BinaryMap m(domain);
    for (std::size_t v = 0; v < labels.size(); ++v) m.set(v, labels[v] == k);
    return m;
}

std::size_t RegionPartition::region_size(int k) const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), k));
}

RegionPartition build_partition(const LayoutSpec& spec) {
    RegionPartition part;
    part.domain = spec.domain;
    part.labels.assign(spec.domain.cell_count(), 0);
    const auto& dom = spec.domain;
    const double xmax = dom.origin().x + dom.width() * dom.cell_size();
    const double ymax = dom.origin().y + dom.height() * dom.cell_size();
    int max_label = 0;
    for (const auto& s : spec.shapes) {
        const Polygon start = equilateral_triangle(s.center, s.circumradius, s.rotation);
        const Polygon poly = koch_fractal(start, s.depth, s.variant);
        for (const auto& v : poly.vertices) {
            if (v.x < dom.origin().x || v.x > xmax || v.y < dom.origin().y || v.y > ymax)
                throw LayoutError("shape outside the domain");
        }
        const BinaryMap inside = rasterize_polygon(poly, dom);
        for (std::size_t c = 0; c < inside.size(); ++c) {
            if (!inside[c]) continue;
            int label = s.label;
            if (s.sector_labels) {
                const auto& sectors = *s.sector_labels;
                const Point2 p = cell_center(dom, dom.cell_at(c));
                const double theta = std::atan2(p.y - s.center.y, p.x - s.center.x);
                double best = 1e300;
                for (std::size_t i = 0; i < sectors.size(); ++i) {
                    const double vertex = s.rotation + 2.0 * std::numbers::pi * static_cast<double>(i) /
                                                           static_cast<double>(sectors.size());
                    const double d = std::abs(std::remainder(theta - vertex, 2.0 * std::numbers::pi));
                    if (d < best) {
                        best = d;
                        label = sectors[i];
                    }
                }
            }
            part.labels[c] = label;
            max_label = std::max(max_label, label);
        }
    }
    part.regions = max_label + 1;
    for (int k = 0; k < part.regions; ++k) {
        if (part.region_size(k) == 0) throw LayoutError("region " + std::to_string(k) + " has no cells");
    }
    return part;
}

// ---------------------------------------------------------------------------
// Distributions

double LocalDistribution::marginal(int var) const {
    double p = 0.0;
    for (std::size_t o = 0; o < probabilities.size(); ++o)
        if ((o >> var) & 1u) p += probabilities[o];
    return p;
}

double LocalDistribution::joint_ones(const std::vector<int>& vars) const {
    double p = 0.0;
    for (std::size_t o = 0; o < probabilities.size(); ++o) {
        bool all = true;
        for (int v : vars) all = all && ((o >> v) & 1u);
        if (all) p += probabilities[o];
    }
    return p;
}

LocalDistribution noise_distribution(double gamma, int region, int variables) {
    if (!(gamma >= 0.0 && gamma <= 0.5)) throw DomainError("gamma must lie in [0, 0.5]");
    LocalDistribution d;
    d.variables = variables;
    if (variables == 1) {
        if (region < 0 || region > 1) throw DomainError("univariate region must be 0 or 1");
        const double p = region == 1 ? 1.0 - gamma : gamma;
        d.probabilities = {1.0 - p, p};
        return d;
    }
    if (variables != 2) throw DomainError("noise model supports 1 or 2 variables");
    if (region < 0 || region > 3) throw DomainError("bivariate region must lie in 0..3");
    const double p = (region & 1) ? 1.0 - gamma : gamma;
    const double q = (region & 2) ? 1.0 - gamma : gamma;
    // Index = z1 + 2 z2.
    d.probabilities = {(1.0 - q) * (1.0 - p), (1.0 - q) * p, q * (1.0 - p), q * p};
    return d;
}

InteractionParameters interaction_parameters(double c3, int region) {
    if (!(c3 >= 0.0 && c3 <= 0.9)) throw DomainError("interaction effect c3 must lie in [0, 0.9]");
    switch (region) {
        case 0: return {0.25, 0.0, 0.0, 0.0};
        case 1: return {0.125, 0.25, 0.0, 0.0};
        case 2: return {0.125, 0.0, 0.25, 0.0};
        case 3: {
            const double c = (1.0 - 4.0 * kInteractionBaseP0 - c3) / 4.0;
            return {kInteractionBaseP0, c, c, c3};
        }
        default: throw DomainError("interaction region must lie in 0..3");
    }
}

LocalDistribution interaction_distribution(double c3, int region) {
    const auto ip = interaction_parameters(c3, region);
    LocalDistribution d;
    d.variables = 2;
    d.probabilities = {ip.p0, ip.p1(), ip.p2(), ip.p3()};
    for (double p : d.probabilities)
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("interaction parameters give an invalid probability");
    return d;
}

DistributionModel noise_model(double gamma, int regions, int variables) {
    DistributionModel m;
    m.kind = "noise";
    m.parameter = gamma;
    for (int k = 0; k < regions; ++k) m.regions.push_back(noise_distribution(gamma, k, variables));
    return m;
}

DistributionModel interaction_model(double c3) {
    DistributionModel m;
    m.kind = "interaction";
    m.parameter = c3;
    for (int k = 0; k < 4; ++k) m.regions.push_back(interaction_distribution(c3, k));
    return m;
}

GeneratedDataset sample_dataset(const RegionPartition& partition, const DistributionModel& model, std::size_t n,
                                std::uint64_t seed) {
    if (n == 0) throw DomainError("sample size must be positive");
    if (static_cast<int>(model.regions.size()) != partition.regions)
        throw DomainError("distribution model and partition disagree on the number of regions");
    const int P = model.variables();
    const auto& dom = partition.domain;
    const Philox4x32 rng(seed);
    const std::size_t cells = dom.cell_count();

    GeneratedDataset out;
    out.seed = seed;
    out.generator = std::string(Philox4x32::algorithm_id);
    out.dataset.domain = dom;
    for (int p = 0; p < P; ++p) out.dataset.variable_names.push_back("z" + std::to_string(p + 1));
    out.dataset.observations.resize(n);
    out.cell_samples.resize(n);

    // Streams: 0 = cell + outcome, 1 = location jitter, 2.. = value jitter (two variables per block).
    for (std::size_t i = 0; i < n; ++i) {
        const auto [u_cell, u_z] = rng.uniform_pair(0, i);
        const auto cell = std::min(cells - 1, static_cast<std::size_t>(u_cell * static_cast<double>(cells)));
        const CellIndex w = dom.cell_at(cell);
        const auto& dist = model.regions.at(static_cast<std::size_t>(partition.labels[cell]));
        int outcome = static_cast<int>(dist.probabilities.size()) - 1;
        double acc = 0.0;
        for (std::size_t o = 0; o < dist.probabilities.size(); ++o) {
            acc += dist.probabilities[o];
            if (u_z < acc) {
                outcome = static_cast<int>(o);
                break;
            }
        }
        // Zero-probability outcomes are never selected, even when rounding leaves acc < 1.
        while (dist.probabilities[static_cast<std::size_t>(outcome)] == 0.0 && outcome > 0) --outcome;

        const auto [wx, wy] = rng.uniform_pair(1, i);
        auto& cs = out.cell_samples[i];
        cs.cell_x = w.j - 1;
        cs.cell_y = w.k - 1;
        auto& obs = out.dataset.observations[i];
        obs.location = {dom.origin().x + (cs.cell_x + wx) * dom.cell_size(),
                        dom.origin().y + (cs.cell_y + wy) * dom.cell_size()};
        obs.values.resize(static_cast<std::size_t>(P));
        cs.z.resize(static_cast<std::size_t>(P));
        for (int p = 0; p < P; p += 2) {
            const auto jitter = rng.uniform_pair(2 + static_cast<std::uint64_t>(p / 2), i);
            for (int q = p; q < std::min(P, p + 2); ++q) {
                const int z = (outcome >> q) & 1;
                cs.z[static_cast<std::size_t>(q)] = z;
                obs.values[static_cast<std::size_t>(q)] = z + kValueJitter * jitter[static_cast<std::size_t>(q - p)];
            }
        }
    }
    return out;
}

BinaryMap target_map(const RegionPartition& partition, const DistributionModel& model, int variable) {
    return product_target_map(partition, model, {variable});
}

BinaryMap product_target_map(const RegionPartition& partition, const DistributionModel& model,
                             const std::vector<int>& variables) {
    for (int v : variables)
        if (v < 0 || v >= model.variables()) throw DomainError("variable index out of range");
    std::vector<bool> in_target;
    for (const auto& d : model.regions) in_target.push_back(d.joint_ones(variables) > 0.5);
    BinaryMap out(partition.domain);
    for (std::size_t c = 0; c < out.size(); ++c) out.set(c, in_target.at(static_cast<std::size_t>(partition.labels[c])));
    return out;
}

// ---------------------------------------------------------------------------
// Empirical stand-in

namespace {

double normal_from(const Philox4x32& rng, std::uint64_t stream, std::uint64_t i) {
    const auto [u1, u2] = rng.uniform_pair(stream, i);
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

bool in_disc(double x, double y, double cx, double cy, double r) {
    return (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r;
}

}  // namespace

Dataset make_empirical_standin(std::size_t n, std::uint64_t seed) {
    Dataset d;
    d.domain = SpatialDomain(140, 140, {388000.0, 269000.0}, 250.0);
    d.variable_names = {"diabetes", "sex", "age", "bmi", "income"};
    const Philox4x32 rng(seed);
    d.observations.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [ux, uy] = rng.uniform_pair(0, i);
        const int kx = std::min(34, static_cast<int>(ux * 35.0));
        const int ky = std::min(34, static_cast<int>(uy * 35.0));
        const double xkm = kx, ykm = ky;
        const bool high_prevalence = in_disc(xkm, ykm, 12.0, 13.0, 7.0);
        const bool young = in_disc(xkm, ykm, 17.0, 16.0, 7.0);

        const auto [u_sex, u_diab] = rng.uniform_pair(1, i);
        const double sex = u_sex < 0.5 ? 1.0 : 0.0;
        const double age = std::round(58.0 - (young ? 9.0 : 0.0) + 7.5 * normal_from(rng, 2, i));
        const double bmi = std::round((27.5 + 4.5 * normal_from(rng, 3, i)) * 10.0) / 10.0;
        const double income_mean = 3.2 - 1.2 * (xkm / 35.0 - 0.5);
        const double income = std::clamp(std::round(income_mean + 1.1 * normal_from(rng, 4, i)), 1.0, 5.0);
        const double logit = -2.6 + 0.6 * sex + 0.03 * (age - 57.0) + 0.12 * (bmi - 27.5) - 0.3 * (income - 3.0) +
                             (high_prevalence ? 1.4 : 0.0);
        const double diabetes = u_diab < 1.0 / (1.0 + std::exp(-logit)) ? 1.0 : 0.0;

        Observation o;
        o.location = {d.domain.origin().x + 1000.0 * kx, d.domain.origin().y + 1000.0 * ky};
        o.values = {diabetes, sex, age, bmi, income};
        d.observations.push_back(std::move(o));
    }
    return d;
}

}  // namespace geospm::synthetic
