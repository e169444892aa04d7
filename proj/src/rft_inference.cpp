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

#include "geospm/rft_inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/students_t.hpp>

namespace geospm::rft {

namespace {

const double kFwhmPerSigma = std::sqrt(8.0 * std::log(2.0));
const double kFourLn2 = 4.0 * std::log(2.0);

}  // namespace

double fwhm_from_sigma(double sigma) { return sigma * kFwhmPerSigma; }

int euler_characteristic(const BinaryMap& mask) {
    const int a = mask.domain().width();
    const int b = mask.domain().height();
    auto in = [&](int j, int k) {
        return j >= 0 && j < a && k >= 0 && k < b && mask[static_cast<std::size_t>(k) * a + j];
    };
    long vertices = 0, edges = 0, faces = 0;
    for (int k = 0; k <= b; ++k) {
        for (int j = 0; j <= a; ++j) {
            // Corner (j, k) touches cells (j-1..j, k-1..k).
            if (in(j - 1, k - 1) || in(j, k - 1) || in(j - 1, k) || in(j, k)) ++vertices;
            // Horizontal edge from (j, k) to (j+1, k): cells (j, k-1) and (j, k).
            if (j < a && (in(j, k - 1) || in(j, k))) ++edges;
            // Vertical edge from (j, k) to (j, k+1): cells (j-1, k) and (j, k).
            if (k < b && (in(j - 1, k) || in(j, k))) ++edges;
            if (j < a && k < b && in(j, k)) ++faces;
        }
    }
    return static_cast<int>(vertices - edges + faces);
}

std::array<double, 3> resel_counts(const BinaryMap& mask, double fwhm_x, double fwhm_y) {
    const int a = mask.domain().width();
    const int b = mask.domain().height();
    const double h = mask.domain().cell_size();
    auto in = [&](int j, int k) {
        return j >= 0 && j < a && k >= 0 && k < b && mask[static_cast<std::size_t>(k) * a + j];
    };
    long cells = 0, x_edges = 0, y_edges = 0;
    for (int k = 0; k < b; ++k) {
        for (int j = 0; j < a; ++j) {
            if (!in(j, k)) continue;
            ++cells;
            if (!in(j, k - 1)) ++x_edges;
            if (!in(j, k + 1)) ++x_edges;
            if (!in(j - 1, k)) ++y_edges;
            if (!in(j + 1, k)) ++y_edges;
        }
    }
    const double r0 = euler_characteristic(mask);
    const double r1 = 0.5 * (x_edges * h / fwhm_x + y_edges * h / fwhm_y);
    const double r2 = cells * h * h / (fwhm_x * fwhm_y);
    return {r0, r1, r2};
}

SmoothnessEstimate analytic_smoothness(const smoothing::KernelSpec& kernel, const SpatialDomain& domain,
                                       const BinaryMap& mask) {
    require_same_domain(domain, mask.domain(), "analytic_smoothness");
    if (mask.empty()) throw ThresholdError("search mask is empty");
    SmoothnessEstimate est;
    est.fwhm_x = est.fwhm_y = fwhm_from_sigma(kernel.sigma);
    est.resels = resel_counts(mask, est.fwhm_x, est.fwhm_y);
    est.source = "analytic";
    return est;
}

namespace {

SmoothnessEstimate finish_residual_estimate(double mean_dx, double mean_dy, std::size_t pairs_x,
                                            std::size_t pairs_y, const BinaryMap& mask) {
    SmoothnessEstimate est;
    est.source = "residual";
    const double h = mask.domain().cell_size();
    auto axis_fwhm = [&](double mean_d, std::size_t pairs) {
        if (pairs == 0 || !(mean_d > 0.0) || !(mean_d < 2.0)) return std::numeric_limits<double>::infinity();
        const double lambda = -2.0 * std::log(1.0 - 0.5 * mean_d);  // per cell^2
        return std::sqrt(kFourLn2 / lambda) * h;
    };
    est.fwhm_x = axis_fwhm(mean_dx, pairs_x);
    est.fwhm_y = axis_fwhm(mean_dy, pairs_y);
    if (!std::isfinite(est.fwhm_x) || !std::isfinite(est.fwhm_y)) {
        est.degenerate = true;
        est.resels = {static_cast<double>(euler_characteristic(mask)), 0.0, 0.0};
    } else {
        est.resels = resel_counts(mask, est.fwhm_x, est.fwhm_y);
    }
    return est;
}

}  // namespace

SmoothnessEstimate residual_smoothness(std::span<const ScalarField> residuals, const BinaryMap& mask) {
    if (residuals.size() < 3) throw ThresholdError("residual smoothness needs at least 3 residual images");
    if (mask.empty()) throw ThresholdError("search mask is empty");
    const auto& dom = mask.domain();
    for (const auto& r : residuals) require_same_domain(dom, r.domain(), "residual_smoothness");
    const int a = dom.width();
    const int b = dom.height();
    const std::size_t cells = dom.cell_count();

    std::vector<double> norm(cells, 0.0);
    for (const auto& r : residuals)
        for (std::size_t v = 0; v < cells; ++v) norm[v] += r[v] * r[v];
    for (auto& x : norm) x = x > 0.0 ? 1.0 / std::sqrt(x) : 0.0;

    double sum_x = 0.0, sum_y = 0.0;
    std::size_t pairs_x = 0, pairs_y = 0;
    for (int k = 0; k < b; ++k) {
        for (int j = 0; j < a; ++j) {
            const std::size_t v = static_cast<std::size_t>(k) * a + j;
            if (!mask[v] || norm[v] == 0.0) continue;
            if (j + 1 < a && mask[v + 1] && norm[v + 1] > 0.0) {
                double d = 0.0;
                for (const auto& r : residuals) {
                    const double diff = r[v + 1] * norm[v + 1] - r[v] * norm[v];
                    d += diff * diff;
                }
                sum_x += d;
                ++pairs_x;
            }
            const std::size_t up = v + static_cast<std::size_t>(a);
            if (k + 1 < b && mask[up] && norm[up] > 0.0) {
                double d = 0.0;
                for (const auto& r : residuals) {
                    const double diff = r[up] * norm[up] - r[v] * norm[v];
                    d += diff * diff;
                }
                sum_y += d;
                ++pairs_y;
            }
        }
    }
    return finish_residual_estimate(pairs_x ? sum_x / pairs_x : 0.0, pairs_y ? sum_y / pairs_y : 0.0, pairs_x,
                                    pairs_y, mask);
}

SmoothnessEstimate residual_smoothness(const smoothing::ResponseAccumulators& acc, std::size_t scale_index,
                                       const glm::GlmFit& fit, const BinaryMap& mask) {
    const auto& s = acc.scales.at(scale_index);
    if (!s.lag_x || !s.lag_y) throw ThresholdError("accumulators were built without lag products");
    if (acc.observations < 3) throw ThresholdError("residual smoothness needs at least 3 residual images");
    if (mask.empty()) throw ThresholdError("search mask is empty");
    const auto& dom = mask.domain();
    const int a = dom.width();
    const int b = dom.height();
    const std::size_t C = acc.columns.size();
    const Eigen::MatrixXd& xtx = acc.xtx;

    auto beta_at = [&](std::size_t v) {
        Eigen::VectorXd be(static_cast<Eigen::Index>(C));
        for (std::size_t c = 0; c < C; ++c) be[static_cast<Eigen::Index>(c)] = fit.beta[c][v];
        return be;
    };
    auto xty_at = [&](std::size_t v) {
        Eigen::VectorXd x(static_cast<Eigen::Index>(C));
        for (std::size_t c = 0; c < C; ++c) x[static_cast<Eigen::Index>(c)] = s.weighted[c][v];
        return x;
    };
    // sum_i e_i(v)^2, recomputed without clamping.
    auto rss_at = [&](std::size_t v) { return s.sum_squares[v] - xty_at(v).dot(beta_at(v)); };
    auto cross = [&](std::size_t v, std::size_t w, double lag) {
        const Eigen::VectorXd bv = beta_at(v), bw = beta_at(w);
        return lag - bv.dot(xty_at(w)) - bw.dot(xty_at(v)) + bv.dot(xtx * bw);
    };

    double sum_x = 0.0, sum_y = 0.0;
    std::size_t pairs_x = 0, pairs_y = 0;
    for (int k = 0; k < b; ++k) {
        for (int j = 0; j < a; ++j) {
            const std::size_t v = static_cast<std::size_t>(k) * a + j;
            if (!mask[v]) continue;
            const double sv = rss_at(v);
            if (!(sv > 0.0)) continue;
            if (j + 1 < a && mask[v + 1]) {
                const double sw = rss_at(v + 1);
                if (sw > 0.0) {
                    const double rho = cross(v, v + 1, (*s.lag_x)[v]) / std::sqrt(sv * sw);
                    sum_x += 2.0 - 2.0 * rho;
                    ++pairs_x;
                }
            }
            const std::size_t up = v + static_cast<std::size_t>(a);
            if (k + 1 < b && mask[up]) {
                const double sw = rss_at(up);
                if (sw > 0.0) {
                    const double rho = cross(v, up, (*s.lag_y)[v]) / std::sqrt(sv * sw);
                    sum_y += 2.0 - 2.0 * rho;
                    ++pairs_y;
                }
            }
        }
    }
    return finish_residual_estimate(pairs_x ? sum_x / pairs_x : 0.0, pairs_y ? sum_y / pairs_y : 0.0, pairs_x,
                                    pairs_y, mask);
}

double ec_density_t(double t, double nu, int dim) {
    const double base = std::pow(1.0 + t * t / nu, -(nu - 1.0) / 2.0);
    switch (dim) {
        case 0: {
            boost::math::students_t dist(nu);
            return boost::math::cdf(boost::math::complement(dist, t));
        }
        case 1:
            return std::sqrt(kFourLn2) / (2.0 * std::numbers::pi) * base;
        case 2: {
            const double g = std::exp(std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0)) / std::sqrt(nu / 2.0);
            return kFourLn2 / std::pow(2.0 * std::numbers::pi, 1.5) * g * t * base;
        }
        default:
            throw std::invalid_argument("EC density dimension must be 0, 1 or 2");
    }
}

double expected_ec(double u, double nu, const std::array<double, 3>& resels) {
    double e = 0.0;
    for (int d = 0; d < 3; ++d) {
        if (resels[static_cast<std::size_t>(d)] != 0.0) e += resels[static_cast<std::size_t>(d)] * ec_density_t(u, nu, d);
    }
    return e;
}

std::string to_string(Correction c) {
    switch (c) {
        case Correction::rft: return "rft";
        case Correction::bonferroni: return "bonferroni";
        case Correction::min_of_both: return "min";
    }
    return "min";
}

Correction parse_correction(const std::string& text) {
    if (text == "rft") return Correction::rft;
    if (text == "bonferroni") return Correction::bonferroni;
    if (text == "min" || text == "min-of-both" || text == "min_of_both") return Correction::min_of_both;
    throw std::invalid_argument("unknown correction '" + text + "'");
}

void ThresholdSpec::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ThresholdError("alpha must lie in (0, 1)");
}

double t_upper_quantile(double p, double nu) {
    boost::math::students_t dist(nu);
    return boost::math::quantile(boost::math::complement(dist, p));
}

namespace {

constexpr double kUpperBracket = 100.0;

double rft_threshold(double alpha, double nu, const std::array<double, 3>& resels) {
    double lo = t_upper_quantile(alpha, nu);
    if (expected_ec(lo, nu, resels) <= alpha) return lo;
    double hi = kUpperBracket;
    if (expected_ec(hi, nu, resels) > alpha) throw ThresholdError("no RFT threshold in (0, 100)");
    // E[EC] is strictly decreasing on [t_alpha, 100] for positive resel counts.
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (expected_ec(mid, nu, resels) > alpha)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

}  // namespace

double fwe_threshold(const ThresholdSpec& spec, double nu, const SmoothnessEstimate& smoothness,
                     std::size_t n_cells) {
    spec.validate();
    if (!(nu >= 1.0)) throw ThresholdError("degrees of freedom must be at least 1");
    if (n_cells == 0) throw ThresholdError("search region has no cells");
    const double alpha = spec.tail == glm::Tail::two_sided ? spec.alpha / 2.0 : spec.alpha;
    const double bonferroni = t_upper_quantile(alpha / static_cast<double>(n_cells), nu);
    if (spec.correction == Correction::bonferroni) return bonferroni;
    if (smoothness.degenerate) {
        if (spec.correction == Correction::rft) throw ThresholdError("smoothness estimate is degenerate");
        return bonferroni;
    }
    const double rft = rft_threshold(alpha, nu, smoothness.resels);
    if (spec.correction == Correction::rft) return rft;
    return std::min(rft, bonferroni);
}

BinaryMap threshold_map(const ScalarField& t, double threshold, glm::Tail tail, const BinaryMap& mask) {
    require_same_domain(t.domain(), mask.domain(), "threshold_map");
    if (!(threshold > 0.0)) throw ThresholdError("threshold must be positive");
    BinaryMap out(t.domain());
    for (std::size_t v = 0; v < t.size(); ++v) {
        if (!mask[v]) continue;
        bool hit = false;
        switch (tail) {
            case glm::Tail::positive: hit = t[v] >= threshold; break;
            case glm::Tail::negative: hit = t[v] <= -threshold; break;
            case glm::Tail::two_sided: hit = std::abs(t[v]) >= threshold; break;
        }
        out.set(v, hit);
    }
    return out;
}

SignedMaps split_two_sided(const ScalarField& t, double threshold, const BinaryMap& mask) {
    return {threshold_map(t, threshold, glm::Tail::positive, mask),
            threshold_map(t, threshold, glm::Tail::negative, mask)};
}

}  // namespace geospm::rft
