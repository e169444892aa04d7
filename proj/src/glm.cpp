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

#include "geospm/glm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "geospm/kernels.hpp"

namespace geospm::glm {

// ---------------------------------------------------------------------------
// Design

DesignMatrix::DesignMatrix(std::vector<std::string> names, Eigen::MatrixXd matrix, bool has_constant)
    : names_(std::move(names)), x_(std::move(matrix)), has_constant_(has_constant) {
    if (static_cast<Eigen::Index>(names_.size()) != x_.cols()) throw DesignError("column names do not match design");
    if (x_.cols() == 0) throw DesignError("design has no columns");
    if (x_.rows() < x_.cols() + 1)
        throw DesignError("design needs more observations than columns for positive degrees of freedom");
    if (!x_.allFinite()) throw DesignError("design contains non-finite entries");
    std::set<std::string> seen;
    for (Eigen::Index c = 0; c < x_.cols(); ++c) {
        const auto& name = names_[static_cast<std::size_t>(c)];
        if (!seen.insert(name).second) throw DesignError("duplicate design column '" + name + "'");
        if (name != kConstantColumn && x_.col(c).cwiseAbs().maxCoeff() == 0.0)
            throw DesignError("design column '" + name + "' is all zero");
    }
}

std::vector<std::string> parse_column_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char ch) { return std::isspace(ch); }),
                   item.end());
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

namespace {

bool is_indicator(const Eigen::VectorXd& v) {
    std::set<double> distinct;
    for (Eigen::Index i = 0; i < v.size() && distinct.size() <= 2; ++i) distinct.insert(v[i]);
    return distinct.size() <= 2;
}

Eigen::VectorXd standardise(const Eigen::VectorXd& v) {
    const double mean = v.mean();
    const double n = static_cast<double>(v.size());
    const double sd = std::sqrt((v.array() - mean).square().sum() / std::max(1.0, n - 1.0));
    if (!(sd > 0.0)) return v.array() - mean;
    return (v.array() - mean) / sd;
}

}  // namespace

DesignMatrix DesignMatrix::from_dataset(const Dataset& data, const std::vector<std::string>& columns,
                                        const DesignOptions& options) {
    const auto n = static_cast<Eigen::Index>(data.size());
    std::vector<Eigen::VectorXd> cols;
    std::vector<std::string> names;

    auto base_column = [&](const std::string& name) {
        std::size_t idx;
        try {
            idx = data.variable_index(name);
        } catch (const std::out_of_range&) {
            throw DesignError("unknown column '" + name + "'");
        }
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = data.observations[static_cast<std::size_t>(i)].values.at(idx);
        if (options.zscore && !(options.keep_indicators && is_indicator(v))) v = standardise(v);
        return v;
    };

    if (options.include_constant) {
        cols.push_back(Eigen::VectorXd::Ones(n));
        names.emplace_back(kConstantColumn);
    }
    for (const auto& spec : columns) {
        const auto star = spec.find('*');
        if (star == std::string::npos) {
            cols.push_back(base_column(spec));
        } else {
            Eigen::VectorXd prod = Eigen::VectorXd::Ones(n);
            std::stringstream in(spec);
            std::string factor;
            while (std::getline(in, factor, '*')) prod = prod.cwiseProduct(base_column(factor));
            cols.push_back(prod);
        }
        names.push_back(spec);
    }
    Eigen::MatrixXd x(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) x.col(static_cast<Eigen::Index>(c)) = cols[c];
    return DesignMatrix(std::move(names), std::move(x), options.include_constant);
}

std::size_t DesignMatrix::column_index(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw DesignError("design has no column '" + name + "'");
    return static_cast<std::size_t>(it - names_.begin());
}

DesignMatrix DesignMatrix::subset(const std::vector<std::size_t>& columns) const {
    Eigen::MatrixXd x(x_.rows(), static_cast<Eigen::Index>(columns.size()));
    std::vector<std::string> names;
    bool constant = false;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        x.col(static_cast<Eigen::Index>(i)) = x_.col(static_cast<Eigen::Index>(columns[i]));
        names.push_back(names_.at(columns[i]));
        constant = constant || names.back() == kConstantColumn;
    }
    return DesignMatrix(std::move(names), std::move(x), constant);
}

// ---------------------------------------------------------------------------
// Contrasts

std::string to_string(Tail tail) {
    switch (tail) {
        case Tail::positive: return "pos";
        case Tail::negative: return "neg";
        case Tail::two_sided: return "two";
    }
    return "pos";
}

Tail parse_tail(const std::string& text) {
    if (text == "pos" || text == "positive") return Tail::positive;
    if (text == "neg" || text == "negative") return Tail::negative;
    if (text == "two" || text == "two-sided" || text == "two_sided" || text == "both") return Tail::two_sided;
    throw std::invalid_argument("unknown tail '" + text + "' (expected pos, neg or two)");
}

Contrast::Contrast(Eigen::VectorXd w, Tail t) : weights(std::move(w)), tail(t) {
    if (weights.size() == 0 || weights.cwiseAbs().maxCoeff() == 0.0) throw ContrastError("contrast is all zero");
}

Contrast Contrast::unit(const DesignMatrix& design, const std::string& column, Tail tail) {
    return unit(design.cols(), design.column_index(column), tail);
}

Contrast Contrast::unit(std::size_t columns, std::size_t index, Tail tail) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(columns));
    w[static_cast<Eigen::Index>(index)] = 1.0;
    return {w, tail};
}

// ---------------------------------------------------------------------------
// Fitting

std::pair<Eigen::MatrixXd, int> symmetric_pinv(const Eigen::MatrixXd& m, double tolerance) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    const auto& values = eig.eigenvalues();
    const double top = values.cwiseAbs().maxCoeff();
    const double cut = tolerance * top;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(values.size());
    int rank = 0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values[i] > cut) {
            inv[i] = 1.0 / values[i];
            ++rank;
        }
    }
    Eigen::MatrixXd pinv = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
    return {0.5 * (pinv + pinv.transpose()), rank};
}

GlmFit fit_glm(const smoothing::ResponseAccumulators& acc, std::size_t scale_index, const FitOptions& options) {
    const auto& scale = acc.scales.at(scale_index);
    GlmFit fit;
    fit.domain = acc.domain;
    fit.columns = acc.columns;
    fit.xtx = acc.xtx;
    fit.diameter = scale.diameter;
    auto [pinv, rank] = symmetric_pinv(acc.xtx, options.rank_tolerance);
    fit.xtx_pinv = std::move(pinv);
    fit.rank = rank;
    fit.df = static_cast<int>(acc.observations) - rank;
    if (fit.df <= 0) throw DesignError("non-positive residual degrees of freedom");

    const std::size_t C = acc.columns.size();
    fit.beta.assign(C, ScalarField(acc.domain));
    ScalarField rss(acc.domain);

    kernels::GlmCellsInput in;
    in.xtx_pinv = &fit.xtx_pinv;
    for (const auto& f : scale.weighted) in.xty.emplace_back(f.values());
    in.yty = scale.sum_squares.values();
    kernels::GlmCellsOutput out;
    for (auto& f : fit.beta) out.beta.emplace_back(f.values());
    out.rss = rss.values();
    if (options.parallel)
        kernels::glm_cells_parallel(in, out);
    else
        kernels::glm_cells_serial(in, out);
    fit.clamped_cells = out.clamped;

    const double inv_df = 1.0 / fit.df;
    for (std::size_t v = 0; v < rss.size(); ++v) rss[v] *= inv_df;
    fit.sigma2 = std::move(rss);
    return fit;
}

TField contrast_t_map(const GlmFit& fit, const Contrast& contrast) {
    const auto C = static_cast<Eigen::Index>(fit.columns.size());
    if (contrast.weights.size() != C) throw ContrastError("contrast length does not match design columns");
    const Eigen::VectorXd& c = contrast.weights;
    const double var_factor = c.dot(fit.xtx_pinv * c);
    // Estimable iff c lies in the row space of X, i.e. c = (X'X)(X'X)^+ c.
    const Eigen::VectorXd projected = fit.xtx * (fit.xtx_pinv * c);
    if (!(var_factor > 0.0) || (projected - c).norm() > 1e-8 * std::max(1.0, c.norm()))
        throw ContrastError("contrast is not estimable for this design");

    TField out;
    out.df = fit.df;
    out.t = ScalarField(fit.domain);
    const std::size_t cells = fit.sigma2.size();
    std::size_t degenerate = 0;
    for (std::size_t v = 0; v < cells; ++v) {
        double effect = 0.0;
        for (Eigen::Index k = 0; k < C; ++k) effect += c[k] * fit.beta[static_cast<std::size_t>(k)][v];
        const double s2 = fit.sigma2[v];
        if (s2 > 0.0) {
            out.t[v] = effect / std::sqrt(s2 * var_factor);
        } else {
            ++degenerate;
            out.t[v] = effect == 0.0 ? 0.0
                                     : std::copysign(std::numeric_limits<double>::infinity(), effect);
        }
    }
    out.degenerate_cells = degenerate;
    return out;
}

std::vector<ScalarField> residual_fields(const Dataset& dataset, const DesignMatrix& design, const GlmFit& fit,
                                         const smoothing::AccumulateOptions& options) {
    const auto kernel = smoothing::KernelSpec::from_diameter(fit.diameter, options.truncation_sigmas);
    std::vector<ScalarField> out;
    out.reserve(dataset.size());
    const auto& X = design.matrix();
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        Point2 p = dataset.observations[i].location;
        if (options.congruent) p = smoothing::congruent_location(dataset.domain, p);
        ScalarField e = smoothing::render_kernel(p, kernel, dataset.domain);
        for (std::size_t v = 0; v < e.size(); ++v) {
            double fitted = 0.0;
            for (std::size_t c = 0; c < fit.beta.size(); ++c)
                fitted += X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) * fit.beta[c][v];
            e[v] = options.amplitude * e[v] - fitted;
        }
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace geospm::glm
