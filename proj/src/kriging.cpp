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

#include "geospm/kriging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "geospm/kernels.hpp"

namespace geospm::kriging {

std::string to_string(CovarianceFamily family) { return family == CovarianceFamily::matern ? "matern" : "gaussian"; }

CovarianceFamily parse_family(const std::string& name) {
    if (name == "matern") return CovarianceFamily::matern;
    if (name == "gaussian") return CovarianceFamily::gaussian;
    throw std::invalid_argument("unknown covariance family '" + name + "' (expected matern or gaussian)");
}

void CovarianceModel::validate() const {
    if (!(partial_sill >= 0.0) || !(nugget >= 0.0)) throw KrigingError("sill components must be non-negative");
    if (!(partial_sill + nugget > 0.0)) throw KrigingError("total sill must be positive");
    if (!(range_phi > 0.0) || !std::isfinite(range_phi)) throw KrigingError("range must be positive and finite");
    if (family == CovarianceFamily::matern && kappa != 0.5 && kappa != 1.5 && kappa != 2.5)
        throw KrigingError("Matern smoothness must be 0.5, 1.5 or 2.5");
}

std::string to_string(CoincidencePolicy policy) {
    return policy == CoincidencePolicy::average ? "average" : "jitter-assumed";
}

CoincidencePolicy parse_coincidence_policy(const std::string& text) {
    if (text == "average") return CoincidencePolicy::average;
    if (text == "jitter-assumed" || text == "jitter_assumed" || text == "jitter") return CoincidencePolicy::jitter_assumed;
    throw std::invalid_argument("unknown coincidence policy '" + text + "'");
}

Dataset coincidence_policy(const Dataset& dataset, CoincidencePolicy policy) {
    std::map<std::pair<double, double>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto& p = dataset.observations[i].location;
        groups[{p.x, p.y}].push_back(i);
    }
    if (groups.size() == dataset.size()) return dataset;
    if (policy == CoincidencePolicy::jitter_assumed) {
        for (const auto& [loc, rows] : groups) {
            if (rows.size() < 2) continue;
            std::ostringstream msg;
            msg << "coincident observations at rows";
            for (auto r : rows) msg << ' ' << r;
            msg << " (location " << loc.first << ", " << loc.second << ")";
            throw KrigingError(msg.str());
        }
    }
    // Keep first-occurrence order.
    Dataset out;
    out.domain = dataset.domain;
    out.variable_names = dataset.variable_names;
    std::vector<bool> done(dataset.size(), false);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (done[i]) continue;
        const auto& p = dataset.observations[i].location;
        const auto& rows = groups[{p.x, p.y}];
        Observation merged;
        merged.location = p;
        merged.values.assign(dataset.variable_count(), 0.0);
        for (auto r : rows) {
            done[r] = true;
            for (std::size_t v = 0; v < merged.values.size(); ++v) merged.values[v] += dataset.observations[r].values[v];
        }
        for (auto& v : merged.values) v /= static_cast<double>(rows.size());
        out.observations.push_back(std::move(merged));
    }
    return out;
}

double default_max_lag(const SpatialDomain& domain) {
    const double w = domain.width() * domain.cell_size();
    const double h = domain.height() * domain.cell_size();
    return std::hypot(w, h) / 3.0;
}

EmpiricalVariogram empirical_variogram(const Dataset& dataset, std::size_t variable, std::size_t n_bins,
                                       double max_lag) {
    if (dataset.size() < 2) throw KrigingError("variogram needs at least 2 observations");
    if (n_bins == 0) throw KrigingError("variogram needs at least one bin");
    if (!(max_lag > 0.0)) throw KrigingError("variogram cutoff must be positive");
    if (variable >= dataset.variable_count()) throw KrigingError("variable index out of range");
    std::vector<double> lag_sum(n_bins, 0.0), sq_sum(n_bins, 0.0);
    std::vector<std::size_t> count(n_bins, 0);
    bool any_distinct = false;
    const double width = max_lag / static_cast<double>(n_bins);
    const auto& obs = dataset.observations;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        for (std::size_t j = i + 1; j < obs.size(); ++j) {
            const double h = std::hypot(obs[i].location.x - obs[j].location.x, obs[i].location.y - obs[j].location.y);
            if (h == 0.0) continue;
            any_distinct = true;
            if (h > max_lag) continue;
            const auto b = std::min(n_bins - 1, static_cast<std::size_t>(h / width));
            const double d = obs[i].values[variable] - obs[j].values[variable];
            lag_sum[b] += h;
            sq_sum[b] += d * d;
            ++count[b];
        }
    }
    if (!any_distinct) throw KrigingError("all observation locations coincide");
    EmpiricalVariogram ev;
    for (std::size_t b = 0; b < n_bins; ++b) {
        if (count[b] == 0) continue;
        const double n = static_cast<double>(count[b]);
        ev.bins.push_back({lag_sum[b] / n, sq_sum[b] / (2.0 * n), count[b]});
    }
    return ev;
}

namespace {

struct SillFit {
    double nugget = 0.0;
    double psill = 0.0;
    double loss = std::numeric_limits<double>::infinity();
};

// Best non-negative (nugget, partial sill) for a fixed range.
SillFit fit_sills(const EmpiricalVariogram& ev, CovarianceModel shape) {
    shape.partial_sill = 1.0;
    shape.nugget = 0.0;
    double sw = 0, swa = 0, swaa = 0, swg = 0, swag = 0;
    std::vector<double> a(ev.bins.size()), w(ev.bins.size());
    for (std::size_t i = 0; i < ev.bins.size(); ++i) {
        const auto& b = ev.bins[i];
        w[i] = static_cast<double>(b.pairs) / (b.lag * b.lag);
        a[i] = 1.0 - shape.correlation(b.lag);
        sw += w[i];
        swa += w[i] * a[i];
        swaa += w[i] * a[i] * a[i];
        swg += w[i] * b.gamma;
        swag += w[i] * a[i] * b.gamma;
    }
    auto loss = [&](double n, double s) {
        double l = 0.0;
        for (std::size_t i = 0; i < ev.bins.size(); ++i) {
            const double r = ev.bins[i].gamma - n - s * a[i];
            l += w[i] * r * r;
        }
        return l;
    };
    SillFit best;
    auto consider = [&](double n, double s) {
        if (!(n >= 0.0) || !(s >= 0.0)) return;
        const double l = loss(n, s);
        if (l < best.loss) best = {n, s, l};
    };
    consider(swg / sw, 0.0);  // pure nugget first so it wins ties
    if (swaa > 0.0) consider(0.0, swag / swaa);
    const double det = sw * swaa - swa * swa;
    if (std::abs(det) > 1e-14 * sw * swaa) consider((swaa * swg - swa * swag) / det, (sw * swag - swa * swg) / det);
    return best;
}

}  // namespace

FitReport fit_covariance_report(const EmpiricalVariogram& ev, CovarianceFamily family, double kappa) {
    if (ev.bins.size() < 3) throw KrigingError("covariance fit needs at least 3 variogram bins");
    CovarianceModel shape;
    shape.family = family;
    shape.kappa = kappa;
    if (family == CovarianceFamily::matern && kappa != 0.5 && kappa != 1.5 && kappa != 2.5)
        throw KrigingError("Matern smoothness must be 0.5, 1.5 or 2.5");

    const double lo = std::log(ev.bins.front().lag / 2.0);
    const double hi = std::log(ev.bins.back().lag * 5.0);
    constexpr int kStarts = 32;
    auto eval = [&](double log_phi) {
        CovarianceModel m = shape;
        m.range_phi = std::exp(log_phi);
        return fit_sills(ev, m);
    };
    std::vector<SillFit> fits(kStarts);
    int best = -1;
    for (int i = 0; i < kStarts; ++i) {
        fits[i] = eval(lo + (hi - lo) * i / (kStarts - 1));
        if (std::isfinite(fits[i].loss) && (best < 0 || fits[i].loss < fits[best].loss)) best = i;
    }
    if (best < 0) throw KrigingError("covariance fit did not converge on any of the range starts");

    // Golden-section refinement between the neighbours of the best start.
    const double step = (hi - lo) / (kStarts - 1);
    double a = lo + step * std::max(0, best - 1);
    double b = lo + step * std::min(kStarts - 1, best + 1);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    SillFit fc = eval(c), fd = eval(d);
    for (int it = 0; it < 60 && b - a > 1e-9; ++it) {
        if (fc.loss <= fd.loss) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = eval(d);
        }
    }
    SillFit chosen = fits[best];
    double log_phi = lo + step * best;
    const SillFit& refined = fc.loss <= fd.loss ? fc : fd;
    if (refined.loss < chosen.loss) {
        chosen = refined;
        log_phi = fc.loss <= fd.loss ? c : d;
    }

    FitReport report;
    report.model = shape;
    report.model.range_phi = std::exp(log_phi);
    report.model.partial_sill = chosen.psill;
    report.model.nugget = chosen.nugget;
    report.loss = chosen.loss;
    report.starts = kStarts;
    if (!(report.model.total_sill() > 0.0)) {
        std::ostringstream msg;
        msg << "covariance fit produced zero total sill (loss " << chosen.loss << ", " << ev.bins.size()
            << " bins, ranges " << std::exp(lo) << ".." << std::exp(hi) << ")";
        throw KrigingError(msg.str());
    }
    return report;
}

CovarianceModel fit_covariance(const EmpiricalVariogram& ev, CovarianceFamily family, double kappa) {
    return fit_covariance_report(ev, family, kappa).model;
}

namespace {

struct Factorized {
    std::vector<Point2> points;
    Eigen::VectorXd y;
    Eigen::LLT<Eigen::MatrixXd> llt;
};

Factorized factorize(const Dataset& dataset, std::size_t variable, const CovarianceModel& model) {
    model.validate();
    const std::size_t n = dataset.size();
    if (n == 0) throw KrigingError("kriging needs at least one observation");
    if (n > kMaxExactObservations)
        throw KrigingError("global-window kriging is limited to " + std::to_string(kMaxExactObservations) +
                           " observations; subsample the data");
    Factorized f;
    f.points.reserve(n);
    f.y.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        f.points.push_back(dataset.observations[i].location);
        f.y[static_cast<Eigen::Index>(i)] =
            variable == static_cast<std::size_t>(-1) ? 0.0 : dataset.observations[i].values.at(variable);
    }
    Eigen::MatrixXd cov(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        cov(i, i) = model.total_sill();
        for (std::size_t j = 0; j < i; ++j) {
            const double h = std::hypot(f.points[i].x - f.points[j].x, f.points[i].y - f.points[j].y);
            cov(i, j) = cov(j, i) = h == 0.0 ? model.total_sill() : model.covariance(h);
        }
    }
    f.llt.compute(cov);
    if (f.llt.info() != Eigen::Success) throw KrigingError("kriging covariance matrix is singular");
    return f;
}

// Mixed-precision iterative refinement of C x = b: residuals are accumulated in
// long double against the same double covariance entries that were factorized.
Eigen::VectorXd refined_solve(const Factorized& f, const CovarianceModel& model, const Eigen::VectorXd& b) {
    const auto n = static_cast<Eigen::Index>(f.points.size());
    Eigen::VectorXd x = f.llt.solve(b);
    for (int it = 0; it < 3; ++it) {
        Eigen::VectorXd r(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            long double acc = b[i];
            for (Eigen::Index j = 0; j < n; ++j) {
                const auto& p = f.points[static_cast<std::size_t>(i)];
                const auto& q = f.points[static_cast<std::size_t>(j)];
                const double h = std::hypot(p.x - q.x, p.y - q.y);
                const double c = i == j || h == 0.0 ? model.total_sill() : model.covariance(h);
                acc -= static_cast<long double>(c) * x[j];
            }
            r[i] = static_cast<double>(acc);
        }
        const Eigen::VectorXd dx = f.llt.solve(r);
        x += dx;
        if (dx.cwiseAbs().maxCoeff() <= 1e-17 * x.cwiseAbs().maxCoeff()) break;
    }
    return x;
}

}  // namespace

KrigingResult krige(const Dataset& dataset, std::size_t variable, const CovarianceModel& model,
                    const SpatialDomain& domain, const KrigeOptions& options) {
    coincidence_policy(dataset, CoincidencePolicy::jitter_assumed);
    if (variable >= dataset.variable_count()) throw KrigingError("variable index out of range");
    Factorized f = factorize(dataset, variable, model);
    const auto n = static_cast<Eigen::Index>(f.points.size());

    kernels::KrigingSystem sys;
    sys.chol = &f.llt;
    sys.data = f.points;
    sys.cinv_ones = refined_solve(f, model, Eigen::VectorXd::Ones(n));
    sys.ones_cinv_ones = sys.cinv_ones.sum();
    sys.gls_mean = sys.cinv_ones.dot(f.y) / sys.ones_cinv_ones;
    sys.residual_weights = refined_solve(f, model, (f.y.array() - sys.gls_mean).matrix());
    sys.total_sill = model.total_sill();

    std::vector<Point2> targets(domain.cell_count());
    for (std::size_t c = 0; c < targets.size(); ++c) targets[c] = cell_center(domain, domain.cell_at(c));

    KrigingResult result{ScalarField(domain), ScalarField(domain), 0};
    kernels::KrigingCellsOutput out{result.mean.values(), result.variance.values(), 0};
    if (options.parallel)
        kernels::kriging_cells_parallel(sys, model, targets, out);
    else
        kernels::kriging_cells_serial(sys, model, targets, out);
    result.clamped = out.clamped;
    return result;
}

Eigen::VectorXd kriging_weights(const Dataset& dataset, const CovarianceModel& model, Point2 target) {
    Factorized f = factorize(dataset, static_cast<std::size_t>(-1), model);
    const auto n = static_cast<Eigen::Index>(f.points.size());
    Eigen::VectorXd c(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double h = std::hypot(f.points[i].x - target.x, f.points[i].y - target.y);
        c[i] = h == 0.0 ? model.total_sill() : model.covariance(h);
    }
    const Eigen::VectorXd cinv_ones = f.llt.solve(Eigen::VectorXd::Ones(n));
    const Eigen::VectorXd cinv_c = f.llt.solve(c);
    const double mu = (1.0 - cinv_ones.dot(c)) / cinv_ones.sum();
    return cinv_c + mu * cinv_ones;
}

SignificanceMap kriging_significance(const KrigingResult& result, double alpha, double null_mean) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    const auto& dom = result.mean.domain();
    SignificanceMap out{BinaryMap(dom), ScalarField(dom, std::numeric_limits<double>::quiet_NaN()), 0, 0.0};
    out.critical = boost::math::quantile(boost::math::complement(boost::math::normal(), alpha));
    for (std::size_t v = 0; v < result.mean.size(); ++v) {
        const double var = result.variance[v];
        if (!(var > 0.0)) {
            ++out.excluded;
            continue;
        }
        const double z = (result.mean[v] - null_mean) / std::sqrt(var);
        out.z[v] = z;
        out.significant.set(v, z > out.critical);
    }
    return out;
}

KrigingAnalysis analyze_variable(const Dataset& dataset, std::size_t variable, const KrigingAnalysisOptions& options) {
    KrigingAnalysis a;
    a.significant = BinaryMap(dataset.domain);
    try {
        const Dataset data = coincidence_policy(dataset, options.coincidence);
        const double cutoff = options.max_lag > 0.0 ? options.max_lag : default_max_lag(data.domain);
        const auto ev = empirical_variogram(data, variable, options.bins, cutoff);
        a.model = fit_covariance(ev, options.family, options.kappa);
        a.result = krige(data, variable, *a.model, data.domain, KrigeOptions{options.parallel});
        auto sig = kriging_significance(*a.result, options.alpha);
        a.significant = std::move(sig.significant);
        a.excluded = sig.excluded;
    } catch (const std::exception& e) {
        a.error = e.what();
        a.significant = BinaryMap(dataset.domain);
    }
    return a;
}

}  // namespace geospm::kriging
