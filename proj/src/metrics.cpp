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

#include "geospm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "geospm/kernels.hpp"

namespace geospm::metrics {

ConfusionCounts confusion(const BinaryMap& recovered, const BinaryMap& target) {
    require_same_domain(recovered.domain(), target.domain(), "score maps");
    ConfusionCounts c;
    const auto& r = recovered.raw();
    const auto& t = target.raw();
    for (std::size_t v = 0; v < r.size(); ++v) {
        if (r[v] && t[v]) ++c.tp;
        else if (r[v]) ++c.fp;
        else if (t[v]) ++c.fn;
        else ++c.tn;
    }
    return c;
}

double jaccard(const ConfusionCounts& c) {
    const auto denom = c.tp + c.fp + c.fn;
    return denom == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

double dice(const ConfusionCounts& c) {
    const auto denom = 2 * c.tp + c.fp + c.fn;
    return denom == 0 ? 1.0 : 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
}

double matthews(const ConfusionCounts& c) {
    const double tp = c.tp, fp = c.fp, fn = c.fn, tn = c.tn;
    const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    if (denom == 0.0) return c.fp == 0 && c.fn == 0 ? 1.0 : 0.0;
    return (tp * tn - fp * fn) / std::sqrt(denom);
}

namespace {

double plogp(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

}  // namespace

double symmetric_uncertainty(const ConfusionCounts& c) {
    const double n = static_cast<double>(c.total());
    if (n == 0.0) return 1.0;
    const double ptp = c.tp / n, pfp = c.fp / n, pfn = c.fn / n, ptn = c.tn / n;
    const double pa = ptp + pfp;  // recovered marginal
    const double pb = ptp + pfn;  // target marginal
    const double ha = -plogp(pa) - plogp(1.0 - pa);
    const double hb = -plogp(pb) - plogp(1.0 - pb);
    const double hab = -plogp(ptp) - plogp(pfp) - plogp(pfn) - plogp(ptn);
    if (ha + hb == 0.0) return c.fp == 0 && c.fn == 0 ? 1.0 : 0.0;
    const double mi = std::max(0.0, ha + hb - hab);
    return std::clamp(2.0 * mi / (ha + hb), 0.0, 1.0);
}

double directed_mean_distance(const BinaryMap& from, const BinaryMap& to) {
    require_same_domain(from.domain(), to.domain(), "distance maps");
    if (from.empty() || to.empty()) throw std::invalid_argument("directed distance needs nonempty maps");
    const auto dt = kernels::squared_distance_transform_parallel(to);
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t v = 0; v < from.size(); ++v) {
        if (!from[v]) continue;
        sum += std::sqrt(dt[v]);
        ++n;
    }
    return sum / static_cast<double>(n);
}

double modified_hausdorff(const BinaryMap& a, const BinaryMap& b) {
    return std::max(directed_mean_distance(a, b), directed_mean_distance(b, a));
}

std::string describe_flags(unsigned flags) {
    std::string out;
    auto add = [&](const char* s) {
        if (!out.empty()) out += '|';
        out += s;
    };
    if (flags & kBothEmpty) add("both_empty");
    if (flags & kRecoveredEmpty) add("recovered_empty");
    if (flags & kTargetEmpty) add("target_empty");
    if (flags & kDegenerateMarginal) add("degenerate_marginal");
    return out;
}

std::array<double, 5> as_array(const ScoreRecord& r) { return {r.jaccard, r.dice, r.mcc, r.su, r.mhd}; }

ScoreRecord score_pair(const BinaryMap& recovered, const BinaryMap& target) {
    ScoreRecord r;
    r.counts = confusion(recovered, target);
    const auto& c = r.counts;
    const bool rec_empty = c.tp + c.fp == 0;
    const bool tgt_empty = c.tp + c.fn == 0;
    if (rec_empty && tgt_empty) {
        r.jaccard = r.dice = r.mcc = r.su = 1.0;
        r.mhd = 0.0;
        r.flags = kBothEmpty;
        return r;
    }
    if (rec_empty || tgt_empty) {
        r.jaccard = r.dice = r.mcc = r.su = 0.0;
        r.mhd = 1.0;
        r.flags = rec_empty ? kRecoveredEmpty : kTargetEmpty;
        return r;
    }
    r.jaccard = jaccard(c);
    r.dice = dice(c);
    r.mcc = matthews(c);
    r.su = symmetric_uncertainty(c);
    if (c.tn + c.fp == 0 || c.tn + c.fn == 0) r.flags |= kDegenerateMarginal;
    const auto& dom = target.domain();
    const double diag = std::hypot(static_cast<double>(dom.width()), static_cast<double>(dom.height()));
    r.mhd = modified_hausdorff(recovered, target) / diag;
    return r;
}

MetricSummary summarize(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("cannot summarize zero runs");
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double n = static_cast<double>(values.size());
    MetricSummary s;
    s.mean = sum / n;
    if (values.size() > 1) {
        std::vector<double> sq;
        sq.reserve(values.size());
        for (double v : values) sq.push_back((v - s.mean) * (v - s.mean));
        std::sort(sq.begin(), sq.end());
        double ss = 0.0;
        for (double v : sq) ss += v;
        s.sd = std::sqrt(ss / (n - 1.0));
    }
    return s;
}

AggregateScores aggregate_scores(const std::vector<ScoreRecord>& runs) {
    if (runs.empty()) throw std::invalid_argument("aggregate_scores needs at least one run");
    AggregateScores out;
    out.n = runs.size();
    for (std::size_t m = 0; m < 5; ++m) {
        std::vector<double> values;
        values.reserve(runs.size());
        for (const auto& r : runs) values.push_back(as_array(r)[m]);
        out.metrics[m] = summarize(std::move(values));
    }
    return out;
}

}  // namespace geospm::metrics
