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

#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace toy {

/// Pearson goodness-of-fit p-value; categories with zero expected probability
/// must have zero observations and do not add degrees of freedom.
inline double chi_square_p(const std::vector<std::size_t>& observed, const std::vector<double>& probabilities) {
    double n = 0.0;
    for (auto o : observed) n += static_cast<double>(o);
    double stat = 0.0;
    int df = -1;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (probabilities[i] == 0.0) {
            if (observed[i] != 0) return 0.0;
            continue;
        }
        const double e = n * probabilities[i];
        stat += (static_cast<double>(observed[i]) - e) * (static_cast<double>(observed[i]) - e) / e;
        ++df;
    }
    if (df <= 0) return 1.0;
    return boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), stat));
}

}  // namespace toy
