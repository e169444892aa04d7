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

#include <limits>
#include <vector>

#include "geospm/kernels.hpp"

namespace geospm::kernels {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lower envelope of parabolas (Felzenszwalb & Huttenlocher) over one line.
void edt_1d(const double* f, double* d, int n, int* v, double* z) {
    int k = 0;
    int first = 0;
    while (first < n && f[first] == kInf) ++first;
    if (first == n) {
        for (int q = 0; q < n; ++q) d[q] = kInf;
        return;
    }
    v[0] = first;
    z[0] = -kInf;
    z[1] = kInf;
    for (int q = first + 1; q < n; ++q) {
        if (f[q] == kInf) continue;
        double s;
        while (true) {
            const int p = v[k];
            s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) / (2.0 * (q - p));
            if (s <= z[k] && k > 0) {
                --k;
                continue;
            }
            break;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

void column_pass(const BinaryMap& mask, std::vector<double>& out, int j, std::vector<double>& f,
                 std::vector<double>& d, std::vector<int>& v, std::vector<double>& z) {
    const int a = mask.domain().width();
    const int b = mask.domain().height();
    for (int k = 0; k < b; ++k) f[static_cast<std::size_t>(k)] = mask[static_cast<std::size_t>(k) * a + j] ? 0.0 : kInf;
    edt_1d(f.data(), d.data(), b, v.data(), z.data());
    for (int k = 0; k < b; ++k) out[static_cast<std::size_t>(k) * a + j] = d[static_cast<std::size_t>(k)];
}

void row_pass(std::vector<double>& out, int a, int k, std::vector<double>& f, std::vector<double>& d,
              std::vector<int>& v, std::vector<double>& z) {
    double* row = out.data() + static_cast<std::size_t>(k) * a;
    for (int j = 0; j < a; ++j) f[static_cast<std::size_t>(j)] = row[j];
    edt_1d(f.data(), d.data(), a, v.data(), z.data());
    for (int j = 0; j < a; ++j) row[j] = d[static_cast<std::size_t>(j)];
}

}  // namespace

std::vector<double> squared_distance_transform_serial(const BinaryMap& mask) {
    const int a = mask.domain().width();
    const int b = mask.domain().height();
    const auto n = static_cast<std::size_t>(std::max(a, b));
    std::vector<double> out(mask.size());
    std::vector<double> f(n), d(n), z(n + 1);
    std::vector<int> v(n);
    for (int j = 0; j < a; ++j) column_pass(mask, out, j, f, d, v, z);
    for (int k = 0; k < b; ++k) row_pass(out, a, k, f, d, v, z);
    return out;
}

std::vector<double> squared_distance_transform_parallel(const BinaryMap& mask) {
    const int a = mask.domain().width();
    const int b = mask.domain().height();
    const auto n = static_cast<std::size_t>(std::max(a, b));
    std::vector<double> out(mask.size());
#pragma omp parallel
    {
        std::vector<double> f(n), d(n), z(n + 1);
        std::vector<int> v(n);
#pragma omp for schedule(static)
        for (int j = 0; j < a; ++j) column_pass(mask, out, j, f, d, v, z);
#pragma omp for schedule(static)
        for (int k = 0; k < b; ++k) row_pass(out, a, k, f, d, v, z);
    }
    return out;
}

}  // namespace geospm::kernels
