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

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geospm/grid_domain.hpp"

namespace geospm::glm {

class DesignError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct DesignOptions {
    bool include_constant = true;
    /// Centre and scale every non-constant, non-interaction column by its sample sd.
    bool zscore = false;
    /// Skip z-scoring for columns with exactly two distinct values (indicators).
    bool keep_indicators = true;
};

inline constexpr const char* kConstantColumn = "constant";

/// Shared N x C design of the mass-univariate model.
///
/// Columns are named; `a*b` in a column list builds the elementwise product of
/// the (possibly z-scored) columns a and b.
class DesignMatrix {
public:
    DesignMatrix() = default;
    DesignMatrix(std::vector<std::string> names, Eigen::MatrixXd matrix, bool has_constant);

    static DesignMatrix from_dataset(const Dataset& data, const std::vector<std::string>& columns,
                                     const DesignOptions& options = {});

    std::size_t rows() const { return static_cast<std::size_t>(x_.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(x_.cols()); }
    const std::vector<std::string>& names() const { return names_; }
    const Eigen::MatrixXd& matrix() const { return x_; }
    bool has_constant() const { return has_constant_; }

    std::size_t column_index(const std::string& name) const;
    DesignMatrix subset(const std::vector<std::size_t>& columns) const;

    Eigen::MatrixXd cross_product() const { return x_.transpose() * x_; }

private:
    std::vector<std::string> names_;
    Eigen::MatrixXd x_;
    bool has_constant_ = false;
};

/// Parses "a,b,a*b" into column names (whitespace ignored).
std::vector<std::string> parse_column_list(const std::string& text);

}  // namespace geospm::glm
