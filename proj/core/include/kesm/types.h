#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace kesm {

// Index into the shared word/entity symbol space of a Vocabulary.
using Index = std::int32_t;

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
// Embedding tables are accessed one row per symbol.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace kesm
