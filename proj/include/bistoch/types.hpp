#pragma once

#include <Eigen/Dense>

namespace bistoch {

// Point clouds are stored one sample per row; row-major keeps each sample
// contiguous for the pairwise distance loops.
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace bistoch
