#pragma once

#include <Eigen/Dense>

namespace gladst {

// Row-major so that serialized parameter blocks and node feature rows map
// directly onto contiguous storage.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace gladst
