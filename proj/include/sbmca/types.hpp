#pragma once

#include <Eigen/Dense>

namespace sbmca {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

} // namespace sbmca
