#pragma once

#include <Eigen/Dense>

namespace rpt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace rpt
