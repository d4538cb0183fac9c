#pragma once

#include <Eigen/Dense>

namespace graphscat {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace graphscat
