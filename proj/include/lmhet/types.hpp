#pragma once

#include <Eigen/Dense>

namespace lmhet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace lmhet
