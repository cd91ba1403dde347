// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace gfd {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Read-only view over any contiguous double vector expression.
using VecView = Eigen::Ref<const Vec>;

}  // namespace gfd
