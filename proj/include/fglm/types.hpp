#ifndef FGLM_TYPES_HPP
#define FGLM_TYPES_HPP

#include <Eigen/Dense>

namespace fglm {

using Index  = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IndexVector = std::vector<Index>;

} // namespace fglm

#endif
