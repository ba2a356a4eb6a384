#pragma once

#include <Eigen/Dense>

namespace oplab {

// Gauss-Legendre rule on [-1, 1]
struct GaussLegendre {
    Eigen::VectorXd nodes;     // ascending
    Eigen::VectorXd weights;
};

GaussLegendre gauss_legendre(int m);

// S(j, k): integral from -1 to nodes(j) of the interpolant through the nodes, exact for degree < m
Eigen::MatrixXd integration_matrix(const GaussLegendre& rule);

} // namespace oplab
