#include "oplab/quadrature.hpp"

#include <cmath>

#include "oplab/errors.hpp"

namespace oplab {

GaussLegendre gauss_legendre(int m) {
    if (m < 1) throw InvalidArgument("gauss_legendre: need at least one node");
    // Golub-Welsch: eigenvalues of the Jacobi matrix of the Legendre recurrence
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, m);
    for (int k = 1; k < m; ++k) {
        double b = k / std::sqrt(4.0 * k * k - 1.0);
        jac(k, k - 1) = b;
        jac(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    GaussLegendre rule;
    rule.nodes = es.eigenvalues();
    rule.weights.resize(m);
    for (int k = 0; k < m; ++k) rule.weights(k) = 2.0 * es.eigenvectors()(0, k) * es.eigenvectors()(0, k);
    return rule;
}

namespace {

// P_0 .. P_{count-1} evaluated at x
Eigen::VectorXd legendre_values(double x, int count) {
    Eigen::VectorXd p(count);
    p(0) = 1.0;
    if (count > 1) p(1) = x;
    for (int n = 1; n + 1 < count; ++n) p(n + 1) = ((2.0 * n + 1.0) * x * p(n) - n * p(n - 1)) / (n + 1.0);
    return p;
}

} // namespace

Eigen::MatrixXd integration_matrix(const GaussLegendre& rule) {
    const int m = static_cast<int>(rule.nodes.size());
    Eigen::MatrixXd v(m, m), w(m, m);
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXd p = legendre_values(rule.nodes(j), m + 1);
        v.row(j) = p.head(m).transpose();
        w(j, 0) = rule.nodes(j) + 1.0;
        for (int n = 1; n < m; ++n) w(j, n) = (p(n + 1) - p(n - 1)) / (2.0 * n + 1.0);
    }
    // coefficients of the interpolant: c = diag((2n+1)/2) V^T diag(w) values
    Eigen::VectorXd scale(m);
    for (int n = 0; n < m; ++n) scale(n) = (2.0 * n + 1.0) / 2.0;
    Eigen::MatrixXd vinv = scale.asDiagonal() * v.transpose() * rule.weights.asDiagonal();
    return w * vinv;
}

} // namespace oplab
