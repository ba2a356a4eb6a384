#pragma once

#include <complex>
#include <functional>
#include <limits>

#include <Eigen/Dense>

namespace oplab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Tolerances {
    double hermitian = 1e-9;
    double projection = 1e-9;
    double reconstruction = 1e-10;
    double psd = 1e-9;
    double eig_cluster = 1e-9;   // relative to the operator norm
    double power_floor = 1e-14;
    double commutator = 1e-10;
};

const Tolerances& default_tolerances();

struct EigenSystem {
    RealVector values;   // ascending
    Matrix vectors;      // columns are eigenvectors

    Matrix reconstruct() const;
};

struct Polar {
    Matrix u;   // partial isometry
    Matrix p;   // |A|
};

// (lower, upper]; either end may be infinite
struct Interval {
    double lower;
    double upper;
};

using ScalarFunction = std::function<Complex(double)>;

bool is_square(const Matrix& a);
double hermitian_defect(const Matrix& a);
bool is_hermitian(const Matrix& a, double tol = 1e-9);

EigenSystem hermitian_eig(const Matrix& a, double hermitian_tol = 1e-9);

Matrix matrix_function(const EigenSystem& es, const ScalarFunction& f);
Matrix matrix_function(const Matrix& a, const ScalarFunction& f, double hermitian_tol = 1e-9);

Matrix sqrt_psd(const Matrix& a, double psd_tol = 1e-9);
Matrix abs_value(const Matrix& a);
Polar polar(const Matrix& a);
Matrix spectral_projection(const Matrix& a, Interval interval, double cluster_tol = 1e-9);
Matrix support_left(const Matrix& a);
Matrix support_right(const Matrix& a);

// A^z for positive invertible A
Matrix complex_power(const Matrix& a, Complex z, double power_floor = 1e-14);
Matrix complex_power(const EigenSystem& es, Complex z, double power_floor = 1e-14);

// exponential of an arbitrary square matrix
Matrix expm(const Matrix& a);

RealVector singular_values(const Matrix& a);
double op_norm(const Matrix& a);
int numerical_rank(const Matrix& a, double rel_tol = 1e-10);
Matrix commutator(const Matrix& a, const Matrix& b);
double min_eigenvalue(const Matrix& a);

} // namespace oplab
