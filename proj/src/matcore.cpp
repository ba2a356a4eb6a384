#include "oplab/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "oplab/errors.hpp"

namespace oplab {

namespace {

void require_square(const Matrix& a, const char* where) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        std::ostringstream os;
        os << where << ": expected a non-empty square matrix, got " << a.rows() << "x" << a.cols();
        throw ShapeError(os.str());
    }
}

double entry_scale(const Matrix& a) { return std::max(1.0, a.cwiseAbs().maxCoeff()); }

} // namespace

const Tolerances& default_tolerances() {
    static const Tolerances t{};
    return t;
}

Matrix EigenSystem::reconstruct() const {
    return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
}

bool is_square(const Matrix& a) { return a.rows() == a.cols(); }

double hermitian_defect(const Matrix& a) {
    if (!is_square(a)) return kInf;
    if (a.size() == 0) return 0.0;
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& a, double tol) {
    return is_square(a) && hermitian_defect(a) <= tol * entry_scale(a);
}

EigenSystem hermitian_eig(const Matrix& a, double hermitian_tol) {
    require_square(a, "hermitian_eig");
    double defect = hermitian_defect(a);
    // absolute tolerance for O(1) matrices, relative beyond that
    if (defect > hermitian_tol * entry_scale(a)) {
        std::ostringstream os;
        os << "hermitian_eig: matrix is not hermitian (max |A_ij - conj(A_ji)| = " << defect << ")";
        throw NotHermitianError(os.str());
    }
    Matrix sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) throw Error("hermitian_eig: eigensolver failed to converge");
    return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

Matrix matrix_function(const EigenSystem& es, const ScalarFunction& f) {
    const auto n = es.values.size();
    Vector fv(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Complex v = f(es.values(i));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::ostringstream os;
            os << "matrix_function: function undefined at eigenvalue " << es.values(i);
            throw DomainError(os.str(), es.values(i));
        }
        fv(i) = v;
    }
    return es.vectors * fv.asDiagonal() * es.vectors.adjoint();
}

Matrix matrix_function(const Matrix& a, const ScalarFunction& f, double hermitian_tol) {
    return matrix_function(hermitian_eig(a, hermitian_tol), f);
}

Matrix sqrt_psd(const Matrix& a, double psd_tol) {
    EigenSystem es = hermitian_eig(a);
    double lo = es.values(0);
    double scale = std::max(1.0, std::abs(es.values(es.values.size() - 1)));
    if (lo < -psd_tol * scale) {
        std::ostringstream os;
        os << "sqrt_psd: matrix is not positive (min eigenvalue " << lo << ")";
        throw NotPositiveError(os.str(), lo);
    }
    return matrix_function(es, [](double x) { return Complex(std::sqrt(std::max(x, 0.0))); });
}

Matrix abs_value(const Matrix& a) {
    require_square(a, "abs_value");
    return polar(a).p;
}

Polar polar(const Matrix& a) {
    require_square(a, "polar");
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVector& s = svd.singularValues();
    double cut = 1e-10 * (s.size() ? s(0) : 0.0);
    const auto n = s.size();
    Vector keep(n);
    for (Eigen::Index i = 0; i < n; ++i) keep(i) = (s(i) > cut && s(i) > 0.0) ? 1.0 : 0.0;
    Matrix u = svd.matrixU() * keep.asDiagonal() * svd.matrixV().adjoint();
    Matrix p = svd.matrixV() * s.cast<Complex>().asDiagonal() * svd.matrixV().adjoint();
    return Polar{u, 0.5 * (p + p.adjoint())};
}

Matrix spectral_projection(const Matrix& a, Interval interval, double cluster_tol) {
    if (!(interval.lower < interval.upper)) throw InvalidArgument("spectral_projection: empty interval");
    EigenSystem es = hermitian_eig(a);
    const auto n = es.values.size();
    double norm = std::max(std::abs(es.values(0)), std::abs(es.values(n - 1)));
    double tol = cluster_tol * norm;
    Vector indicator(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double x = es.values(i);
        for (double end : {interval.lower, interval.upper}) {
            if (std::isfinite(end) && std::abs(x - end) <= tol) {
                std::ostringstream os;
                os << "spectral_projection: endpoint " << end << " collides with eigenvalue " << x;
                throw AmbiguousIntervalError(os.str());
            }
        }
        indicator(i) = (x > interval.lower && x <= interval.upper) ? 1.0 : 0.0;
    }
    return es.vectors * indicator.asDiagonal() * es.vectors.adjoint();
}

Matrix support_left(const Matrix& a) {
    Polar pd = polar(a);
    return pd.u * pd.u.adjoint();
}

Matrix support_right(const Matrix& a) {
    Polar pd = polar(a);
    return pd.u.adjoint() * pd.u;
}

Matrix complex_power(const EigenSystem& es, Complex z, double power_floor) {
    return matrix_function(es, [&](double x) -> Complex {
        if (x < power_floor) {
            std::ostringstream os;
            os << "complex_power: eigenvalue " << x << " below power floor";
            throw DomainError(os.str(), x);
        }
        return std::exp(z * std::log(x));
    });
}

Matrix complex_power(const Matrix& a, Complex z, double power_floor) {
    return complex_power(hermitian_eig(a), z, power_floor);
}

Matrix expm(const Matrix& a) {
    require_square(a, "expm");
    return a.exp();
}

RealVector singular_values(const Matrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues().reverse();
}

double op_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    RealVector s = singular_values(a);
    return s(s.size() - 1);
}

int numerical_rank(const Matrix& a, double rel_tol) {
    RealVector s = singular_values(a);
    double top = s.size() ? s(s.size() - 1) : 0.0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > rel_tol * top && s(i) > 0.0) ++r;
    return r;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

double min_eigenvalue(const Matrix& a) { return hermitian_eig(a, kInf).values(0); }

} // namespace oplab
