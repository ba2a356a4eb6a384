#include "oplab/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oplab/errors.hpp"

namespace oplab {

BlockAlgebra::BlockAlgebra(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw InvalidArgument("BlockAlgebra: at least one block required");
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
        if (blocks_[k].dim <= 0) throw InvalidArgument("BlockAlgebra: block dims must be positive");
        if (!(blocks_[k].weight > 0.0) || !std::isfinite(blocks_[k].weight))
            throw InvalidArgument("BlockAlgebra: block weights must be finite and positive");
    }
}

AlgebraRef BlockAlgebra::make(std::vector<Block> blocks) {
    return std::make_shared<const BlockAlgebra>(std::move(blocks));
}

AlgebraRef BlockAlgebra::full(int dim, double weight) { return make({{dim, weight}}); }

AlgebraRef BlockAlgebra::diagonal(const std::vector<double>& weights) {
    std::vector<Block> b;
    for (double w : weights) b.push_back({1, w});
    return make(std::move(b));
}

int BlockAlgebra::total_dim() const {
    int n = 0;
    for (const auto& b : blocks_) n += b.dim;
    return n;
}

int BlockAlgebra::hs_dim() const {
    int n = 0;
    for (const auto& b : blocks_) n += b.dim * b.dim;
    return n;
}

double BlockAlgebra::total_weight() const {
    double t = 0.0;
    for (const auto& b : blocks_) t += b.dim * b.weight;
    return t;
}

AlgebraRef BlockAlgebra::doubled() const {
    std::vector<Block> b;
    for (const auto& blk : blocks_) b.push_back({2 * blk.dim, blk.weight});
    return make(std::move(b));
}

bool BlockAlgebra::operator==(const BlockAlgebra& other) const {
    if (blocks_.size() != other.blocks_.size()) return false;
    for (std::size_t k = 0; k < blocks_.size(); ++k)
        if (blocks_[k].dim != other.blocks_[k].dim || blocks_[k].weight != other.blocks_[k].weight) return false;
    return true;
}

Operator::Operator(AlgebraRef algebra, std::vector<Matrix> blocks)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
    if (!algebra_) throw InvalidArgument("Operator: null algebra");
    if (blocks_.size() != algebra_->num_blocks()) {
        std::ostringstream os;
        os << "Operator: expected " << algebra_->num_blocks() << " blocks, got " << blocks_.size();
        throw ShapeError(os.str());
    }
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
        int d = algebra_->dim(k);
        if (blocks_[k].rows() != d || blocks_[k].cols() != d) {
            std::ostringstream os;
            os << "Operator: block " << k << " has shape " << blocks_[k].rows() << "x" << blocks_[k].cols()
               << ", expected " << d << "x" << d;
            throw ShapeError(os.str());
        }
    }
}

Operator Operator::zero(const AlgebraRef& algebra) { return scalar(algebra, 0.0); }

Operator Operator::identity(const AlgebraRef& algebra) { return scalar(algebra, 1.0); }

Operator Operator::scalar(const AlgebraRef& algebra, Complex c) {
    std::vector<Matrix> b;
    for (const auto& blk : algebra->blocks()) b.push_back(c * Matrix::Identity(blk.dim, blk.dim));
    return Operator(algebra, std::move(b));
}

Operator Operator::from_dense(const AlgebraRef& algebra, const Matrix& dense, double tol) {
    if (dense.rows() != algebra->total_dim() || dense.cols() != algebra->total_dim())
        throw ShapeError("Operator::from_dense: dimension mismatch");
    std::vector<Matrix> b;
    int off = 0;
    Matrix rest = dense;
    for (const auto& blk : algebra->blocks()) {
        b.push_back(dense.block(off, off, blk.dim, blk.dim));
        rest.block(off, off, blk.dim, blk.dim).setZero();
        off += blk.dim;
    }
    if (rest.size() && rest.cwiseAbs().maxCoeff() > tol)
        throw ShapeError("Operator::from_dense: matrix is not block diagonal");
    return Operator(algebra, std::move(b));
}

Operator Operator::matrix_unit(const AlgebraRef& algebra, std::size_t k, int i, int j) {
    Operator e = zero(algebra);
    e.blocks_.at(k)(i, j) = 1.0;
    return e;
}

bool Operator::same_algebra(const Operator& other) const {
    return algebra_ == other.algebra_ || (algebra_ && other.algebra_ && *algebra_ == *other.algebra_);
}

Operator Operator::adjoint() const {
    return map([](const Matrix& m) -> Matrix { return m.adjoint(); });
}

Matrix Operator::dense() const {
    int n = algebra_->total_dim();
    Matrix d = Matrix::Zero(n, n);
    int off = 0;
    for (const auto& b : blocks_) {
        d.block(off, off, b.rows(), b.cols()) = b;
        off += static_cast<int>(b.rows());
    }
    return d;
}

namespace {

void require_same(const Operator& a, const Operator& b, const char* where) {
    if (!a.same_algebra(b)) throw ShapeError(std::string(where) + ": operators belong to different algebras");
}

} // namespace

Operator& Operator::operator+=(const Operator& other) {
    require_same(*this, other, "operator+");
    for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += other.blocks_[k];
    return *this;
}

Operator& Operator::operator-=(const Operator& other) {
    require_same(*this, other, "operator-");
    for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] -= other.blocks_[k];
    return *this;
}

Operator& Operator::operator*=(Complex c) {
    for (auto& b : blocks_) b *= c;
    return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
    require_same(a, b, "operator*");
    std::vector<Matrix> out;
    out.reserve(a.num_blocks());
    for (std::size_t k = 0; k < a.num_blocks(); ++k) out.push_back(a.block(k) * b.block(k));
    return Operator(a.algebra(), std::move(out));
}

Complex trace(const BlockAlgebra& alg, const Operator& a) {
    if (alg != *a.algebra()) throw ShapeError("trace: operator does not belong to the algebra");
    return trace(a);
}

Complex trace(const Operator& a) {
    Complex t = 0.0;
    for (std::size_t k = 0; k < a.num_blocks(); ++k) t += a.algebra()->weight(k) * a.block(k).trace();
    return t;
}

Complex hs_inner(const Operator& x, const Operator& y) {
    require_same(x, y, "hs_inner");
    Complex t = 0.0;
    for (std::size_t k = 0; k < x.num_blocks(); ++k)
        t += x.algebra()->weight(k) * (x.block(k).adjoint() * y.block(k)).trace();
    return t;
}

double hs_norm(const Operator& x) {
    double t = 0.0;
    for (std::size_t k = 0; k < x.num_blocks(); ++k) t += x.algebra()->weight(k) * x.block(k).squaredNorm();
    return std::sqrt(t);
}

double op_norm(const Operator& a) {
    double m = 0.0;
    for (const auto& b : a.blocks()) m = std::max(m, op_norm(b));
    return m;
}

double max_abs(const Operator& a) {
    double m = 0.0;
    for (const auto& b : a.blocks())
        if (b.size()) m = std::max(m, b.cwiseAbs().maxCoeff());
    return m;
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

bool is_hermitian(const Operator& a, double tol) {
    for (const auto& b : a.blocks())
        if (!is_hermitian(b, tol)) return false;
    return true;
}

double min_eigenvalue(const Operator& a) {
    double m = kInf;
    for (const auto& b : a.blocks()) m = std::min(m, hermitian_eig(b).values(0));
    return m;
}

double max_eigenvalue(const Operator& a) {
    double m = -kInf;
    for (const auto& b : a.blocks()) {
        EigenSystem es = hermitian_eig(b);
        m = std::max(m, es.values(es.values.size() - 1));
    }
    return m;
}

Operator apply_function(const Operator& a, const ScalarFunction& f) {
    return a.map([&](const Matrix& m) { return matrix_function(m, f); });
}

Operator sqrt_psd(const Operator& a, double psd_tol) {
    return a.map([&](const Matrix& m) { return sqrt_psd(m, psd_tol); });
}

Operator abs_value(const Operator& a) {
    return a.map([](const Matrix& m) { return abs_value(m); });
}

Operator complex_power(const Operator& a, Complex z, double power_floor) {
    return a.map([&](const Matrix& m) { return complex_power(m, z, power_floor); });
}

Operator support_inverse(const Operator& a, double rel_tol) {
    double cut = rel_tol * std::max(op_norm(a), 1e-300);
    return apply_function(a, [cut](double x) { return Complex(x > cut ? 1.0 / x : 0.0); });
}

Operator support_projection(const Operator& a, double rel_tol) {
    double cut = rel_tol * std::max(op_norm(a), 1e-300);
    return apply_function(a, [cut](double x) { return Complex(x > cut ? 1.0 : 0.0); });
}

Operator spectral_projection(const Operator& a, Interval interval, double cluster_tol) {
    if (!(interval.lower < interval.upper)) throw InvalidArgument("spectral_projection: empty interval");
    double tol = cluster_tol * op_norm(a);
    return a.map([&](const Matrix& m) {
        EigenSystem es = hermitian_eig(m);
        Vector ind(es.values.size());
        for (Eigen::Index i = 0; i < es.values.size(); ++i) {
            double x = es.values(i);
            for (double end : {interval.lower, interval.upper}) {
                if (std::isfinite(end) && std::abs(x - end) <= tol) {
                    std::ostringstream os;
                    os << "spectral_projection: endpoint " << end << " collides with eigenvalue " << x;
                    throw AmbiguousIntervalError(os.str());
                }
            }
            ind(i) = (x > interval.lower && x <= interval.upper) ? 1.0 : 0.0;
        }
        return Matrix(es.vectors * ind.asDiagonal() * es.vectors.adjoint());
    });
}

std::vector<RealVector> block_singular_values(const Operator& a) {
    std::vector<RealVector> out;
    for (const auto& b : a.blocks()) out.push_back(singular_values(b));
    return out;
}

DensityState::DensityState(Operator rho, const Tolerances& tol) : rho_(std::move(rho)) {
    if (!is_hermitian(rho_, tol.hermitian)) throw NotHermitianError("DensityState: density is not hermitian");
    min_eig_ = oplab::min_eigenvalue(rho_);
    if (min_eig_ < -tol.psd) throw NotPositiveError("DensityState: density is not positive", min_eig_);
    Complex t = trace(rho_);
    if (std::abs(t - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "DensityState: tau(rho) = " << t.real() << ", expected 1";
        throw InvalidArgument(os.str());
    }
    faithful_ = min_eig_ > tol.power_floor;
}

DensityState DensityState::normalized(const Operator& positive) {
    Complex t = trace(positive);
    if (!(t.real() > 0.0)) throw NotPositiveError("DensityState::normalized: trace is not positive", t.real());
    Operator r = positive * Complex(1.0 / t.real());
    r = r.map([](const Matrix& m) -> Matrix { return 0.5 * (m + m.adjoint()); });
    return DensityState(std::move(r));
}

DensityState DensityState::from_plain_density(const Operator& plain) {
    std::vector<Matrix> b;
    for (std::size_t k = 0; k < plain.num_blocks(); ++k) b.push_back(plain.block(k) / plain.algebra()->weight(k));
    return normalized(Operator(plain.algebra(), std::move(b)));
}

Complex DensityState::expectation(const Operator& a) const { return trace(rho_ * a); }

PositiveFunctional::PositiveFunctional(Operator density, double psd_tol) : density_(std::move(density)) {
    if (!is_hermitian(density_)) throw NotHermitianError("PositiveFunctional: density is not hermitian");
    min_eig_ = oplab::min_eigenvalue(density_);
    double scale = std::max(1.0, op_norm(density_));
    if (min_eig_ < -psd_tol * scale) throw NotPositiveError("PositiveFunctional: density is not positive", min_eig_);
    faithful_ = min_eig_ > default_tolerances().power_floor;
}

PositiveFunctional::PositiveFunctional(const DensityState& state)
    : density_(state.rho()), faithful_(state.faithful()), min_eig_(state.min_eigenvalue()) {}

Complex PositiveFunctional::evaluate(const Operator& a) const { return trace(density_ * a); }

MeasurabilityResult in_D(const BlockAlgebra& alg, const Operator& a, double eps, double delta) {
    if (alg != *a.algebra()) throw ShapeError("in_D: operator does not belong to the algebra");
    if (!(eps > 0.0) || !(delta > 0.0)) throw InvalidArgument("in_D: eps and delta must be positive");
    Operator proj = spectral_projection(abs_value(a), Interval{eps, kInf});
    double w = trace(proj).real();
    return MeasurabilityResult{w <= delta + 1e-12 * std::max(1.0, delta), w};
}

MeasurabilityArithmetic d_arithmetic_check(const BlockAlgebra& alg, const Operator& a1, const Operator& a2,
                                           double eps1, double eps2, double delta1, double delta2) {
    MeasurabilityArithmetic r{};
    r.first = in_D(alg, a1, eps1, delta1);
    r.second = in_D(alg, a2, eps2, delta2);
    r.precondition = r.first.contained && r.second.contained;
    r.delta_bound = delta1 + delta2;
    r.sum = in_D(alg, a1 + a2, eps1 + eps2, delta1 + delta2);
    r.product = in_D(alg, a1 * a2, eps1 * eps2, delta1 + delta2);
    r.sum_contained = r.sum.contained;
    r.product_contained = r.product.contained;
    return r;
}

CheckReport MeasurabilityArithmetic::as_report() const {
    CheckReport rep;
    rep.append(CheckRecord{"precondition", first.witness + second.witness, delta_bound, 0.0, 0.0, precondition});
    if (precondition) {
        rep.append(inequality_check("sum_containment", sum.witness, delta_bound, 1e-12));
        rep.append(inequality_check("product_containment", product.witness, delta_bound, 1e-12));
    }
    return rep;
}

} // namespace oplab
