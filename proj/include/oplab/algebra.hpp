#pragma once

#include <memory>
#include <vector>

#include "oplab/matcore.hpp"
#include "oplab/report.hpp"

namespace oplab {

struct Block {
    int dim;
    double weight;
};

class BlockAlgebra;
using AlgebraRef = std::shared_ptr<const BlockAlgebra>;

// Direct sum of full matrix blocks with the trace sum_k w_k tr(A_k).
class BlockAlgebra {
public:
    explicit BlockAlgebra(std::vector<Block> blocks);

    static AlgebraRef make(std::vector<Block> blocks);
    static AlgebraRef full(int dim, double weight = 1.0);
    // all blocks one-dimensional
    static AlgebraRef diagonal(const std::vector<double>& weights);

    const std::vector<Block>& blocks() const { return blocks_; }
    std::size_t num_blocks() const { return blocks_.size(); }
    int dim(std::size_t k) const { return blocks_[k].dim; }
    double weight(std::size_t k) const { return blocks_[k].weight; }
    int total_dim() const;
    // dimension of the Hilbert-Schmidt space sum_k d_k^2
    int hs_dim() const;
    // tau(1)
    double total_weight() const;
    // 2x2 matrices over the algebra, block k of size 2 d_k with the same weight
    AlgebraRef doubled() const;

    bool operator==(const BlockAlgebra& other) const;
    bool operator!=(const BlockAlgebra& other) const { return !(*this == other); }

private:
    std::vector<Block> blocks_;
};

class Operator {
public:
    Operator() = default;
    Operator(AlgebraRef algebra, std::vector<Matrix> blocks);

    static Operator zero(const AlgebraRef& algebra);
    static Operator identity(const AlgebraRef& algebra);
    static Operator scalar(const AlgebraRef& algebra, Complex c);
    // block-diagonal matrix split into the algebra's blocks; off-block entries must vanish
    static Operator from_dense(const AlgebraRef& algebra, const Matrix& dense, double tol = 1e-12);
    // matrix unit E_ij inside block k
    static Operator matrix_unit(const AlgebraRef& algebra, std::size_t k, int i, int j);

    const AlgebraRef& algebra() const { return algebra_; }
    std::size_t num_blocks() const { return blocks_.size(); }
    const Matrix& block(std::size_t k) const { return blocks_[k]; }
    const std::vector<Matrix>& blocks() const { return blocks_; }
    bool same_algebra(const Operator& other) const;

    template <class F>
    Operator map(F&& f) const {
        std::vector<Matrix> out;
        out.reserve(blocks_.size());
        for (const auto& b : blocks_) out.push_back(f(b));
        return Operator(algebra_, std::move(out));
    }

    Operator adjoint() const;
    Matrix dense() const;

    Operator& operator+=(const Operator& other);
    Operator& operator-=(const Operator& other);
    Operator& operator*=(Complex c);

    friend Operator operator+(Operator a, const Operator& b) { return a += b; }
    friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
    friend Operator operator-(const Operator& a) { return a.map([](const Matrix& m) -> Matrix { return -m; }); }
    friend Operator operator*(const Operator& a, const Operator& b);
    friend Operator operator*(Operator a, Complex c) { return a *= c; }
    friend Operator operator*(Complex c, Operator a) { return a *= c; }
    friend Operator operator*(Operator a, double c) { return a *= Complex(c); }
    friend Operator operator*(double c, Operator a) { return a *= Complex(c); }

private:
    AlgebraRef algebra_;
    std::vector<Matrix> blocks_;
};

Complex trace(const BlockAlgebra& alg, const Operator& a);
Complex trace(const Operator& a);
// <X, Y> = tau(X* Y)
Complex hs_inner(const Operator& x, const Operator& y);
double hs_norm(const Operator& x);
double op_norm(const Operator& a);
// max entry modulus over blocks
double max_abs(const Operator& a);
Operator commutator(const Operator& a, const Operator& b);

bool is_hermitian(const Operator& a, double tol = 1e-9);
double min_eigenvalue(const Operator& a);
double max_eigenvalue(const Operator& a);
Operator apply_function(const Operator& a, const ScalarFunction& f);
Operator sqrt_psd(const Operator& a, double psd_tol = 1e-9);
Operator abs_value(const Operator& a);
Operator complex_power(const Operator& a, Complex z, double power_floor = 1e-14);
// pseudo-inverse of a positive operator on its support
Operator support_inverse(const Operator& a, double rel_tol = 1e-12);
Operator support_projection(const Operator& a, double rel_tol = 1e-12);
// global cluster tolerance cluster_tol * ||A||
Operator spectral_projection(const Operator& a, Interval interval, double cluster_tol = 1e-9);
// singular values of every block, tagged with block weights
std::vector<RealVector> block_singular_values(const Operator& a);

class DensityState {
public:
    // rho is the density relative to tau: omega(A) = tau(rho A)
    explicit DensityState(Operator rho, const Tolerances& tol = default_tolerances());

    static DensityState normalized(const Operator& positive);
    // density relative to the plain (unweighted) trace, omega(A) = sum_k tr(rho_k A_k)
    static DensityState from_plain_density(const Operator& plain);

    const Operator& rho() const { return rho_; }
    const AlgebraRef& algebra() const { return rho_.algebra(); }
    bool faithful() const { return faithful_; }
    double min_eigenvalue() const { return min_eig_; }
    Complex expectation(const Operator& a) const;

private:
    Operator rho_;
    bool faithful_ = false;
    double min_eig_ = 0.0;
};

// A -> tau(D A) for a positive D, not necessarily normalized
class PositiveFunctional {
public:
    explicit PositiveFunctional(Operator density, double psd_tol = 1e-9);
    PositiveFunctional(const DensityState& state);  // NOLINT: implicit on purpose

    const Operator& density() const { return density_; }
    const AlgebraRef& algebra() const { return density_.algebra(); }
    bool faithful() const { return faithful_; }
    double min_eigenvalue() const { return min_eig_; }
    Complex evaluate(const Operator& a) const;

private:
    Operator density_;
    bool faithful_ = false;
    double min_eig_ = 0.0;
};

struct MeasurabilityResult {
    bool contained;
    double witness;   // tau of the spectral projection of |A| on (eps, inf)
};

MeasurabilityResult in_D(const BlockAlgebra& alg, const Operator& a, double eps, double delta);

struct MeasurabilityArithmetic {
    MeasurabilityResult first, second, sum, product;
    double delta_bound;   // delta1 + delta2
    bool precondition;
    bool sum_contained;
    bool product_contained;

    CheckReport as_report() const;
};

MeasurabilityArithmetic d_arithmetic_check(const BlockAlgebra& alg, const Operator& a1, const Operator& a2,
                                           double eps1, double eps2, double delta1, double delta2);

} // namespace oplab
