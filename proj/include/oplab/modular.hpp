#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "oplab/algebra.hpp"
#include "oplab/report.hpp"

namespace oplab {

// Vector of the Hilbert-Schmidt space of (M, tau), stored as a block matrix.
class StandardFormVector {
public:
    StandardFormVector() = default;
    explicit StandardFormVector(Operator m) : m_(std::move(m)) {}
    const Operator& matrix() const { return m_; }

    friend StandardFormVector operator+(const StandardFormVector& a, const StandardFormVector& b) {
        return StandardFormVector(a.m_ + b.m_);
    }
    friend StandardFormVector operator-(const StandardFormVector& a, const StandardFormVector& b) {
        return StandardFormVector(a.m_ - b.m_);
    }
    friend StandardFormVector operator*(Complex c, const StandardFormVector& a) { return StandardFormVector(c * a.m_); }

private:
    Operator m_;
};

Complex inner(const StandardFormVector& x, const StandardFormVector& y);
double norm(const StandardFormVector& x);

// Left action of M on L2(M, tau) with cyclic separating vector rho^(1/2).
class StandardForm {
public:
    explicit StandardForm(DensityState state);

    const AlgebraRef& algebra() const { return state_.algebra(); }
    const DensityState& state() const { return state_; }
    const Operator& rho() const { return state_.rho(); }
    const StandardFormVector& omega() const { return omega_; }
    const std::vector<EigenSystem>& rho_eigen() const { return eig_; }

    // rho^z, any complex z
    Operator rho_power(Complex z) const;
    Operator log_rho() const;

    // A Omega
    StandardFormVector vector_of(const Operator& a) const;
    // Delta^z X = rho^z X rho^(-z)
    StandardFormVector delta_power(Complex z, const StandardFormVector& x) const;
    // J X = X*
    StandardFormVector conjugation(const StandardFormVector& x) const;
    // closure of A Omega -> A* Omega, evaluated directly
    StandardFormVector tomita_s(const StandardFormVector& x) const;
    // closure of A' Omega -> A'* Omega for right multiplications A'
    StandardFormVector tomita_f(const StandardFormVector& x) const;

    // sigma_z(A) = rho^(iz) A rho^(-iz)
    Operator modular_flow(Complex z, const Operator& a) const;

    // {log l_i - log l_j} per block
    std::vector<double> log_modular_spectrum() const;

private:
    Operator spectral(const std::function<Complex(double)>& f) const;

    DensityState state_;
    std::vector<EigenSystem> eig_;
    StandardFormVector omega_;
};

StandardForm build_standard_form(const BlockAlgebra& alg, const DensityState& rho);

// Orthonormal coordinates on L2(M, tau): entry (k, i, j) carries sqrt(w_k) X_k(i, j).
Vector to_coordinates(const Operator& x);
Operator from_coordinates(const AlgebraRef& alg, const Vector& v);
// matrix of a linear map on L2(M, tau)
Matrix dense_superoperator(const AlgebraRef& alg, const std::function<Operator(const Operator&)>& f);
// antilinear maps are stored as x -> M conj(x); this returns M
Matrix dense_antilinear(const AlgebraRef& alg, const std::function<Operator(const Operator&)>& f);
Matrix dense_left_multiplication(const Operator& a);

// Dense cross-check mode, built from S alone: Delta = S*S, J = S Delta^(-1/2).
struct DenseModular {
    Matrix s;            // antilinear
    Matrix delta;
    Matrix delta_half;
    Matrix j;            // antilinear
};

DenseModular dense_modular(const StandardForm& sf, int max_hs_dim = 64);

CheckReport tomita_check(const StandardForm& sf, int pair_samples = 100, std::uint64_t seed = 1);

Operator gaussian_smooth(const StandardForm& sf, const Operator& a, double n);

// rho^alpha A rho^(1/2 - alpha) for A >= 0 and alpha in [0, 1/2]
StandardFormVector cone_element(const StandardForm& sf, double alpha, const Operator& a);
bool in_cone(const StandardForm& sf, double alpha, const StandardFormVector& x, double psd_tol = 1e-9);
CheckReport cone_checks(const StandardForm& sf, double alpha, int samples, std::uint64_t seed = 1);

} // namespace oplab
