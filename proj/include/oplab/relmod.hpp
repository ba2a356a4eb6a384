#pragma once

#include "oplab/algebra.hpp"
#include "oplab/modular.hpp"
#include "oplab/report.hpp"

namespace oplab {

// theta(A) = phi(A_11) + psi(A_22) on 2x2 matrices over the algebra
class BalancedWeight {
public:
    BalancedWeight(PositiveFunctional phi, PositiveFunctional psi);

    const PositiveFunctional& phi() const { return phi_; }
    const PositiveFunctional& psi() const { return psi_; }
    const AlgebraRef& doubled_algebra() const { return doubled_; }
    // density of theta relative to the trace of the doubled algebra: diag(rho_phi, rho_psi)
    Operator density() const;
    Complex evaluate(const Operator& doubled_op) const;
    bool faithful() const;

    // place x in corner (row, col) of the doubled algebra
    Operator embed(const Operator& x, int row, int col) const;
    Operator corner(const Operator& doubled_op, int row, int col) const;

private:
    PositiveFunctional phi_, psi_;
    AlgebraRef doubled_;
};

class RelativeModular {
public:
    RelativeModular(Operator rho_phi, Operator rho_psi);

    // X -> rho_phi X rho_psi^+ (pseudo-inverse on the support of psi)
    Operator apply(const Operator& x) const;
    // X -> rho_phi^z X rho_psi^(-z) on the support corner
    Operator apply_power(Complex z, const Operator& x) const;
    const Operator& support_phi() const { return support_phi_; }
    const Operator& support_psi() const { return support_psi_; }
    // X -> (1 - s(phi) X s(psi)) projection onto the kernel
    Operator kernel_projection(const Operator& x) const;
    // sum_k (d_k^2 - rank_phi_k rank_psi_k)
    int predicted_kernel_dim() const;
    std::vector<int> rank_phi() const { return rank_phi_; }
    std::vector<int> rank_psi() const { return rank_psi_; }

private:
    Operator rho_phi_, rho_psi_, support_phi_, support_psi_;
    std::vector<EigenSystem> eig_phi_, eig_psi_;
    std::vector<int> rank_phi_, rank_psi_;
};

RelativeModular relative_modular(const BlockAlgebra& alg, const PositiveFunctional& phi, const PositiveFunctional& psi);

// Delta_{phi,psi} obtained from the modular operator of the balanced weight on the doubled algebra
Operator relative_modular_via_balanced(const PositiveFunctional& phi, const PositiveFunctional& psi, const Operator& x);

// kernel dimension of the dense superoperator X -> rho_phi X rho_psi^+
int dense_kernel_dim(const RelativeModular& rm, const AlgebraRef& alg);

CheckReport relative_modular_check(const PositiveFunctional& phi, const PositiveFunctional& psi);

Operator sakai_rn(const BlockAlgebra& alg, const PositiveFunctional& phi, const PositiveFunctional& psi);
Operator pedersen_takesaki_rn(const BlockAlgebra& alg, const PositiveFunctional& phi, const PositiveFunctional& psi);

// right multiplication X -> X K on the standard form of phi
struct RightMultiplier {
    Operator k;
    StandardFormVector apply(const StandardFormVector& x) const { return StandardFormVector(x.matrix() * k); }
};

RightMultiplier commutant_rn(const StandardForm& sf, const PositiveFunctional& psi);

CheckReport sakai_check(const PositiveFunctional& phi, const PositiveFunctional& psi, const Operator& h);
CheckReport pedersen_takesaki_check(const PositiveFunctional& phi, const PositiveFunctional& psi, const Operator& h);
CheckReport commutant_check(const StandardForm& sf, const PositiveFunctional& psi, const RightMultiplier& hp);

} // namespace oplab
