#pragma once

#include <cstdint>
#include <vector>

#include "oplab/algebra.hpp"
#include "oplab/modular.hpp"
#include "oplab/nclp.hpp"
#include "oplab/report.hpp"

namespace oplab {

class GibbsSystem {
public:
    GibbsSystem(Operator hamiltonian, double beta);

    const AlgebraRef& algebra() const { return h_.algebra(); }
    const Operator& hamiltonian() const { return h_; }
    double beta() const { return beta_; }
    const DensityState& state() const { return state_; }
    // tau(exp(-beta H))
    double partition() const { return z_; }
    const std::vector<EigenSystem>& h_eigen() const { return eig_; }

    // tau_t(A) = exp(itH) A exp(-itH), t complex
    Operator evolve(Complex t, const Operator& a) const;

private:
    Operator h_;
    double beta_;
    std::vector<EigenSystem> eig_;
    double z_ = 0.0;
    DensityState state_;
};

// F(z) = omega(A exp(izH) B exp(-izH)) evaluated in the eigenbasis of H
Complex kms_function(const GibbsSystem& gs, const Operator& a, const Operator& b, Complex z);
Complex kms_function(const DensityState& omega, const Operator& generator, const Operator& a, const Operator& b,
                     Complex z);

// F(t) = omega(A tau_t(B)) and F(t + i beta) = omega(tau_t(B) A) for the dynamics generated by H
CheckReport kms_boundary_check(const DensityState& omega, const Operator& generator, double beta, const Operator& a,
                               const Operator& b, const std::vector<double>& t_samples, double tol_rel = 1e-10);
CheckReport kms_boundary_check(const GibbsSystem& gs, const Operator& a, const Operator& b,
                               const std::vector<double>& t_samples, double tol_rel = 1e-10);
// the modular flow against omega at beta = -1
CheckReport modular_condition_check(const StandardForm& sf, const Operator& a, const Operator& b,
                                    const std::vector<double>& t_samples, double tol_rel = 1e-10);

struct PContinuousState {
    Operator representer;   // omega(A) = tau(representer A)
    PIndex p;
    PIndex q;
    double norm_q;
};

PContinuousState p_continuous_state(const BlockAlgebra& alg, const DensityState& omega, PIndex p);

struct MultiTimeSpec {
    std::vector<Operator> perturbations;
    std::vector<Complex> times;

    // Im z_i <= 0 and -1/2 <= sum Im z_i <= 0
    bool in_region(double tol = 1e-12) const;
};

// Delta^{i z_n} Q_n ... Delta^{i z_1} Q_1 Omega
StandardFormVector multi_time_vector(const StandardForm& sf, const MultiTimeSpec& spec);

// max over coordinates of the Cauchy-Riemann defect |df/dx + i df/dy| by central differences
double cauchy_riemann_residual(const StandardForm& sf, const MultiTimeSpec& spec, double h = 1e-4);

// ||H||_p^(1/2) max_l (prod_{j<=l} ||Q_j||_{4lq}) (prod_{j>l} ||Q_j||_{4(n-l)q}); n = 1 uses ||Q||_{2q}
double tr1_bound(const StandardForm& sf, PIndex p, const std::vector<Operator>& qs);
// ||H||_p^(1/2) prod ||Q_j||_{2nq}
double tr0_bound(const StandardForm& sf, PIndex p, const std::vector<Operator>& qs);

// ||L_Q||_r and ||J L_Q J||_r agree under the canonical trace of the Hilbert-Schmidt space
CheckReport j_symmetry_check(const StandardForm& sf, const std::vector<Operator>& qs, PIndex p);

// extreme faces (one Im z_k = -1/2, rest 0), the real face, and uniform interior points
std::vector<std::vector<Complex>> sample_half_region(int n, int count, std::uint64_t seed, double real_span = 3.0);

CheckReport tr1_bound_check(const StandardForm& sf, PIndex p, const std::vector<Operator>& qs, int boundary_samples,
                            std::uint64_t seed);
// empty report with a failed hypothesis record when the J-symmetry check fails
CheckReport tr0_bound_check(const StandardForm& sf, PIndex p, const std::vector<Operator>& qs, int boundary_samples,
                            std::uint64_t seed);

} // namespace oplab
