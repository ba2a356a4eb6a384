#pragma once

#include <memory>
#include <vector>

#include "oplab/algebra.hpp"
#include "oplab/kms.hpp"
#include "oplab/modular.hpp"
#include "oplab/nclp.hpp"
#include "oplab/report.hpp"

namespace oplab {

// t -> exp(tB) A exp(-tB); B = 0 gives a constant path
class OperatorPath {
public:
    static OperatorPath constant(Operator a);
    static OperatorPath conjugated(Operator a, Operator b);
    // rho^t A rho^(-t), generator log rho
    static OperatorPath modular(const StandardForm& sf, Operator a);

    const Operator& base() const { return a_; }
    const Operator& generator() const { return b_; }
    bool is_constant() const { return constant_; }
    const AlgebraRef& algebra() const { return a_.algebra(); }

    Operator at(double t) const;
    Matrix block_at(std::size_t k, double t) const;
    OperatorPath negated() const;
    OperatorPath scaled(double c) const;
    // s -> A(start + s)
    OperatorPath shifted(double start) const;
    // sup of ||A(t)|| over [0, len]; exact for hermitian generators, a bound otherwise
    double sup_norm(double len) const;

private:
    OperatorPath(Operator a, Operator b, bool constant);

    Operator a_, b_;
    bool constant_;
    bool hermitian_generator_;
    std::shared_ptr<const std::vector<EigenSystem>> b_eig_;
};

struct SeriesResult {
    Operator value;
    int terms_used = 0;
    double tail_bound = 0.0;
    double quadrature_error = 0.0;
    bool converged = false;
    std::vector<double> term_norms;   // operator norm of each term, index 0 is the identity
};

struct SeriesOptions {
    int max_terms = 30;
    int min_nodes = 8;
    int max_nodes = 256;
    // the quadrature is refined until successive node counts agree within tol * quadrature_fraction
    double quadrature_fraction = 0.1;
};

// solves f' = f A(t), f(0) = 1 on [0, len]
SeriesResult expansional_r(const OperatorPath& path, double len, double tol, const SeriesOptions& opt = {});
// solves f' = A(t) f, f(0) = 1 on [0, len]
SeriesResult expansional_l(const OperatorPath& path, double len, double tol, const SeriesOptions& opt = {});

// exact values: exp(t(A+B)) exp(-tB) and exp(tB) exp(t(A-B))
Operator expansional_r_closed(const OperatorPath& path, double len);
Operator expansional_l_closed(const OperatorPath& path, double len);

// the two inverse identities and the cocycle splitting at len = t + t2
CheckReport expansional_identities_check(const OperatorPath& path, double t, double t2, double tol = 1e-9);
CheckReport duhamel_check(const Operator& a, const Operator& b, double t, double tol);
// ||Exp_r - 1||_p against the termwise majorant sum t^n || |A|^n ||_p / n!, A hermitian
CheckReport expansional_lp_check(const Operator& a, double t, PIndex p, double tol = 1e-10);

// exp(-beta(H+Q)/2) normalized in the Hilbert-Schmidt norm of tau
StandardFormVector araki_perturbed_vector(const GibbsSystem& gs, const Operator& q);
DensityState araki_perturbed_state(const GibbsSystem& gs, const Operator& q);
// omega^Q against the Gibbs state of H + Q on every matrix unit
CheckReport araki_state_check(const GibbsSystem& gs, const Operator& q, double tol = 1e-10);
CheckReport perturbed_kms_check(const GibbsSystem& gs, const Operator& q, const Operator& a, const Operator& b,
                                const std::vector<double>& t_samples, double tol_rel = 1e-9);

struct Cr1Result {
    SeriesResult series;
    double budget = 0.0;   // tail + quadrature estimate + roundoff floor
};

// sum_n (-1)^n int_{0<=t_n<=...<=t_1<=1/2} Delta^{t_n} Q Delta^{t_{n-1}-t_n} Q ... Delta^{t_1-t_2} Q Omega
Cr1Result cr1_series(const StandardForm& sf, const Operator& q, double trunc_tol, const SeriesOptions& opt = {});
// exp(-(K+Q)/2), K = -log rho
Operator cr1_oracle(const StandardForm& sf, const Operator& q);
CheckReport cr1_vs_oracle(const StandardForm& sf, const Operator& q, double trunc_tol = 1e-8);

// sum_n (t/2 lambda)^n int_{S_n} Delta^{t_n} Q ... Delta^{t_1} Q Omega over {t_i > 0, sum t_i <= 1/2}
SeriesResult cr1_literal_series(const StandardForm& sf, const Operator& q, double t, double lambda, double trunc_tol,
                                const SeriesOptions& opt = {});
// each term is dominated by (x r)^n / n! with x = t / (2 lambda) and r the sup norm of the path
CheckReport cr1_literal_convergence_check(const StandardForm& sf, const Operator& q, double t, double lambda);

// Exp_r over [0, 1/2] of s -> rho^s h rho^(-s), applied to Omega
StandardFormVector expansional_vector(const StandardForm& sf, const Operator& h, double tol = 1e-10);

} // namespace oplab
