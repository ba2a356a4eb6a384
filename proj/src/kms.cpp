#include "oplab/kms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oplab/errors.hpp"
#include "oplab/random.hpp"

namespace oplab {

namespace {

const Complex kI(0.0, 1.0);

DensityState gibbs_density(const std::vector<EigenSystem>& eig, const AlgebraRef& alg, double beta, double* z_out) {
    // shift the spectrum so the largest Boltzmann factor is 1
    double shift = beta >= 0 ? kInf : -kInf;
    for (const auto& es : eig)
        for (Eigen::Index i = 0; i < es.values.size(); ++i)
            shift = beta >= 0 ? std::min(shift, es.values(i)) : std::max(shift, es.values(i));
    std::vector<Matrix> blocks;
    for (const auto& es : eig)
        blocks.push_back(matrix_function(es, [&](double x) { return Complex(std::exp(-beta * (x - shift))); }));
    Operator unnorm(alg, std::move(blocks));
    double tr = trace(unnorm).real();
    if (z_out) *z_out = tr * std::exp(-beta * shift);
    return DensityState::normalized(unnorm);
}

std::vector<EigenSystem> eigen_blocks(const Operator& h) {
    std::vector<EigenSystem> out;
    for (const auto& b : h.blocks()) out.push_back(hermitian_eig(b));
    return out;
}

Operator evolve_with(const std::vector<EigenSystem>& eig, const AlgebraRef& alg, Complex t, const Operator& a) {
    std::vector<Matrix> out;
    for (std::size_t k = 0; k < eig.size(); ++k) {
        Matrix u = matrix_function(eig[k], [&](double e) { return std::exp(kI * t * e); });
        Matrix v = matrix_function(eig[k], [&](double e) { return std::exp(-kI * t * e); });
        out.push_back(u * a.block(k) * v);
    }
    return Operator(alg, std::move(out));
}

Complex kms_function_eig(const std::vector<EigenSystem>& eig, const DensityState& omega, const Operator& a,
                         const Operator& b, Complex z) {
    Complex f = 0.0;
    const AlgebraRef& alg = omega.algebra();
    for (std::size_t k = 0; k < eig.size(); ++k) {
        const Matrix& v = eig[k].vectors;
        const RealVector& e = eig[k].values;
        Matrix ap = v.adjoint() * a.block(k) * v;
        Matrix bp = v.adjoint() * b.block(k) * v;
        Matrix rp = v.adjoint() * omega.rho().block(k) * v;
        for (Eigen::Index i = 0; i < bp.rows(); ++i)
            for (Eigen::Index j = 0; j < bp.cols(); ++j) bp(i, j) *= std::exp(kI * z * (e(i) - e(j)));
        f += alg->weight(k) * (rp * ap * bp).trace();
    }
    return f;
}

} // namespace

GibbsSystem::GibbsSystem(Operator hamiltonian, double beta)
    : h_(std::move(hamiltonian)), beta_(beta), eig_(eigen_blocks(h_)),
      state_(gibbs_density(eig_, h_.algebra(), beta, &z_)) {
    if (!std::isfinite(beta)) throw InvalidArgument("GibbsSystem: beta must be finite");
    if (!state_.faithful()) throw NotFaithfulError("GibbsSystem: Gibbs density underflowed; reduce beta*||H||");
}

Operator GibbsSystem::evolve(Complex t, const Operator& a) const { return evolve_with(eig_, algebra(), t, a); }

Complex kms_function(const GibbsSystem& gs, const Operator& a, const Operator& b, Complex z) {
    return kms_function_eig(gs.h_eigen(), gs.state(), a, b, z);
}

Complex kms_function(const DensityState& omega, const Operator& generator, const Operator& a, const Operator& b,
                     Complex z) {
    return kms_function_eig(eigen_blocks(generator), omega, a, b, z);
}

CheckReport kms_boundary_check(const DensityState& omega, const Operator& generator, double beta, const Operator& a,
                               const Operator& b, const std::vector<double>& t_samples, double tol_rel) {
    if (beta == 0.0) throw InvalidArgument("kms_boundary_check: beta must be non-zero");
    auto eig = eigen_blocks(generator);
    double scale = std::max(1.0, op_norm(a) * op_norm(b));
    double real_res = 0.0, shifted_res = 0.0;
    for (double t : t_samples) {
        // the oracle side goes through matrix exponentials rather than eigenbasis phases
        Operator ut = apply_function(generator, [t](double e) { return std::exp(kI * t * e); });
        Operator bt = ut * b * ut.adjoint();
        Complex f_real = kms_function_eig(eig, omega, a, b, t);
        Complex f_shift = kms_function_eig(eig, omega, a, b, Complex(t, beta));
        real_res = std::max(real_res, std::abs(f_real - omega.expectation(a * bt)));
        shifted_res = std::max(shifted_res, std::abs(f_shift - omega.expectation(bt * a)));
    }
    CheckReport rep;
    rep.append(residual_check("kms_real_axis", real_res, tol_rel * scale));
    rep.append(residual_check("kms_shifted_axis", shifted_res, tol_rel * scale));
    return rep;
}

CheckReport kms_boundary_check(const GibbsSystem& gs, const Operator& a, const Operator& b,
                               const std::vector<double>& t_samples, double tol_rel) {
    return kms_boundary_check(gs.state(), gs.hamiltonian(), gs.beta(), a, b, t_samples, tol_rel);
}

CheckReport modular_condition_check(const StandardForm& sf, const Operator& a, const Operator& b,
                                    const std::vector<double>& t_samples, double tol_rel) {
    // sigma_t = exp(it log rho) . exp(-it log rho) is the dynamics of the generator log rho
    CheckReport rep = kms_boundary_check(sf.state(), sf.log_rho(), -1.0, a, b, t_samples, tol_rel);
    double flow_res = 0.0;
    for (double t : t_samples) {
        Operator via_flow = sf.modular_flow(t, b);
        Operator ut = apply_function(sf.log_rho(), [t](double e) { return std::exp(kI * t * e); });
        flow_res = std::max(flow_res, op_norm(via_flow - ut * b * ut.adjoint()));
    }
    rep.append(residual_check("modular_flow_is_log_rho_dynamics", flow_res, tol_rel * std::max(1.0, op_norm(b))));
    return rep;
}

PContinuousState p_continuous_state(const BlockAlgebra& alg, const DensityState& omega, PIndex p) {
    if (alg != *omega.algebra()) throw ShapeError("p_continuous_state: state does not belong to the algebra");
    PIndex q = p.conjugate();
    return PContinuousState{omega.rho(), p, q, lp_norm(omega.rho(), q)};
}

bool MultiTimeSpec::in_region(double tol) const {
    double s = 0.0;
    for (const auto& z : times) {
        if (z.imag() > tol) return false;
        s += z.imag();
    }
    return s >= -0.5 - tol && s <= tol;
}

StandardFormVector multi_time_vector(const StandardForm& sf, const MultiTimeSpec& spec) {
    if (spec.perturbations.size() != spec.times.size())
        throw InvalidArgument("multi_time_vector: one time per perturbation required");
    if (!spec.in_region()) throw RegionError("multi_time_vector: times lie outside the region S_1/2");
    StandardFormVector x = sf.omega();
    for (std::size_t i = 0; i < spec.times.size(); ++i) {
        Complex w = kI * spec.times[i];
        x = StandardFormVector(sf.rho_power(w) * (spec.perturbations[i] * x.matrix()) * sf.rho_power(-w));
    }
    return x;
}

double cauchy_riemann_residual(const StandardForm& sf, const MultiTimeSpec& spec, double h) {
    double worst = 0.0;
    for (std::size_t k = 0; k < spec.times.size(); ++k) {
        auto shifted = [&](Complex dz) {
            MultiTimeSpec s = spec;
            s.times[k] += dz;
            return multi_time_vector(sf, s).matrix();
        };
        Operator dx = (shifted(h) - shifted(-h)) * (1.0 / (2.0 * h));
        Operator dy = (shifted(Complex(0, h)) - shifted(Complex(0, -h))) * (1.0 / (2.0 * h));
        worst = std::max(worst, hs_norm(dx + kI * dy));
    }
    return worst;
}

namespace {

PIndex scaled(PIndex q, double factor) {
    if (q.is_infinite()) return q;
    return PIndex::finite(factor * q.value());
}

double rep_factor(const StandardForm& sf, PIndex p) { return std::sqrt(lp_norm(sf.rho(), p)); }

} // namespace

double tr1_bound(const StandardForm& sf, PIndex p, const std::vector<Operator>& qs) {
    const std::size_t n = qs.size();
    if (n == 0) throw InvalidArgument("tr1_bound: at least one perturbation required");
    PIndex q = p.conjugate();
    if (n == 1) return rep_factor(sf, p) * lp_norm(qs[0], scaled(q, 2.0));
    double best = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        double v = 1.0;
        for (std::size_t j = 0; j < l; ++j) v *= lp_norm(qs[j], scaled(q, 4.0 * static_cast<double>(l)));
        for (std::size_t j = l; j < n; ++j) v *= lp_norm(qs[j], scaled(q, 4.0 * static_cast<double>(n - l)));
        best = std::max(best, v);
    }
    return rep_factor(sf, p) * best;
}

double tr0_bound(const StandardForm& sf, PIndex p, const std::vector<Operator>& qs) {
    const std::size_t n = qs.size();
    if (n == 0) throw InvalidArgument("tr0_bound: at least one perturbation required");
    PIndex r = scaled(p.conjugate(), 2.0 * static_cast<double>(n));
    double v = rep_factor(sf, p);
    for (const auto& qj : qs) v *= lp_norm(qj, r);
    return v;
}

namespace {

double canonical_schatten(const Matrix& m, PIndex r) {
    Eigen::JacobiSVD<Matrix> svd(m);
    const RealVector& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0.0;
    if (r.is_infinite()) return s(0);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(s(i) / s(0), r.value());
    return s(0) * std::pow(acc, 1.0 / r.value());
}

} // namespace

CheckReport j_symmetry_check(const StandardForm& sf, const std::vector<Operator>& qs, PIndex p) {
    CheckReport rep;
    DenseModular d = dense_modular(sf);
    PIndex r = scaled(p.conjugate(), 2.0 * static_cast<double>(qs.size()));
    double worst = 0.0;
    for (const auto& qj : qs) {
        Matrix l = dense_left_multiplication(qj);
        Matrix jlj = d.j * l.conjugate() * d.j.conjugate();
        double a = canonical_schatten(l, r), b = canonical_schatten(jlj, r);
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, a));
    }
    rep.append(residual_check("j_symmetric_norms", worst, 1e-10));
    return rep;
}

std::vector<std::vector<Complex>> sample_half_region(int n, int count, std::uint64_t seed, double real_span) {
    Rng rng(seed);
    std::vector<std::vector<Complex>> out;
    const int faces = n + 1;   // n extreme faces plus the real face
    const int face_count = count / 2;
    for (int s = 0; s < face_count; ++s) {
        int face = s % faces;
        std::vector<Complex> z(n);
        for (int i = 0; i < n; ++i) z[i] = Complex(uniform(rng, -real_span, real_span), 0.0);
        if (face < n) z[face] = Complex(z[face].real(), -0.5);
        out.push_back(std::move(z));
    }
    std::exponential_distribution<double> ex(1.0);
    while (static_cast<int>(out.size()) < count) {
        std::vector<double> g(n + 1);
        double tot = 0.0;
        for (auto& x : g) tot += (x = ex(rng));
        std::vector<Complex> z(n);
        for (int i = 0; i < n; ++i) z[i] = Complex(uniform(rng, -real_span, real_span), -0.5 * g[i] / tot);
        out.push_back(std::move(z));
    }
    return out;
}

namespace {

double max_vector_norm(const StandardForm& sf, const std::vector<Operator>& qs, int samples, std::uint64_t seed) {
    double worst = 0.0;
    for (const auto& z : sample_half_region(static_cast<int>(qs.size()), samples, seed)) {
        MultiTimeSpec spec{qs, z};
        worst = std::max(worst, norm(multi_time_vector(sf, spec)));
    }
    return worst;
}

} // namespace

CheckReport tr1_bound_check(const StandardForm& sf, PIndex p, const std::vector<Operator>& qs, int boundary_samples,
                            std::uint64_t seed) {
    CheckReport rep;
    double bound = tr1_bound(sf, p, qs);
    double worst = max_vector_norm(sf, qs, boundary_samples, seed);
    rep.append(inequality_check("tr1_bound", worst, bound, 1e-10 * bound));
    return rep;
}

CheckReport tr0_bound_check(const StandardForm& sf, PIndex p, const std::vector<Operator>& qs, int boundary_samples,
                            std::uint64_t seed) {
    CheckReport rep = j_symmetry_check(sf, qs, p);
    if (!rep.passed()) return rep;
    double bound = tr0_bound(sf, p, qs);
    double worst = max_vector_norm(sf, qs, boundary_samples, seed);
    rep.append(inequality_check("tr0_bound", worst, bound, 1e-10 * bound));
    return rep;
}

} // namespace oplab
