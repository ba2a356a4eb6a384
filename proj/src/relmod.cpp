#include "oplab/relmod.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oplab/errors.hpp"

namespace oplab {

namespace {

void require_member(const BlockAlgebra& alg, const PositiveFunctional& f, const char* where) {
    if (alg != *f.algebra()) throw ShapeError(std::string(where) + ": functional does not belong to the algebra");
}

std::vector<Operator> matrix_units(const AlgebraRef& alg) {
    std::vector<Operator> out;
    for (std::size_t k = 0; k < alg->num_blocks(); ++k)
        for (int i = 0; i < alg->dim(k); ++i)
            for (int j = 0; j < alg->dim(k); ++j) out.push_back(Operator::matrix_unit(alg, k, i, j));
    return out;
}

double psd_scale(const Operator& a) { return std::max(1.0, op_norm(a)); }

} // namespace

BalancedWeight::BalancedWeight(PositiveFunctional phi, PositiveFunctional psi)
    : phi_(std::move(phi)), psi_(std::move(psi)) {
    if (!phi_.density().same_algebra(psi_.density()))
        throw ShapeError("BalancedWeight: functionals live on different algebras");
    doubled_ = phi_.algebra()->doubled();
}

Operator BalancedWeight::density() const {
    return embed(phi_.density(), 0, 0) + embed(psi_.density(), 1, 1);
}

Complex BalancedWeight::evaluate(const Operator& doubled_op) const {
    return phi_.evaluate(corner(doubled_op, 0, 0)) + psi_.evaluate(corner(doubled_op, 1, 1));
}

bool BalancedWeight::faithful() const { return phi_.faithful() && psi_.faithful(); }

Operator BalancedWeight::embed(const Operator& x, int row, int col) const {
    std::vector<Matrix> blocks;
    for (std::size_t k = 0; k < x.num_blocks(); ++k) {
        const int d = x.algebra()->dim(k);
        Matrix m = Matrix::Zero(2 * d, 2 * d);
        m.block(row * d, col * d, d, d) = x.block(k);
        blocks.push_back(std::move(m));
    }
    return Operator(doubled_, std::move(blocks));
}

Operator BalancedWeight::corner(const Operator& doubled_op, int row, int col) const {
    std::vector<Matrix> blocks;
    for (std::size_t k = 0; k < doubled_op.num_blocks(); ++k) {
        const int d = phi_.algebra()->dim(k);
        blocks.push_back(doubled_op.block(k).block(row * d, col * d, d, d));
    }
    return Operator(phi_.algebra(), std::move(blocks));
}

RelativeModular::RelativeModular(Operator rho_phi, Operator rho_psi)
    : rho_phi_(std::move(rho_phi)), rho_psi_(std::move(rho_psi)) {
    double cut_phi = 1e-12 * psd_scale(rho_phi_);
    double cut_psi = 1e-12 * psd_scale(rho_psi_);
    std::vector<Matrix> sp, ss;
    for (std::size_t k = 0; k < rho_phi_.num_blocks(); ++k) {
        eig_phi_.push_back(hermitian_eig(rho_phi_.block(k)));
        eig_psi_.push_back(hermitian_eig(rho_psi_.block(k)));
        int rp = 0, rs = 0;
        for (Eigen::Index i = 0; i < eig_phi_.back().values.size(); ++i) {
            if (eig_phi_.back().values(i) > cut_phi) ++rp;
            if (eig_psi_.back().values(i) > cut_psi) ++rs;
        }
        rank_phi_.push_back(rp);
        rank_psi_.push_back(rs);
        sp.push_back(matrix_function(eig_phi_.back(), [cut_phi](double x) { return Complex(x > cut_phi ? 1.0 : 0.0); }));
        ss.push_back(matrix_function(eig_psi_.back(), [cut_psi](double x) { return Complex(x > cut_psi ? 1.0 : 0.0); }));
    }
    support_phi_ = Operator(rho_phi_.algebra(), std::move(sp));
    support_psi_ = Operator(rho_psi_.algebra(), std::move(ss));
}

Operator RelativeModular::apply(const Operator& x) const { return apply_power(1.0, x); }

Operator RelativeModular::apply_power(Complex z, const Operator& x) const {
    double cut_phi = 1e-12 * psd_scale(rho_phi_);
    double cut_psi = 1e-12 * psd_scale(rho_psi_);
    std::vector<Matrix> out;
    for (std::size_t k = 0; k < x.num_blocks(); ++k) {
        Matrix left = matrix_function(eig_phi_[k], [&](double v) {
            return v > cut_phi ? std::exp(z * std::log(v)) : Complex(0.0);
        });
        Matrix right = matrix_function(eig_psi_[k], [&](double v) {
            return v > cut_psi ? std::exp(-z * std::log(v)) : Complex(0.0);
        });
        out.push_back(left * x.block(k) * right);
    }
    return Operator(x.algebra(), std::move(out));
}

Operator RelativeModular::kernel_projection(const Operator& x) const {
    return x - support_phi_ * x * support_psi_;
}

int RelativeModular::predicted_kernel_dim() const {
    int n = 0;
    for (std::size_t k = 0; k < rank_phi_.size(); ++k) {
        int d = rho_phi_.algebra()->dim(k);
        n += d * d - rank_phi_[k] * rank_psi_[k];
    }
    return n;
}

RelativeModular relative_modular(const BlockAlgebra& alg, const PositiveFunctional& phi, const PositiveFunctional& psi) {
    require_member(alg, phi, "relative_modular");
    require_member(alg, psi, "relative_modular");
    RelativeModular rm(phi.density(), psi.density());
    if (!phi.faithful() && !psi.faithful()) {
        std::ostringstream os;
        os << "relative_modular: both functionals are singular; kernel dimension " << rm.predicted_kernel_dim();
        throw DegenerateSupportError(os.str(), rm.predicted_kernel_dim());
    }
    return rm;
}

Operator relative_modular_via_balanced(const PositiveFunctional& phi, const PositiveFunctional& psi, const Operator& x) {
    BalancedWeight theta(phi, psi);
    if (!theta.faithful()) throw NotFaithfulError("relative_modular_via_balanced: balanced weight is not faithful");
    StandardForm sf(DensityState::normalized(theta.density()));
    StandardFormVector y = sf.delta_power(1.0, StandardFormVector(theta.embed(x, 0, 1)));
    return theta.corner(y.matrix(), 0, 1);
}

int dense_kernel_dim(const RelativeModular& rm, const AlgebraRef& alg) {
    Matrix m = dense_superoperator(alg, [&](const Operator& x) { return rm.apply(x); });
    return alg->hs_dim() - numerical_rank(m, 1e-10);
}

CheckReport relative_modular_check(const PositiveFunctional& phi, const PositiveFunctional& psi) {
    CheckReport rep;
    const AlgebraRef& alg = phi.algebra();
    RelativeModular rm = relative_modular(*alg, phi, psi);
    if (phi.faithful() && psi.faithful()) {
        double res = 0.0;
        for (const auto& e : matrix_units(alg)) {
            Operator a = rm.apply(e);
            Operator b = relative_modular_via_balanced(phi, psi, e);
            res = std::max(res, hs_norm(a - b) / std::max(1.0, hs_norm(a)));
        }
        rep.append(residual_check("balanced_route_matches_direct", res, 1e-10));
    }
    rep.append(equality_check("kernel_dim_matches_support_prediction", dense_kernel_dim(rm, alg),
                              rm.predicted_kernel_dim(), 0.5));
    return rep;
}

Operator sakai_rn(const BlockAlgebra& alg, const PositiveFunctional& phi, const PositiveFunctional& psi) {
    require_member(alg, phi, "sakai_rn");
    require_member(alg, psi, "sakai_rn");
    if (!phi.faithful()) throw NotFaithfulError("sakai_rn: phi must be faithful");
    const Tolerances& tol = default_tolerances();
    Operator gap = phi.density() - psi.density();
    double lo = min_eigenvalue(gap);
    if (lo < -tol.psd * psd_scale(phi.density())) {
        std::ostringstream os;
        os << "sakai_rn: psi is not dominated by phi (eigenvalue " << lo << " of rho_phi - rho_psi)";
        throw DominationError(os.str(), lo);
    }
    Operator r = sqrt_psd(phi.density());
    Operator rinv = complex_power(phi.density(), -0.5);
    Operator middle = r * psi.density() * r;
    middle = middle.map([](const Matrix& m) -> Matrix { return 0.5 * (m + m.adjoint()); });
    Operator h = rinv * sqrt_psd(middle, kInf) * rinv;
    return h.map([](const Matrix& m) -> Matrix { return 0.5 * (m + m.adjoint()); });
}

Operator pedersen_takesaki_rn(const BlockAlgebra& alg, const PositiveFunctional& phi, const PositiveFunctional& psi) {
    require_member(alg, phi, "pedersen_takesaki_rn");
    require_member(alg, psi, "pedersen_takesaki_rn");
    if (!phi.faithful()) throw NotFaithfulError("pedersen_takesaki_rn: phi must be faithful");
    Operator c = commutator(psi.density(), phi.density());
    double cn = op_norm(c);
    double scale = std::max(1.0, op_norm(psi.density()) * op_norm(phi.density()));
    if (cn > default_tolerances().commutator * scale) {
        std::ostringstream os;
        os << "pedersen_takesaki_rn: psi is not invariant under the modular flow of phi (||[rho_psi, rho_phi]|| = "
           << cn << ")";
        throw InvarianceError(os.str(), cn);
    }
    Operator h = psi.density() * complex_power(phi.density(), -1.0);
    return h.map([](const Matrix& m) -> Matrix { return 0.5 * (m + m.adjoint()); });
}

RightMultiplier commutant_rn(const StandardForm& sf, const PositiveFunctional& psi) {
    if (!sf.rho().same_algebra(psi.density())) throw ShapeError("commutant_rn: functional on a different algebra");
    Operator gap = sf.rho() - psi.density();
    double lo = min_eigenvalue(gap);
    if (lo < -default_tolerances().psd * psd_scale(sf.rho())) {
        std::ostringstream os;
        os << "commutant_rn: psi is not dominated by phi (eigenvalue " << lo << " of rho_phi - rho_psi)";
        throw DominationError(os.str(), lo);
    }
    Operator rinv = sf.rho_power(-0.5);
    Operator k = rinv * psi.density() * rinv;
    return RightMultiplier{k.map([](const Matrix& m) -> Matrix { return 0.5 * (m + m.adjoint()); })};
}

namespace {

void append_range_checks(CheckReport& rep, const Operator& h, bool upper) {
    const double psd_tol = default_tolerances().psd;
    double s = psd_scale(h);
    rep.append(inequality_check("h_positive", -min_eigenvalue(h), 0.0, psd_tol * s));
    if (upper) {
        Operator gap = Operator::identity(h.algebra()) - h;
        rep.append(inequality_check("h_at_most_one", -min_eigenvalue(gap), 0.0, psd_tol * s));
    }
}

} // namespace

CheckReport sakai_check(const PositiveFunctional& phi, const PositiveFunctional& psi, const Operator& h) {
    CheckReport rep;
    double res = 0.0;
    for (const auto& e : matrix_units(phi.algebra()))
        res = std::max(res, std::abs(psi.evaluate(e) - phi.evaluate(h * e * h)));
    rep.append(residual_check("sakai_identity", res, 1e-10));
    append_range_checks(rep, h, true);
    return rep;
}

CheckReport pedersen_takesaki_check(const PositiveFunctional& phi, const PositiveFunctional& psi, const Operator& h) {
    CheckReport rep;
    double res = 0.0;
    for (const auto& e : matrix_units(phi.algebra()))
        res = std::max(res, std::abs(psi.evaluate(e) - phi.evaluate(h * e)));
    rep.append(residual_check("pedersen_takesaki_identity", res, 1e-10));
    append_range_checks(rep, h, false);
    double cn = op_norm(commutator(h, phi.density()));
    rep.append(residual_check("h_in_centralizer", cn, default_tolerances().psd * psd_scale(h)));
    return rep;
}

CheckReport commutant_check(const StandardForm& sf, const PositiveFunctional& psi, const RightMultiplier& hp) {
    CheckReport rep;
    auto units = matrix_units(sf.algebra());
    double res = 0.0;
    for (const auto& a : units) {
        StandardFormVector ha = hp.apply(sf.vector_of(a));
        for (const auto& b : units) {
            // psi(B* A) = <B Omega, H' A Omega>, inner product antilinear in the first slot
            Complex lhs = psi.evaluate(b.adjoint() * a);
            Complex rhs = inner(sf.vector_of(b), ha);
            res = std::max(res, std::abs(lhs - rhs));
        }
    }
    rep.append(residual_check("commutant_sesquilinear_identity", res, 1e-10));
    append_range_checks(rep, hp.k, true);
    // H' commutes with every left multiplication, checked on the dense superoperators
    Matrix right = dense_superoperator(sf.algebra(), [&](const Operator& x) { return hp.apply(StandardFormVector(x)).matrix(); });
    double comm = 0.0;
    for (const auto& a : units) {
        Matrix left = dense_left_multiplication(a);
        comm = std::max(comm, (left * right - right * left).norm());
    }
    rep.append(residual_check("h_in_commutant", comm, 1e-12));
    return rep;
}

} // namespace oplab
