#include "oplab/modular.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oplab/errors.hpp"
#include "oplab/random.hpp"

namespace oplab {

Complex inner(const StandardFormVector& x, const StandardFormVector& y) { return hs_inner(x.matrix(), y.matrix()); }

double norm(const StandardFormVector& x) { return hs_norm(x.matrix()); }

StandardForm::StandardForm(DensityState state) : state_(std::move(state)) {
    if (!state_.faithful()) {
        std::ostringstream os;
        os << "StandardForm: density is not faithful (min eigenvalue " << state_.min_eigenvalue() << ")";
        throw NotFaithfulError(os.str());
    }
    for (const auto& b : state_.rho().blocks()) eig_.push_back(hermitian_eig(b));
    omega_ = StandardFormVector(spectral([](double x) { return Complex(std::sqrt(x)); }));
}

Operator StandardForm::spectral(const std::function<Complex(double)>& f) const {
    std::vector<Matrix> b;
    for (const auto& es : eig_) b.push_back(matrix_function(es, f));
    return Operator(algebra(), std::move(b));
}

Operator StandardForm::rho_power(Complex z) const {
    return spectral([z](double x) { return std::exp(z * std::log(x)); });
}

Operator StandardForm::log_rho() const {
    return spectral([](double x) { return Complex(std::log(x)); });
}

StandardFormVector StandardForm::vector_of(const Operator& a) const { return StandardFormVector(a * omega_.matrix()); }

StandardFormVector StandardForm::delta_power(Complex z, const StandardFormVector& x) const {
    return StandardFormVector(rho_power(z) * x.matrix() * rho_power(-z));
}

StandardFormVector StandardForm::conjugation(const StandardFormVector& x) const {
    return StandardFormVector(x.matrix().adjoint());
}

StandardFormVector StandardForm::tomita_s(const StandardFormVector& x) const {
    // X = A rho^(1/2)  ->  A* rho^(1/2)
    Operator a = x.matrix() * rho_power(-0.5);
    return StandardFormVector(a.adjoint() * omega_.matrix());
}

StandardFormVector StandardForm::tomita_f(const StandardFormVector& x) const {
    // X = rho^(1/2) C  ->  rho^(1/2) C*
    Operator c = rho_power(-0.5) * x.matrix();
    return StandardFormVector(omega_.matrix() * c.adjoint());
}

Operator StandardForm::modular_flow(Complex z, const Operator& a) const {
    Complex iz(-z.imag(), z.real());
    return rho_power(iz) * a * rho_power(-iz);
}

std::vector<double> StandardForm::log_modular_spectrum() const {
    std::vector<double> out;
    for (const auto& es : eig_)
        for (Eigen::Index i = 0; i < es.values.size(); ++i)
            for (Eigen::Index j = 0; j < es.values.size(); ++j)
                out.push_back(std::log(es.values(i)) - std::log(es.values(j)));
    std::sort(out.begin(), out.end());
    return out;
}

StandardForm build_standard_form(const BlockAlgebra& alg, const DensityState& rho) {
    if (alg != *rho.algebra()) throw ShapeError("build_standard_form: density does not belong to the algebra");
    return StandardForm(rho);
}

Vector to_coordinates(const Operator& x) {
    Vector v(x.algebra()->hs_dim());
    Eigen::Index idx = 0;
    for (std::size_t k = 0; k < x.num_blocks(); ++k) {
        double s = std::sqrt(x.algebra()->weight(k));
        const Matrix& b = x.block(k);
        for (Eigen::Index i = 0; i < b.rows(); ++i)
            for (Eigen::Index j = 0; j < b.cols(); ++j) v(idx++) = s * b(i, j);
    }
    return v;
}

Operator from_coordinates(const AlgebraRef& alg, const Vector& v) {
    if (v.size() != alg->hs_dim()) throw ShapeError("from_coordinates: length mismatch");
    std::vector<Matrix> blocks;
    Eigen::Index idx = 0;
    for (const auto& blk : alg->blocks()) {
        double s = 1.0 / std::sqrt(blk.weight);
        Matrix b(blk.dim, blk.dim);
        for (int i = 0; i < blk.dim; ++i)
            for (int j = 0; j < blk.dim; ++j) b(i, j) = s * v(idx++);
        blocks.push_back(std::move(b));
    }
    return Operator(alg, std::move(blocks));
}

Matrix dense_superoperator(const AlgebraRef& alg, const std::function<Operator(const Operator&)>& f) {
    const int n = alg->hs_dim();
    Matrix m(n, n);
    for (int c = 0; c < n; ++c) m.col(c) = to_coordinates(f(from_coordinates(alg, Vector::Unit(n, c))));
    return m;
}

Matrix dense_antilinear(const AlgebraRef& alg, const std::function<Operator(const Operator&)>& f) {
    // on real basis vectors conj(e_c) = e_c, so column c of M is f(e_c)
    return dense_superoperator(alg, f);
}

Matrix dense_left_multiplication(const Operator& a) {
    return dense_superoperator(a.algebra(), [&](const Operator& x) { return a * x; });
}

DenseModular dense_modular(const StandardForm& sf, int max_hs_dim) {
    const AlgebraRef& alg = sf.algebra();
    if (alg->hs_dim() > max_hs_dim) throw InvalidArgument("dense_modular: algebra too large for dense mode");
    DenseModular d;
    d.s = dense_antilinear(alg, [&](const Operator& x) { return sf.tomita_s(StandardFormVector(x)).matrix(); });
    // <Sx, Sy> = <y, Delta x> with S x = M conj(x) gives Delta = conj(M* M)
    Matrix mm = d.s.adjoint() * d.s;
    d.delta = mm.conjugate();
    d.delta = 0.5 * (d.delta + d.delta.adjoint());
    EigenSystem es = hermitian_eig(d.delta);
    d.delta_half = matrix_function(es, [](double x) { return Complex(std::sqrt(std::max(x, 0.0))); });
    Matrix delta_mhalf = matrix_function(es, [](double x) { return Complex(1.0 / std::sqrt(x)); });
    // J x = S Delta^(-1/2) x = M conj(Delta^(-1/2)) conj(x)
    d.j = d.s * delta_mhalf.conjugate();
    return d;
}

namespace {

double fro(const Matrix& m) { return m.norm(); }

} // namespace

CheckReport tomita_check(const StandardForm& sf, int pair_samples, std::uint64_t seed) {
    CheckReport rep;
    const AlgebraRef& alg = sf.algebra();
    const double tol = 1e-10;

    rep.append(equality_check("omega_normalized", inner(sf.omega(), sf.omega()).real(), 1.0, 1e-12));
    rep.append(residual_check("delta_fixes_omega", norm(sf.delta_power(1.0, sf.omega()) - sf.omega()), 1e-12));
    rep.append(residual_check("j_fixes_omega", norm(sf.conjugation(sf.omega()) - sf.omega()), 1e-12));

    // spanning set: all matrix units
    double s_res = 0.0, fs_res = 0.0, inv_res = 0.0;
    std::vector<Vector> images;
    for (std::size_t k = 0; k < alg->num_blocks(); ++k) {
        for (int i = 0; i < alg->dim(k); ++i) {
            for (int j = 0; j < alg->dim(k); ++j) {
                Operator e = Operator::matrix_unit(alg, k, i, j);
                StandardFormVector x = sf.vector_of(e);
                images.push_back(to_coordinates(x.matrix()));
                StandardFormVector expected = sf.vector_of(e.adjoint());
                StandardFormVector via_polar = sf.conjugation(sf.delta_power(0.5, x));
                s_res = std::max(s_res, norm(via_polar - expected));
                StandardFormVector fs = sf.tomita_f(sf.tomita_s(x));
                fs_res = std::max(fs_res, norm(fs - sf.delta_power(1.0, x)));
                StandardFormVector lhs = sf.delta_power(-0.5, x);
                StandardFormVector rhs = sf.conjugation(sf.delta_power(0.5, sf.conjugation(x)));
                inv_res = std::max(inv_res, norm(lhs - rhs));
            }
        }
    }
    rep.append(residual_check("s_equals_j_delta_half", s_res, tol));
    rep.append(residual_check("delta_equals_fs", fs_res, tol));
    rep.append(residual_check("delta_minus_half_equals_j_delta_half_j", inv_res, tol));

    // cyclic and separating: the vectors E_ij Omega are linearly independent
    Matrix span(alg->hs_dim(), static_cast<Eigen::Index>(images.size()));
    for (std::size_t c = 0; c < images.size(); ++c) span.col(static_cast<Eigen::Index>(c)) = images[c];
    int rank = numerical_rank(span, 1e-12);
    rep.append(equality_check("omega_cyclic_rank", rank, alg->hs_dim(), 0.5));

    if (alg->hs_dim() <= 64) {
        DenseModular d = dense_modular(sf);
        Matrix delta_mult = dense_superoperator(alg, [&](const Operator& x) {
            return sf.delta_power(1.0, StandardFormVector(x)).matrix();
        });
        double scale = std::max(1.0, fro(delta_mult));
        rep.append(residual_check("dense_delta_matches_multiplier", fro(d.delta - delta_mult) / scale, tol));
        Matrix j_adj = dense_antilinear(alg, [](const Operator& x) { return x.adjoint(); });
        rep.append(residual_check("dense_j_matches_adjoint", fro(d.j - j_adj), tol));
        const auto n = d.j.rows();
        rep.append(residual_check("j_involution", fro(d.j * d.j.conjugate() - Matrix::Identity(n, n)), tol));
        rep.append(residual_check("j_antiunitary", fro(d.j.adjoint() * d.j - Matrix::Identity(n, n)), tol));

        Rng rng(seed);
        EigenSystem de = hermitian_eig(d.delta);
        double comm = 0.0, flow = 0.0;
        for (int s = 0; s < pair_samples; ++s) {
            Operator a = random_operator(rng, alg);
            Operator b = random_operator(rng, alg);
            Matrix la = dense_left_multiplication(a);
            Matrix lb = dense_left_multiplication(b);
            // J L_A J x = N conj(L_A) conj(N) x
            Matrix jaj = d.j * la.conjugate() * d.j.conjugate();
            comm = std::max(comm, fro(jaj * lb - lb * jaj) / std::max(1.0, fro(la) * fro(lb)));
            double t = uniform(rng, -3.0, 3.0);
            Matrix dit = matrix_function(de, [t](double x) { return std::exp(Complex(0.0, t) * std::log(x)); });
            Matrix conj_la = dit * la * dit.adjoint();
            Matrix lsig = dense_left_multiplication(sf.modular_flow(t, a));
            flow = std::max(flow, fro(conj_la - lsig) / std::max(1.0, fro(la)));
        }
        rep.append(residual_check("commutant_j_m_j", comm, tol));
        rep.append(residual_check("flow_preserves_left_multiplications", flow, tol));
    }
    return rep;
}

Operator gaussian_smooth(const StandardForm& sf, const Operator& a, double n) {
    if (!(n > 0.0)) throw InvalidArgument("gaussian_smooth: n must be positive");
    if (!a.same_algebra(sf.rho())) throw ShapeError("gaussian_smooth: operator does not belong to the algebra");
    std::vector<Matrix> out;
    for (std::size_t k = 0; k < a.num_blocks(); ++k) {
        const EigenSystem& es = sf.rho_eigen()[k];
        Matrix m = es.vectors.adjoint() * a.block(k) * es.vectors;
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                double g = std::log(es.values(i)) - std::log(es.values(j));
                m(i, j) *= std::exp(-g * g / (4.0 * n));
            }
        out.push_back(es.vectors * m * es.vectors.adjoint());
    }
    return Operator(a.algebra(), std::move(out));
}

namespace {

void require_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 0.5)) throw InvalidArgument("cone: alpha must lie in [0, 1/2]");
}

} // namespace

StandardFormVector cone_element(const StandardForm& sf, double alpha, const Operator& a) {
    require_alpha(alpha);
    if (!is_hermitian(a)) throw NotHermitianError("cone_element: A is not hermitian");
    double lo = min_eigenvalue(a);
    if (lo < -1e-9 * std::max(1.0, op_norm(a))) throw NotPositiveError("cone_element: A is not positive", lo);
    return StandardFormVector(sf.rho_power(alpha) * a * sf.rho_power(0.5 - alpha));
}

bool in_cone(const StandardForm& sf, double alpha, const StandardFormVector& x, double psd_tol) {
    require_alpha(alpha);
    Operator a = sf.rho_power(-alpha) * x.matrix() * sf.rho_power(alpha - 0.5);
    double scale = std::max(1.0, op_norm(a));
    if (!is_hermitian(a, psd_tol)) return false;
    return min_eigenvalue(a) >= -psd_tol * scale;
}

CheckReport cone_checks(const StandardForm& sf, double alpha, int samples, std::uint64_t seed) {
    require_alpha(alpha);
    CheckReport rep;
    Rng rng(seed);
    const AlgebraRef& alg = sf.algebra();
    double worst_pair = kInf, worst_imag = 0.0, j_fix = 0.0, quarter_pair = kInf;
    bool members_ok = true, nonmembers_rejected = true;
    for (int s = 0; s < samples; ++s) {
        Operator a = random_positive_op(rng, alg);
        Operator b = random_positive_op(rng, alg);
        StandardFormVector x = cone_element(sf, alpha, a);
        StandardFormVector y = cone_element(sf, 0.5 - alpha, b);
        Complex pair = inner(x, y);
        worst_pair = std::min(worst_pair, pair.real());
        worst_imag = std::max(worst_imag, std::abs(pair.imag()));

        StandardFormVector q1 = cone_element(sf, 0.25, a);
        StandardFormVector q2 = cone_element(sf, 0.25, b);
        j_fix = std::max(j_fix, norm(sf.conjugation(q1) - q1));
        quarter_pair = std::min(quarter_pair, inner(q1, q2).real());
        members_ok = members_ok && in_cone(sf, 0.25, q1) && in_cone(sf, alpha, x);

        // an indefinite hermitian H gives rho^(1/4) H rho^(1/4) outside the quarter cone
        Operator h = random_hermitian_op(rng, alg);
        double shift = 0.5 * (min_eigenvalue(h) + max_eigenvalue(h));
        Operator indefinite = h - Operator::scalar(alg, shift);
        if (min_eigenvalue(indefinite) < -1e-6) {
            StandardFormVector outside(sf.rho_power(0.25) * indefinite * sf.rho_power(0.25));
            nonmembers_rejected = nonmembers_rejected && !in_cone(sf, 0.25, outside);
        }
    }
    rep.append(inequality_check("dual_cone_pairing_nonnegative", -worst_pair, 0.0, 1e-12));
    rep.append(residual_check("dual_cone_pairing_real", worst_imag, 1e-12));
    rep.append(residual_check("quarter_cone_j_fixed", j_fix, 1e-12));
    rep.append(inequality_check("quarter_cone_self_pairing_nonnegative", -quarter_pair, 0.0, 1e-12));
    rep.append(CheckRecord{"cone_membership_members", members_ok ? 1.0 : 0.0, 1.0, members_ok ? 0.0 : 1.0, 0.0,
                           members_ok});
    rep.append(CheckRecord{"cone_membership_nonmembers", nonmembers_rejected ? 1.0 : 0.0, 1.0,
                           nonmembers_rejected ? 0.0 : 1.0, 0.0, nonmembers_rejected});
    return rep;
}

} // namespace oplab
