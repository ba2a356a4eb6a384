#include "oplab/dyson.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oplab/errors.hpp"
#include "oplab/quadrature.hpp"

namespace oplab {

namespace {

std::shared_ptr<const std::vector<EigenSystem>> generator_eigen(const Operator& b, bool hermitian) {
    if (!hermitian) return nullptr;
    auto eig = std::make_shared<std::vector<EigenSystem>>();
    for (const auto& blk : b.blocks()) eig->push_back(hermitian_eig(blk));
    return eig;
}

Operator op_expm(const Operator& a) {
    return a.map([](const Matrix& m) -> Matrix { return expm(m); });
}

// sum_{n > terms} x^n / n!
double exp_tail(double x, int terms) {
    if (x <= 0.0) return 0.0;
    double log_term = (terms + 1) * std::log(x) - std::lgamma(terms + 2.0);
    double term = std::exp(log_term);
    double sum = 0.0;
    for (int n = terms + 1; n < terms + 1000; ++n) {
        sum += term;
        term *= x / (n + 1.0);
        if (term <= 1e-18 * sum) break;
    }
    return sum;
}

struct RawSeries {
    Operator value;
    std::vector<double> term_norms;
};

RawSeries run_series(const OperatorPath& path, double len, int terms, int nodes, bool right) {
    GaussLegendre rule = gauss_legendre(nodes);
    Eigen::MatrixXd s = integration_matrix(rule);
    const double half = 0.5 * len;
    const AlgebraRef& alg = path.algebra();
    std::vector<double> norms(terms + 1, 0.0);
    norms[0] = 1.0;
    std::vector<Matrix> out;
    for (std::size_t k = 0; k < alg->num_blocks(); ++k) {
        const int d = alg->dim(k);
        std::vector<Matrix> a(nodes), f(nodes, Matrix::Identity(d, d)), g(nodes);
        for (int j = 0; j < nodes; ++j) a[j] = path.block_at(k, half * (rule.nodes(j) + 1.0));
        Matrix total = Matrix::Identity(d, d);
        for (int n = 1; n <= terms; ++n) {
            for (int j = 0; j < nodes; ++j) g[j] = right ? Matrix(f[j] * a[j]) : Matrix(a[j] * f[j]);
            Matrix term = Matrix::Zero(d, d);
            for (int l = 0; l < nodes; ++l) term += (half * rule.weights(l)) * g[l];
            for (int j = 0; j < nodes; ++j) {
                Matrix acc = Matrix::Zero(d, d);
                for (int l = 0; l < nodes; ++l) acc += (half * s(j, l)) * g[l];
                f[j] = std::move(acc);
            }
            norms[n] = std::max(norms[n], op_norm(term));
            total += term;
        }
        out.push_back(std::move(total));
    }
    return RawSeries{Operator(alg, std::move(out)), std::move(norms)};
}

void check_divergence(const std::vector<double>& term_norms) {
    // partial sums bounded by running sums of term norms; flag monotone growth past 1e6 of the start
    double partial = 0.0;
    double prev = 0.0;
    int streak = 0;
    for (double t : term_norms) {
        partial += t;
        streak = (partial > prev && partial > 1e6 * term_norms.front()) ? streak + 1 : 0;
        prev = partial;
        if (streak >= 5) {
            std::ostringstream msg;
            msg << "expansional diverges: partial sum bound " << partial << " after " << term_norms.size()
                << " terms";
            throw ConvergenceError(msg.str());
        }
    }
}

SeriesResult expansional(const OperatorPath& path, double len, double tol, const SeriesOptions& opt, bool right) {
    if (!(len >= 0.0)) throw InvalidArgument("expansional: length must be nonnegative");
    if (!(tol > 0.0)) throw InvalidArgument("expansional: tolerance must be positive");
    const double x = len * path.sup_norm(len);
    int terms = 0;
    while (exp_tail(x, terms) > tol && terms < opt.max_terms) ++terms;
    SeriesResult res;
    res.tail_bound = exp_tail(x, terms);

    RawSeries prev = run_series(path, len, terms, opt.min_nodes, right);
    check_divergence(prev.term_norms);
    double qerr = kInf;
    for (int m = 2 * opt.min_nodes; m <= opt.max_nodes && terms > 0; m *= 2) {
        RawSeries next = run_series(path, len, terms, m, right);
        qerr = op_norm(next.value - prev.value);
        prev = std::move(next);
        if (qerr <= opt.quadrature_fraction * tol) break;
    }
    if (terms == 0) qerr = 0.0;

    res.value = std::move(prev.value);
    res.term_norms = std::move(prev.term_norms);
    res.terms_used = terms;
    res.quadrature_error = qerr;
    res.converged = res.tail_bound <= tol && qerr <= opt.quadrature_fraction * tol;
    if (res.tail_bound > tol) {
        std::ostringstream msg;
        msg << "expansional: tail bound " << res.tail_bound << " above " << tol << " after " << opt.max_terms
            << " terms; partial term norms:";
        for (double t : res.term_norms) msg << ' ' << t;
        throw ConvergenceError(msg.str());
    }
    return res;
}

} // namespace

OperatorPath::OperatorPath(Operator a, Operator b, bool constant)
    : a_(std::move(a)), b_(std::move(b)), constant_(constant),
      hermitian_generator_(constant || oplab::is_hermitian(b_)), b_eig_(generator_eigen(b_, !constant && hermitian_generator_)) {}

OperatorPath OperatorPath::constant(Operator a) {
    Operator z = Operator::zero(a.algebra());
    return OperatorPath(std::move(a), std::move(z), true);
}

OperatorPath OperatorPath::conjugated(Operator a, Operator b) {
    if (!a.same_algebra(b)) throw ShapeError("OperatorPath: operators live on different algebras");
    return OperatorPath(std::move(a), std::move(b), false);
}

OperatorPath OperatorPath::modular(const StandardForm& sf, Operator a) { return conjugated(std::move(a), sf.log_rho()); }

Matrix OperatorPath::block_at(std::size_t k, double t) const {
    const Matrix& a = a_.block(k);
    if (constant_ || t == 0.0) return a;
    if (b_eig_) {
        const EigenSystem& es = (*b_eig_)[k];
        Matrix ap = es.vectors.adjoint() * a * es.vectors;
        for (Eigen::Index i = 0; i < ap.rows(); ++i)
            for (Eigen::Index j = 0; j < ap.cols(); ++j) ap(i, j) *= std::exp(t * (es.values(i) - es.values(j)));
        return es.vectors * ap * es.vectors.adjoint();
    }
    return expm(t * b_.block(k)) * a * expm(-t * b_.block(k));
}

Operator OperatorPath::at(double t) const {
    std::vector<Matrix> out;
    for (std::size_t k = 0; k < a_.num_blocks(); ++k) out.push_back(block_at(k, t));
    return Operator(a_.algebra(), std::move(out));
}

OperatorPath OperatorPath::negated() const { return scaled(-1.0); }

OperatorPath OperatorPath::scaled(double c) const {
    OperatorPath p = *this;
    p.a_ = c * a_;
    return p;
}

OperatorPath OperatorPath::shifted(double start) const {
    OperatorPath p = *this;
    p.a_ = at(start);
    return p;
}

double OperatorPath::sup_norm(double len) const {
    if (constant_) return op_norm(a_);
    if (hermitian_generator_) {
        // log ||A(t)|| is convex in t when the generator is hermitian
        return std::max(op_norm(a_), op_norm(at(len))) * (1.0 + 1e-12);
    }
    // ||d/dt A(t)|| <= 2||B|| ||A(t)||, so between grid points the norm grows at most by exp(||B|| h)
    constexpr int kGrid = 64;
    const double h = len / kGrid;
    double best = 0.0;
    for (std::size_t k = 0; k < a_.num_blocks(); ++k) {
        Matrix step = expm(h * b_.block(k)), back = expm(-h * b_.block(k));
        Matrix cur = a_.block(k);
        for (int j = 0; j <= kGrid; ++j) {
            best = std::max(best, op_norm(cur));
            cur = step * cur * back;
        }
    }
    return best * std::exp(op_norm(b_) * h) * (1.0 + 1e-12);
}

SeriesResult expansional_r(const OperatorPath& path, double len, double tol, const SeriesOptions& opt) {
    return expansional(path, len, tol, opt, true);
}

SeriesResult expansional_l(const OperatorPath& path, double len, double tol, const SeriesOptions& opt) {
    return expansional(path, len, tol, opt, false);
}

Operator expansional_r_closed(const OperatorPath& path, double len) {
    const Operator& a = path.base();
    const Operator& b = path.generator();
    return op_expm(len * (a + b)) * op_expm(-len * b);
}

Operator expansional_l_closed(const OperatorPath& path, double len) {
    const Operator& a = path.base();
    const Operator& b = path.generator();
    return op_expm(len * b) * op_expm(len * (a - b));
}

CheckReport expansional_identities_check(const OperatorPath& path, double t, double t2, double tol) {
    const double series_tol = 1e-3 * tol;
    // the tight series tolerance needs more than the default term budget
    SeriesOptions opt;
    opt.max_terms = 120;
    Operator one = Operator::identity(path.algebra());
    Operator er = expansional_r(path, t, series_tol, opt).value;
    Operator el_neg = expansional_l(path.negated(), t, series_tol, opt).value;
    Operator er_long = expansional_r(path, t + t2, series_tol, opt).value;
    Operator er_tail = expansional_r(path.shifted(t), t2, series_tol, opt).value;
    Operator el_long = expansional_l(path, t + t2, series_tol, opt).value;
    Operator el = expansional_l(path, t, series_tol, opt).value;
    Operator el_tail = expansional_l(path.shifted(t), t2, series_tol, opt).value;

    CheckReport rep;
    rep.append(residual_check("left_inverse", op_norm(el_neg * er - one), tol));
    rep.append(residual_check("right_inverse", op_norm(er * el_neg - one), tol));
    rep.append(residual_check("cocycle_r", op_norm(er_long - er * er_tail), tol));
    rep.append(residual_check("cocycle_l", op_norm(el_long - el_tail * el), tol));
    rep.append(residual_check("closed_form_r", op_norm(er - expansional_r_closed(path, t)), tol));
    rep.append(residual_check("closed_form_l", op_norm(el - expansional_l_closed(path, t)), tol));
    return rep;
}

CheckReport duhamel_check(const Operator& a, const Operator& b, double t, double tol) {
    OperatorPath path = OperatorPath::conjugated(a, b);
    SeriesOptions opt;
    opt.max_terms = 120;
    SeriesResult er = expansional_r(path, t, 1e-2 * tol, opt);
    Operator lhs = er.value * op_expm(t * b);
    Operator rhs = op_expm(t * (a + b));
    CheckReport rep;
    CheckRecord r = residual_check("duhamel", op_norm(lhs - rhs), tol);
    r.lhs = op_norm(lhs);
    r.rhs = op_norm(rhs);
    rep.append(r);
    return rep;
}

CheckReport expansional_lp_check(const Operator& a, double t, PIndex p, double tol) {
    if (!is_hermitian(a)) throw NotHermitianError("expansional_lp_check: A must be hermitian");
    Operator one = Operator::identity(a.algebra());
    SeriesResult er = expansional_r(OperatorPath::constant(a), t, 1e-13);
    double lhs = lp_norm(er.value - one, p);
    Operator absa = abs_value(a);
    Operator pw = one;
    double rhs = 0.0;
    double coef = 1.0;
    for (int n = 1; n < 200; ++n) {
        pw = pw * absa;
        coef *= t / n;
        double term = coef * lp_norm(pw, p);
        rhs += term;
        if (term <= 1e-17 * rhs) break;
    }
    CheckReport rep;
    rep.append(inequality_check("expansional_lp_majorant", lhs, rhs, tol * std::max(1.0, rhs)));
    return rep;
}

namespace {

Operator gibbs_half(const GibbsSystem& gs, const Operator& q) {
    if (!is_hermitian(q)) throw NotHermitianError("araki_perturbed_vector: Q must be hermitian");
    Operator hq = gs.hamiltonian() + q;
    const double beta = gs.beta();
    double shift = beta >= 0 ? min_eigenvalue(hq) : max_eigenvalue(hq);
    return apply_function(hq, [&](double x) { return Complex(std::exp(-0.5 * beta * (x - shift))); });
}

} // namespace

StandardFormVector araki_perturbed_vector(const GibbsSystem& gs, const Operator& q) {
    Operator x = gibbs_half(gs, q);
    return StandardFormVector(x * (1.0 / hs_norm(x)));
}

DensityState araki_perturbed_state(const GibbsSystem& gs, const Operator& q) {
    const Operator psi = araki_perturbed_vector(gs, q).matrix();
    // <Psi, A Psi> = tau(Psi* A Psi) = tau(Psi Psi* A)
    return DensityState::normalized(psi * psi.adjoint());
}

CheckReport araki_state_check(const GibbsSystem& gs, const Operator& q, double tol) {
    DensityState pert = araki_perturbed_state(gs, q);
    GibbsSystem direct(gs.hamiltonian() + q, gs.beta());
    const AlgebraRef& alg = gs.algebra();
    double worst = 0.0;
    for (std::size_t k = 0; k < alg->num_blocks(); ++k)
        for (int i = 0; i < alg->dim(k); ++i)
            for (int j = 0; j < alg->dim(k); ++j) {
                Operator e = Operator::matrix_unit(alg, k, i, j);
                worst = std::max(worst, std::abs(pert.expectation(e) - direct.state().expectation(e)));
            }
    CheckReport rep;
    rep.append(residual_check("araki_state_is_gibbs", worst, tol));
    return rep;
}

CheckReport perturbed_kms_check(const GibbsSystem& gs, const Operator& q, const Operator& a, const Operator& b,
                                const std::vector<double>& t_samples, double tol_rel) {
    DensityState pert = araki_perturbed_state(gs, q);
    return kms_boundary_check(pert, gs.hamiltonian() + q, gs.beta(), a, b, t_samples, tol_rel);
}

Cr1Result cr1_series(const StandardForm& sf, const Operator& q, double trunc_tol, const SeriesOptions& opt) {
    if (!is_hermitian(q)) throw NotHermitianError("cr1_series: Q must be hermitian");
    // Delta^{t_n} Q Delta^{t_{n-1}-t_n} Q ... Q Omega = N(t_n) ... N(t_1) Omega with N(s) = rho^s Q rho^(-s)
    SeriesResult sr = expansional_r(OperatorPath::modular(sf, -q), 0.5, trunc_tol, opt);
    if (sr.quadrature_error > opt.quadrature_fraction * trunc_tol) {
        std::ostringstream msg;
        msg << "cr1_series: quadrature error " << sr.quadrature_error << " exceeds budget at " << opt.max_nodes
            << " nodes";
        throw ConvergenceError(msg.str());
    }
    double mass = 0.0;
    for (double t : sr.term_norms) mass += t;
    Cr1Result out;
    out.budget = sr.tail_bound + sr.quadrature_error + 1e-12 * mass;
    sr.value = sr.value * sf.omega().matrix();
    out.series = std::move(sr);
    return out;
}

Operator cr1_oracle(const StandardForm& sf, const Operator& q) {
    Operator gen = 0.5 * (sf.log_rho() - q);
    double top = max_eigenvalue(gen);
    return std::exp(top) * apply_function(gen, [top](double x) { return Complex(std::exp(x - top)); });
}

CheckReport cr1_vs_oracle(const StandardForm& sf, const Operator& q, double trunc_tol) {
    Cr1Result res = cr1_series(sf, q, trunc_tol);
    double err = hs_norm(res.series.value - cr1_oracle(sf, q));
    CheckReport rep;
    rep.append(residual_check("cr1_oracle_agreement", err, 1e-6));
    rep.append(inequality_check("cr1_budget_dominates", err, res.budget, 0.0));
    return rep;
}

SeriesResult cr1_literal_series(const StandardForm& sf, const Operator& q, double t, double lambda, double trunc_tol,
                                const SeriesOptions& opt) {
    if (!(lambda > 0.0)) throw InvalidArgument("cr1_literal_series: lambda must be positive");
    if (!(t >= 0.0)) throw InvalidArgument("cr1_literal_series: t must be nonnegative");
    const double x = std::isinf(lambda) ? 0.0 : t / (2.0 * lambda);
    // with reverse partial sums w_k = t_k + ... + t_n the simplex S_n maps onto the ordered simplex
    SeriesResult sr = expansional_r(OperatorPath::modular(sf, x * q), 0.5, trunc_tol, opt);
    sr.value = sr.value * sf.omega().matrix();
    return sr;
}

CheckReport cr1_literal_convergence_check(const StandardForm& sf, const Operator& q, double t, double lambda) {
    SeriesResult sr = cr1_literal_series(sf, q, t, lambda, 1e-12);
    const double x = std::isinf(lambda) ? 0.0 : t / (2.0 * lambda);
    const double r = 0.5 * OperatorPath::modular(sf, x * q).sup_norm(0.5);
    double worst = 0.0, total = 0.0, coef = 1.0;
    for (std::size_t n = 0; n < sr.term_norms.size(); ++n) {
        if (n > 0) coef *= r / static_cast<double>(n);
        worst = std::max(worst, sr.term_norms[n] - coef * (1.0 + 1e-9) - 1e-13);
        total += sr.term_norms[n];
    }
    CheckReport rep;
    rep.append(inequality_check("cr1_literal_terms_dominated", worst, 0.0, 0.0));
    rep.append(inequality_check("cr1_literal_absolutely_convergent", total, std::exp(r), 1e-9 * std::exp(r)));
    return rep;
}

StandardFormVector expansional_vector(const StandardForm& sf, const Operator& h, double tol) {
    if (!is_hermitian(h)) throw NotHermitianError("expansional_vector: h must be hermitian");
    SeriesResult sr = expansional_r(OperatorPath::modular(sf, h), 0.5, tol);
    return StandardFormVector(sr.value * sf.omega().matrix());
}

} // namespace oplab
