#include <doctest.h>

#include <cmath>

#include "oplab/dyson.hpp"
#include "oplab/errors.hpp"
#include "oplab/quadrature.hpp"
#include "oplab/random.hpp"

using namespace oplab;

namespace {

Operator diag_op(const AlgebraRef& alg, const std::vector<double>& xs) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) v(static_cast<Eigen::Index>(i)) = xs[i];
    return Operator::from_dense(alg, v.asDiagonal().toDenseMatrix());
}

Operator op_exp(const Operator& a) {
    return a.map([](const Matrix& m) -> Matrix { return expm(m); });
}

// classical RK4 for f' = f N(s), N(s) = rho^s Q rho^(-s); independent of the quadrature in the library
Operator rk4_right(const StandardForm& sf, const Operator& q, double len, int steps) {
    auto n_at = [&](double s) { return sf.rho_power(s) * q * sf.rho_power(-s); };
    Operator f = Operator::identity(q.algebra());
    const double h = len / steps;
    for (int i = 0; i < steps; ++i) {
        double s = i * h;
        Operator n0 = n_at(s), nh = n_at(s + 0.5 * h), n1 = n_at(s + h);
        Operator k1 = f * n0;
        Operator k2 = (f + (0.5 * h) * k1) * nh;
        Operator k3 = (f + (0.5 * h) * k2) * nh;
        Operator k4 = (f + h * k3) * n1;
        f += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return f;
}

bool all_passed(const CheckReport& rep) {
    for (const auto& c : rep.checks)
        if (!c.passed) {
            MESSAGE(c.name << " residual " << c.residual << " tol " << c.tolerance);
            return false;
        }
    return true;
}

} // namespace

TEST_CASE("Gauss-Legendre rule and spectral integration") {
    for (int m : {1, 2, 5, 8, 16}) {
        GaussLegendre rule = gauss_legendre(m);
        CHECK(rule.weights.sum() == doctest::Approx(2.0));
        // exact through degree 2m - 1
        for (int deg = 0; deg < 2 * m; ++deg) {
            double q = 0.0;
            for (int i = 0; i < m; ++i) q += rule.weights(i) * std::pow(rule.nodes(i), deg);
            double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
            CHECK(q == doctest::Approx(exact).epsilon(1e-13));
        }
        // running integrals of x^deg, deg < m
        Eigen::MatrixXd s = integration_matrix(rule);
        for (int deg = 0; deg < m; ++deg)
            for (int j = 0; j < m; ++j) {
                double q = 0.0;
                for (int i = 0; i < m; ++i) q += s(j, i) * std::pow(rule.nodes(i), deg);
                double exact = (std::pow(rule.nodes(j), deg + 1) - std::pow(-1.0, deg + 1)) / (deg + 1);
                CHECK(q == doctest::Approx(exact).epsilon(1e-12));
            }
    }
}

TEST_CASE("constant paths give the exponential") {
    Rng rng(71);
    AlgebraRef alg = BlockAlgebra::make({{3, 1.0}, {2, 0.5}});
    Operator z = Operator::zero(alg);
    SeriesResult r0 = expansional_r(OperatorPath::constant(z), 0.8, 1e-12);
    CHECK(max_abs(r0.value - Operator::identity(alg)) == 0.0);

    for (int trial = 0; trial < 20; ++trial) {
        Operator a = random_operator(rng, alg, uniform(rng, 0.2, 1.5));
        double t = uniform(rng, 0.0, 1.0);
        SeriesResult r = expansional_r(OperatorPath::constant(a), t, 1e-12);
        SeriesResult l = expansional_l(OperatorPath::constant(a), t, 1e-12);
        CHECK(op_norm(r.value - op_exp(t * a)) < 1e-11 * std::max(1.0, op_norm(op_exp(t * a))));
        CHECK(op_norm(l.value - op_exp(t * a)) < 1e-11 * std::max(1.0, op_norm(op_exp(t * a))));
        CHECK(r.converged);
    }
}

TEST_CASE("truncation tail bound is honored") {
    Rng rng(72);
    for (int trial = 0; trial < 20; ++trial) {
        AlgebraRef alg = random_block_algebra(rng, 4);
        OperatorPath path = OperatorPath::conjugated(random_operator(rng, alg), random_hermitian_op(rng, alg));
        double t = uniform(rng, 0.1, 1.0);
        SeriesResult loose = expansional_r(path, t, 1e-4);
        SeriesResult tight = expansional_r(path, t, 1e-13);
        CHECK(op_norm(loose.value - tight.value) <= loose.tail_bound + loose.quadrature_error + tight.tail_bound + 1e-12);
        // the first omitted term never exceeds the reported tail
        CHECK(tight.term_norms.size() > loose.term_norms.size());
        CHECK(tight.term_norms[loose.terms_used + 1] <= loose.tail_bound + 1e-14);
    }
}

TEST_CASE("term budget exhaustion raises") {
    Rng rng(73);
    AlgebraRef alg = BlockAlgebra::full(3);
    SeriesOptions opt;
    opt.max_terms = 3;
    CHECK_THROWS_AS(expansional_r(OperatorPath::constant(random_operator(rng, alg, 3.0)), 1.0, 1e-12, opt),
                    ConvergenceError);
    CHECK_THROWS_AS(expansional_r(OperatorPath::constant(Operator::identity(alg)), -1.0, 1e-12), InvalidArgument);
}

TEST_CASE("Duhamel formula") {
    Rng rng(74);
    AlgebraRef alg = BlockAlgebra::full(4);
    Operator a = random_operator(rng, alg), b = random_operator(rng, alg);
    Operator z = Operator::zero(alg);
    CHECK(all_passed(duhamel_check(z, b, 0.7, 1e-12)));
    CHECK(all_passed(duhamel_check(a, z, 0.7, 1e-12)));
    Operator h = random_hermitian_op(rng, alg);
    Operator c1 = apply_function(h, [](double x) { return Complex(std::cos(x), x); });
    Operator c2 = apply_function(h, [](double x) { return Complex(x * x, -0.5); });
    CHECK(all_passed(duhamel_check(c1, c2, 0.7, 1e-10)));
    CHECK(all_passed(duhamel_check(a, b, 0.7, 1e-8)));
}

TEST_CASE("expansional identities") {
    Rng rng(75);
    AlgebraRef alg = BlockAlgebra::make({{2, 1.0}, {2, 0.3}});
    CHECK(all_passed(expansional_identities_check(OperatorPath::constant(Operator::zero(alg)), 0.6, 0.3)));
    CHECK(all_passed(expansional_identities_check(OperatorPath::constant(random_operator(rng, alg)), 0.6, 0.3)));
    for (int trial = 0; trial < 10; ++trial) {
        StandardForm sf(random_faithful_density(rng, alg));
        OperatorPath mod = OperatorPath::modular(sf, random_operator(rng, alg));
        CHECK(all_passed(expansional_identities_check(mod, uniform(rng, 0.1, 1.0), uniform(rng, 0.1, 0.5))));
        OperatorPath gen = OperatorPath::conjugated(random_operator(rng, alg), random_operator(rng, alg));
        CHECK(all_passed(expansional_identities_check(gen, uniform(rng, 0.1, 1.0), uniform(rng, 0.1, 0.5))));
    }
}

TEST_CASE("path sup norm") {
    Rng rng(76);
    AlgebraRef alg = BlockAlgebra::full(3);
    for (int trial = 0; trial < 20; ++trial) {
        OperatorPath herm = OperatorPath::conjugated(random_operator(rng, alg), random_hermitian_op(rng, alg));
        OperatorPath gen = OperatorPath::conjugated(random_operator(rng, alg), random_operator(rng, alg));
        for (const OperatorPath* p : {&herm, &gen}) {
            double sup = p->sup_norm(1.0);
            for (int i = 0; i <= 200; ++i) CHECK(op_norm(p->at(i / 200.0)) <= sup);
        }
    }
}

TEST_CASE("Lp majorant of the expansional") {
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        AlgebraRef alg = random_block_algebra(rng, 5);
        Operator a = random_hermitian_op(rng, alg);
        for (PIndex p : {PIndex::finite(1.0), PIndex::finite(2.5), PIndex::infinity()})
            CHECK(all_passed(expansional_lp_check(a, uniform(rng, 0.1, 1.0), p)));
    }
}

TEST_CASE("Araki perturbation") {
    Rng rng(78);
    AlgebraRef alg = BlockAlgebra::full(5);
    GibbsSystem gs(random_hermitian_op(rng, alg), 1.0);
    StandardForm sf(gs.state());
    CHECK(norm(araki_perturbed_vector(gs, Operator::zero(alg)) - sf.omega()) < 1e-12);
    CHECK(norm(araki_perturbed_vector(gs, 2.5 * Operator::identity(alg)) - sf.omega()) < 1e-12);

    for (int trial = 0; trial < 20; ++trial) {
        GibbsSystem g(random_hermitian_op(rng, alg), uniform(rng, 0.3, 2.0));
        Operator q = random_hermitian_op(rng, alg);
        CHECK(all_passed(araki_state_check(g, q)));
        // direct Gibbs construction
        Operator e = apply_function(g.hamiltonian() + q, [&](double x) { return Complex(std::exp(-g.beta() * x)); });
        DensityState direct = DensityState::normalized(e);
        CHECK(max_abs(araki_perturbed_state(g, q).rho() - direct.rho()) < 1e-10);
        CHECK(all_passed(perturbed_kms_check(g, q, random_operator(rng, alg), random_operator(rng, alg), {-1.0, 0.5})));
    }
    CHECK(all_passed(perturbed_kms_check(gs, Operator::zero(alg), random_operator(rng, alg), random_operator(rng, alg),
                                         {0.3})));

    // two levels, diagonal perturbation: energies (0 + 0.2, 1 - 0.5)
    AlgebraRef m2 = BlockAlgebra::full(2);
    GibbsSystem two(diag_op(m2, {0.0, 1.0}), 2.0);
    DensityState pert = araki_perturbed_state(two, diag_op(m2, {0.2, -0.5}));
    double w0 = std::exp(-2.0 * 0.2), w1 = std::exp(-2.0 * 0.5);
    CHECK(pert.expectation(Operator::matrix_unit(m2, 0, 0, 0)).real() == doctest::Approx(w0 / (w0 + w1)).epsilon(1e-12));
    CHECK_THROWS_AS(araki_perturbed_vector(gs, random_operator(rng, alg)), NotHermitianError);
}

TEST_CASE("CR1 series") {
    Rng rng(79);
    AlgebraRef alg = BlockAlgebra::full(4);
    StandardForm sf(random_faithful_density(rng, alg));
    Cr1Result zero = cr1_series(sf, Operator::zero(alg), 1e-10);
    CHECK(norm(StandardFormVector(zero.series.value) - sf.omega()) < 1e-14);

    // diagonal Q commuting with a diagonal rho: entries exp(-(k_i + q_i)/2)
    StandardForm dsf(DensityState(diag_op(alg, {0.1, 0.2, 0.3, 0.4})));
    std::vector<double> qd = {0.5, -1.0, 2.0, 0.0};
    Cr1Result dres = cr1_series(dsf, diag_op(alg, qd), 1e-12);
    const double rho[4] = {0.1, 0.2, 0.3, 0.4};
    for (int i = 0; i < 4; ++i) {
        double expect = std::exp(-(-std::log(rho[i]) + qd[i]) / 2.0);
        CHECK(std::abs(dres.series.value.block(0)(i, i) - expect) < 1e-11);
    }

    for (int trial = 0; trial < 20; ++trial) {
        StandardForm s(random_faithful_density(rng, alg));
        Operator q = random_hermitian_op(rng, alg, uniform(rng, 0.2, 2.0));
        Cr1Result r = cr1_series(s, q, 1e-8);
        // exact value from the generator, and an ODE solve of the Duhamel form
        Operator oracle = apply_function(s.log_rho() - q, [](double x) { return Complex(std::exp(0.5 * x)); });
        Operator ode = rk4_right(s, -1.0 * q, 0.5, 400) * s.omega().matrix();
        double err = hs_norm(r.series.value - oracle);
        CHECK(err <= 1e-6);
        CHECK(err <= r.budget);
        CHECK(hs_norm(ode - oracle) < 1e-7);
        CHECK(hs_norm(cr1_oracle(s, q) - oracle) < 1e-12);
        CHECK(all_passed(cr1_vs_oracle(s, q)));
    }
}

TEST_CASE("literal CR1 form") {
    Rng rng(80);
    AlgebraRef alg = BlockAlgebra::full(3);
    StandardForm sf(random_faithful_density(rng, alg));
    Operator q = random_hermitian_op(rng, alg);
    // with x = t / (2 lambda) the sum collapses to exp((log rho + x Q) / 2)
    const double t = 0.6, lambda = 0.5;
    SeriesResult lit = cr1_literal_series(sf, q, t, lambda, 1e-12);
    Operator expect = apply_function(sf.log_rho() + (t / (2.0 * lambda)) * q, [](double x) { return Complex(std::exp(0.5 * x)); });
    CHECK(hs_norm(lit.value - expect) < 1e-9);
    CHECK(all_passed(cr1_literal_convergence_check(sf, q, t, lambda)));
    SeriesResult inf = cr1_literal_series(sf, q, t, kInf, 1e-12);
    CHECK(norm(StandardFormVector(inf.value) - sf.omega()) < 1e-14);
    CHECK_THROWS_AS(cr1_literal_series(sf, q, t, 0.0, 1e-12), InvalidArgument);
}

TEST_CASE("expansional vector") {
    Rng rng(81);
    AlgebraRef alg = BlockAlgebra::make({{3, 1.0}, {1, 2.0}});
    StandardForm sf(random_faithful_density(rng, alg));
    CHECK(norm(expansional_vector(sf, Operator::zero(alg)) - sf.omega()) < 1e-14);

    Operator c = apply_function(sf.rho(), [](double x) { return Complex(std::log(x) * 0.3 + 1.0); });
    Operator ec = apply_function(c, [](double x) { return Complex(std::exp(0.5 * x)); });
    CHECK(norm(expansional_vector(sf, c) - StandardFormVector(ec * sf.omega().matrix())) < 1e-9);

    Operator h = random_hermitian_op(rng, alg);
    Cr1Result r = cr1_series(sf, -1.0 * h, 1e-10);
    CHECK(norm(expansional_vector(sf, h) - StandardFormVector(r.series.value)) < 1e-9);
    CHECK_THROWS_AS(expansional_vector(sf, random_operator(rng, alg)), NotHermitianError);
}
