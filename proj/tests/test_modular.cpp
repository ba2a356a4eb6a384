#include <doctest.h>

#include <cmath>

#include "oplab/errors.hpp"
#include "oplab/modular.hpp"
#include "oplab/random.hpp"

using namespace oplab;

namespace {

double dist(const StandardFormVector& x, const StandardFormVector& y) { return norm(x - y); }

Operator diag_op(const AlgebraRef& alg, const std::vector<double>& xs) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) v(static_cast<Eigen::Index>(i)) = xs[i];
    return Operator::from_dense(alg, v.asDiagonal().toDenseMatrix());
}

} // namespace

TEST_CASE("tracial state has trivial modular operator") {
    AlgebraRef alg = BlockAlgebra::full(3);
    StandardForm sf(DensityState::normalized(Operator::identity(alg)));
    Rng rng(41);
    Operator x = random_operator(rng, alg);
    StandardFormVector v(x);
    CHECK(dist(sf.delta_power(Complex(0.3, -0.7), v), v) < 1e-12);
    CHECK(max_abs(sf.conjugation(v).matrix() - x.adjoint()) < 1e-15);
    // J A J is right multiplication by A*
    Operator a = random_operator(rng, alg);
    StandardFormVector jaj = sf.conjugation(StandardFormVector(a * sf.conjugation(v).matrix()));
    CHECK(max_abs(jaj.matrix() - x * a.adjoint()) < 1e-12);
}

TEST_CASE("modular operator on a matrix unit") {
    AlgebraRef alg = BlockAlgebra::full(2);
    const double a = 0.3;
    StandardForm sf(DensityState(diag_op(alg, {a, 1.0 - a})));
    StandardFormVector e12(Operator::matrix_unit(alg, 0, 0, 1));
    StandardFormVector d = sf.delta_power(1.0, e12);
    CHECK(dist(d, (a / (1.0 - a)) * e12) < 1e-14);
    std::vector<double> spec = sf.log_modular_spectrum();
    CHECK(std::find_if(spec.begin(), spec.end(), [&](double g) { return std::abs(g - std::log(a / (1.0 - a))) < 1e-12; }) !=
          spec.end());
}

TEST_CASE("Tomita-Takesaki identities on random states") {
    Rng rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        AlgebraRef alg = random_block_algebra(rng, 6);
        StandardForm sf(random_faithful_density(rng, alg));
        CheckReport rep = tomita_check(sf, 30, 1000 + trial);
        for (const auto& c : rep.checks) CHECK_MESSAGE(c.passed, c.name << " residual " << c.residual);
    }
    // two blocks of different weights
    AlgebraRef two = BlockAlgebra::make({{2, 0.4}, {3, 1.7}});
    StandardForm sf(random_faithful_density(rng, two));
    CHECK(tomita_check(sf, 50, 7).passed());
}

TEST_CASE("S = J Delta^(1/2) on matrix units") {
    Rng rng(43);
    AlgebraRef alg = BlockAlgebra::make({{3, 0.5}, {2, 2.0}});
    StandardForm sf(random_faithful_density(rng, alg));
    for (std::size_t k = 0; k < alg->num_blocks(); ++k)
        for (int i = 0; i < alg->dim(k); ++i)
            for (int j = 0; j < alg->dim(k); ++j) {
                Operator e = Operator::matrix_unit(alg, k, i, j);
                StandardFormVector x = sf.vector_of(e);
                CHECK(dist(sf.tomita_s(x), sf.conjugation(sf.delta_power(0.5, x))) < 1e-10);
                CHECK(dist(sf.tomita_s(x), sf.vector_of(e.adjoint())) < 1e-10);
            }
}

TEST_CASE("dense mode agrees with the multiplier form") {
    Rng rng(44);
    AlgebraRef alg = BlockAlgebra::make({{2, 1.3}, {1, 0.6}});
    StandardForm sf(random_faithful_density(rng, alg));
    DenseModular dm = dense_modular(sf);
    Operator x = random_operator(rng, alg);
    Vector c = to_coordinates(x);
    CHECK((dm.delta * c - to_coordinates(sf.delta_power(1.0, StandardFormVector(x)).matrix())).norm() < 1e-10);
    CHECK((dm.j * c.conjugate() - to_coordinates(x.adjoint())).norm() < 1e-10);
    CHECK((dm.delta - dm.delta.adjoint()).norm() < 1e-10);
    CHECK_THROWS_AS(dense_modular(StandardForm(random_faithful_density(rng, BlockAlgebra::full(9)))), InvalidArgument);
}

TEST_CASE("modular flow") {
    Rng rng(45);
    AlgebraRef alg = BlockAlgebra::full(4);
    Operator h = random_hermitian_op(rng, alg);
    Operator gibbs = apply_function(h, [](double x) { return Complex(std::exp(-x)); });
    StandardForm sf(DensityState::normalized(gibbs));
    Operator a = random_operator(rng, alg);

    CHECK(max_abs(sf.modular_flow(0.0, a) - a) < 1e-14);
    // rho = e^{-H}/Z, sigma_z(A) = rho^{iz} A rho^{-iz}
    Operator eh = apply_function(h, [](double x) { return Complex(std::exp(x)); });
    Operator emh = apply_function(h, [](double x) { return Complex(std::exp(-x)); });
    CHECK(max_abs(sf.modular_flow(Complex(0.0, 1.0), a) - eh * a * emh) < 1e-10 * op_norm(eh) * op_norm(emh));
    CHECK(max_abs(sf.modular_flow(Complex(0.0, -1.0), a) - emh * a * eh) < 1e-10 * op_norm(eh) * op_norm(emh));

    // centralizer elements are fixed
    Operator c = apply_function(h, [](double x) { return Complex(std::sin(x)); });
    CHECK(max_abs(sf.modular_flow(Complex(1.7, 0.4), c) - c) < 1e-10);

    for (double t : {-2.0, 0.3, 5.0}) {
        Complex lhs = sf.state().expectation(sf.modular_flow(t, a));
        CHECK(std::abs(lhs - sf.state().expectation(a)) < 1e-11);
    }
}

TEST_CASE("Gaussian smoothing") {
    Rng rng(46);
    AlgebraRef alg = BlockAlgebra::make({{3, 1.0}, {2, 0.5}});
    StandardForm sf(random_faithful_density(rng, alg));
    Operator c = apply_function(sf.rho(), [](double x) { return Complex(x * x - 1.0); });
    CHECK(max_abs(gaussian_smooth(sf, c, 0.7) - c) < 1e-12);

    Operator a = random_operator(rng, alg);
    CHECK(op_norm(gaussian_smooth(sf, a, 1e8) - a) <= 1e-6);

    // sqrt(n/pi) int exp(-n t^2) sigma_t(A) dt by the trapezoid rule, n = 1
    const double h = 0.02;
    Operator quad = Operator::zero(alg);
    for (int i = -500; i <= 500; ++i) {
        double t = i * h;
        quad += (h * std::exp(-t * t) / std::sqrt(M_PI)) * sf.modular_flow(t, a);
    }
    CHECK(op_norm(quad - gaussian_smooth(sf, a, 1.0)) < 1e-8);
    CHECK_THROWS_AS(gaussian_smooth(sf, a, 0.0), InvalidArgument);
}

TEST_CASE("self-dual cones") {
    Rng rng(47);
    AlgebraRef alg = BlockAlgebra::make({{3, 0.8}, {1, 1.4}});
    StandardForm sf(random_faithful_density(rng, alg));
    CHECK(dist(cone_element(sf, 0.25, Operator::identity(alg)), sf.omega()) < 1e-12);

    StandardForm tr(DensityState::normalized(Operator::identity(alg)));
    Operator p = random_positive_op(rng, alg);
    CHECK(dist(cone_element(tr, 0.0, p), cone_element(tr, 0.5, p)) < 1e-12);
    CHECK(dist(cone_element(tr, 0.1, p), cone_element(tr, 0.25, p)) < 1e-12);

    for (int s = 0; s < 50; ++s) {
        Operator a = random_positive_op(rng, alg), b = random_positive_op(rng, alg);
        // <A Omega, Delta^(1/2) B Omega> = tau(rho^(1/2) A rho^(1/2) B) for hermitian A
        Complex pair = inner(cone_element(sf, 0.0, a), cone_element(sf, 0.5, b));
        Operator r = sf.rho_power(0.5);
        CHECK(std::abs(pair - trace(r * a * r * b)) < 1e-12);
        CHECK(pair.real() >= -1e-12);
        CHECK(in_cone(sf, 0.25, cone_element(sf, 0.25, a)));
    }
    Operator indefinite = diag_op(alg, {1.0, -1.0, 0.5, 0.2});
    CHECK_FALSE(in_cone(sf, 0.25, StandardFormVector(sf.rho_power(0.25) * indefinite * sf.rho_power(0.25))));
    CHECK(cone_checks(sf, 0.1, 20, 3).passed());
    CHECK_THROWS_AS(cone_element(sf, 0.6, p), InvalidArgument);
    CHECK_THROWS_AS(cone_element(sf, 0.2, indefinite), NotPositiveError);
}

TEST_CASE("non-faithful states have no standard form") {
    AlgebraRef alg = BlockAlgebra::full(2);
    CHECK_THROWS_AS(StandardForm(DensityState(diag_op(alg, {1.0, 0.0}))), NotFaithfulError);
}
