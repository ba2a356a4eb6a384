#include <doctest.h>

#include <cmath>

#include <Eigen/SVD>

#include "oplab/errors.hpp"
#include "oplab/expclass.hpp"
#include "oplab/random.hpp"

using namespace oplab;

namespace {

const double kE = std::exp(1.0);

// sum_m mass(m) (exp(lambda m) - 1), summed by brute force in long double
long double family_sum(TailFamily::Kind kind, double lambda) {
    long double s = 0.0L;
    for (int m = 1; m <= 2000; ++m) {
        long double lm = kind == TailFamily::Kind::Example61
                             ? std::log(2.0L * m) - std::lgamma(m + 2.0L)
                             : std::log(2.0L) + std::log1p(-1.0L / (2.0L * kE)) - m * std::log(2.0L * kE);
        s += std::exp(lm + lambda * m) - std::exp(lm);
    }
    return s;
}

// sum_n lambda^n || |A|^n ||_p / n! from singular values, n up to 400
double series_oracle(const Operator& a, double p, double lambda) {
    std::vector<std::pair<double, double>> sv;  // (weight, singular value)
    double top = 0.0;
    for (std::size_t k = 0; k < a.num_blocks(); ++k) {
        Eigen::JacobiSVD<Matrix> svd(a.block(k));
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
            sv.emplace_back(a.algebra()->weight(k), svd.singularValues()(i));
            top = std::max(top, svd.singularValues()(i));
        }
    }
    double total = 0.0;
    for (int n = 1; n <= 400; ++n) {
        double acc = 0.0;
        for (const auto& [w, s] : sv) acc += w * std::pow(s / top, n * p);
        total += std::exp(n * std::log(lambda * top) - std::lgamma(n + 1.0) + std::log(acc) / p);
    }
    return total;
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

TEST_CASE("matrix series by hand") {
    AlgebraRef m3 = BlockAlgebra::full(3);
    ExpClassVerdict zero = exp_series_matrix(*m3, Operator::zero(m3), PIndex::finite(2.0), 1.0);
    CHECK(zero.converged);
    CHECK(zero.value == 0.0);

    for (int d : {1, 2, 5}) {
        AlgebraRef md = BlockAlgebra::full(d);
        for (double lambda : {0.1, 1.0, 3.0}) {
            ExpClassVerdict v = exp_series_matrix(*md, Operator::identity(md), PIndex::finite(1.0), lambda);
            CHECK(v.converged);
            CHECK(v.value == doctest::Approx(d * std::expm1(lambda)).epsilon(1e-13));
            CHECK(*v.closed_form == doctest::Approx(d * std::expm1(lambda)).epsilon(1e-13));
            ExpClassVerdict vi = exp_series_matrix(*md, Operator::identity(md), PIndex::infinity(), lambda);
            CHECK(vi.value == doctest::Approx(std::expm1(lambda)).epsilon(1e-13));
        }
    }
    CHECK_THROWS_AS(exp_series_matrix(*m3, Operator::identity(m3), PIndex::finite(1.0), 0.0), InvalidArgument);
}

TEST_CASE("matrix series against singular values") {
    Rng rng(71);
    for (int trial = 0; trial < 30; ++trial) {
        AlgebraRef alg = random_block_algebra(rng, 5);
        Operator a = random_operator(rng, alg);
        double lambda = uniform(rng, 0.1, 2.0);
        for (double p : {1.0, 2.0, 3.0}) {
            ExpClassVerdict v = exp_series_matrix(*alg, a, PIndex::finite(p), lambda);
            CHECK(v.converged);
            REQUIRE(v.closed_form.has_value());
            CHECK(std::abs(v.value - *v.closed_form) <= 1e-10 * std::max(1.0, v.value));
            CHECK(v.value == doctest::Approx(series_oracle(a, p, lambda)).epsilon(1e-10));
            CHECK(v.tail_bound <= 1e-12 * std::max(1.0, v.value));
        }
        // partial sums increase and the value grows with lambda
        ExpClassVerdict lo = exp_series_matrix(*alg, a, PIndex::finite(2.0), 0.5);
        ExpClassVerdict hi = exp_series_matrix(*alg, a, PIndex::finite(2.0), 1.5);
        for (std::size_t i = 1; i < lo.partial_sums.size(); ++i) CHECK(lo.partial_sums[i] >= lo.partial_sums[i - 1]);
        CHECK(hi.value > lo.value);
    }
}

TEST_CASE("single atom") {
    const double v = 0.7, m = 2.5, lambda = 1.3;
    StepMeasure f({{v, m}});
    ExpClassVerdict one = exp_series_commutative(f, PIndex::finite(1.0), lambda);
    CHECK(one.converged);
    CHECK(one.value == doctest::Approx(m * std::expm1(lambda * v)).epsilon(1e-13));
    ExpClassVerdict two = exp_series_commutative(f, PIndex::finite(2.0), lambda);
    CHECK(two.converged);
    CHECK(two.tail_certified);
    CHECK(two.value == doctest::Approx(std::sqrt(m) * std::expm1(lambda * v)).epsilon(1e-13));
    ExpClassVerdict inf = exp_series_commutative(f, PIndex::infinity(), lambda);
    CHECK(inf.value == doctest::Approx(std::expm1(lambda * v)).epsilon(1e-13));

    CHECK_THROWS_AS(StepMeasure({{-1.0, 1.0}}), InvalidArgument);
    CHECK_THROWS_AS(StepMeasure({{1.0, 0.0}}), InvalidArgument);
}

TEST_CASE("first unbounded family") {
    StepMeasure f = StepMeasure::example61();
    CHECK(f.total_mass() == doctest::Approx(2.0));
    CHECK(std::exp(f.log_power_integral(0.0)) == doctest::Approx(2.0));
    // int f against direct summation
    long double first = 0.0L;
    for (int m = 1; m < 200; ++m) first += std::exp(std::log(2.0L * m * m) - std::lgamma(m + 2.0L));
    CHECK(std::exp(f.log_power_integral(1.0)) == doctest::Approx(static_cast<double>(first)).epsilon(1e-13));

    // value at lambda = 1 as printed
    ExpClassVerdict at1 = exp_series_commutative(f, PIndex::finite(1.0), 1.0);
    CHECK(at1.converged);
    CHECK(at1.value == doctest::Approx(17.8944003157796).epsilon(1e-12));

    double prev = 0.0;
    for (double lambda : {0.25, 0.5, 1.0, 2.0, 3.0}) {
        double oracle = static_cast<double>(family_sum(TailFamily::Kind::Example61, lambda));
        ExpClassVerdict v = exp_series_commutative(f, PIndex::finite(1.0), lambda);
        CHECK(v.converged);
        CHECK(v.tail_certified);
        CHECK(v.value == doctest::Approx(oracle).epsilon(1e-12));
        CHECK(exp_series_closed_form_p1(f, lambda) == doctest::Approx(oracle).epsilon(1e-12));
        CHECK(v.value > prev);
        prev = v.value;
    }
    CHECK(exp_series_closed_form_p1(f, 0.5) == doctest::Approx(3.3053988153278691).epsilon(1e-12));
    CHECK(exp_series_closed_form_p1(f, 2.0) == doctest::Approx(2796.6335006662753).epsilon(1e-12));

    // p = 2 converges too, with an uncertified tail
    ExpClassVerdict p2 = exp_series_commutative(f, PIndex::finite(2.0), 1.0);
    CHECK(p2.converged);
    CHECK_FALSE(p2.tail_certified);
    ExpClassVerdict pinf = exp_series_commutative(f, PIndex::infinity(), 1.0);
    CHECK_FALSE(pinf.converged);
    CHECK(pinf.witness.has_value());
}

TEST_CASE("second unbounded family and doubling") {
    StepMeasure f = StepMeasure::example62();
    CHECK(f.total_mass() == doctest::Approx(1.0 / kE));
    double truth = 2.0 - 2.0 / kE;
    CHECK(static_cast<double>(family_sum(TailFamily::Kind::Example62, 1.0)) == doctest::Approx(truth).epsilon(1e-14));
    ExpClassVerdict v = exp_series_commutative(f, PIndex::finite(1.0), 1.0);
    CHECK(v.converged);
    CHECK(v.value == doctest::Approx(truth).epsilon(1e-12));

    DoublingVerdict dv = divergence_check_double(f, 10.0);
    CHECK(dv.original.converged);
    CHECK_FALSE(dv.original.witness.has_value());
    CHECK_FALSE(dv.doubled.converged);
    REQUIRE(dv.doubled.witness.has_value());
    CHECK(dv.doubled.partial_sums.back() > 10.0);
    CHECK(dv.doubled.partial_sums[*dv.doubled.witness - 2] <= 10.0);
    CHECK(std::isinf(exp_series_closed_form_p1(f.scaled(2.0), 1.0)));

    ExpClassVerdict half = exp_series_commutative(f.scaled(0.5), PIndex::finite(1.0), 1.0);
    CHECK(half.converged);
    CHECK(half.value == doctest::Approx(static_cast<double>(family_sum(TailFamily::Kind::Example62, 0.5))).epsilon(1e-12));

    // e^lambda just under 2e keeps the family summable
    CHECK(std::isfinite(exp_series_closed_form_p1(f, std::log(2.0 * kE) - 1e-3)));
    CHECK(std::isinf(exp_series_closed_form_p1(f, std::log(2.0 * kE))));
    CHECK_THROWS_AS(divergence_check_double(f, 0.0), InvalidArgument);
}

TEST_CASE("exconvex majorants") {
    Rng rng(72);
    for (int trial = 0; trial < 10; ++trial) {
        AlgebraRef alg = random_block_algebra(rng, 4);
        Operator a = random_operator(rng, alg), b = random_operator(rng, alg);
        PIndex p = trial % 2 ? PIndex::finite(2.0) : PIndex::finite(1.5);
        CHECK(all_passed(exconvex_property_check(*alg, a, b, p, {0.3, 1.0}, 10, 900 + trial)));
    }
    CHECK(all_passed(exconvex_measure_check(StepMeasure::example61(), PIndex::finite(1.0), 1.0, 20, 3)));
    CHECK(all_passed(exconvex_measure_check(StepMeasure({{0.5, 1.0}, {2.0, 0.3}}), PIndex::finite(2.0), 0.7, 20, 4)));
    CHECK_THROWS_AS(exconvex_measure_check(StepMeasure::example62(2.0), PIndex::finite(1.0), 1.0, 5, 1), InvalidArgument);
}

TEST_CASE("bounded trace powers") {
    for (int d : {1, 3, 6}) {
        AlgebraRef md = BlockAlgebra::full(d);
        BoundednessVerdict v = boundedness_characterization(*md, Operator::identity(md));
        CHECK(v.bounded);
        CHECK(v.constant == doctest::Approx(d));
    }
    AlgebraRef m2 = BlockAlgebra::full(2);
    BoundednessVerdict z = boundedness_characterization(*m2, Operator::zero(m2));
    CHECK(z.bounded);
    CHECK(z.constant == 0.0);

    Rng rng(73);
    for (int trial = 0; trial < 20; ++trial) {
        AlgebraRef alg = random_block_algebra(rng, 6);
        Operator a = random_operator(rng, alg);
        BoundednessVerdict v = boundedness_characterization(*alg, a);
        CHECK(v.bounded);
        CHECK(v.constant >= op_norm(a) * (1.0 - 1e-12));
    }

    BoundednessVerdict u = boundedness_characterization(StepMeasure::example61(), 10.0);
    CHECK_FALSE(u.bounded);
    REQUIRE(u.witness.has_value());
    // tau(f^n) > 10^n at the witness, checked by direct summation
    long double moment = 0.0L;
    for (int m = 1; m < 400; ++m) moment += std::exp(std::log(2.0L * m) + *u.witness * std::log((long double)m) - std::lgamma(m + 2.0L));
    CHECK(moment > std::pow(10.0L, *u.witness));

    BoundednessVerdict atoms = boundedness_characterization(StepMeasure({{0.5, 1.0}, {2.0, 0.3}}), 2.0);
    CHECK(atoms.bounded);
    CHECK_FALSE(atoms.witness.has_value());
    CHECK_THROWS_AS(boundedness_characterization(StepMeasure::example61(), 0.0), InvalidArgument);
}
