#pragma once

#include <cstdint>
#include <vector>

#include "oplab/algebra.hpp"
#include "oplab/report.hpp"

namespace oplab {

// Exponent in [1, inf]; infinity is a separate state rather than a large float.
class PIndex {
public:
    static PIndex finite(double p);
    static PIndex infinity() { return PIndex(); }

    bool is_infinite() const { return infinite_; }
    // throws for the infinite index
    double value() const;
    // 1/p, zero for infinity
    double reciprocal() const { return infinite_ ? 0.0 : 1.0 / p_; }
    PIndex conjugate() const;

    bool operator==(const PIndex& o) const { return infinite_ == o.infinite_ && (infinite_ || p_ == o.p_); }

private:
    PIndex() : infinite_(true), p_(0.0) {}
    PIndex(double p) : infinite_(false), p_(p) {}
    bool infinite_;
    double p_;
};

double lp_norm(const BlockAlgebra& alg, const Operator& a, PIndex p);
double lp_norm(const Operator& a, PIndex p);
// tau(|A|^r)^(1/r) for any r > 0 (a quasi-norm when r < 1)
double schatten_power_norm(const Operator& a, double r);

struct HolderResult {
    double lhs;   // || prod A_i ||_r
    double rhs;   // prod ||A_i||_{p_i}
    double r;     // 0 encodes r = inf
    double slack;
    bool holds;
    CheckRecord record() const;
};

// r is derived from sum 1/p_i; pass expected_r (0 = infinity) to have it validated
HolderResult holder_check(const BlockAlgebra& alg, const std::vector<Operator>& factors,
                          const std::vector<PIndex>& ps, double slack_rel = 1e-12);
HolderResult holder_check(const BlockAlgebra& alg, const std::vector<Operator>& factors,
                          const std::vector<PIndex>& ps, PIndex expected_r, double slack_rel = 1e-12);

struct MinkowskiResult {
    double lhs;   // ||A + B||_p
    double rhs;   // ||A||_p + ||B||_p
    double slack;
    bool holds;
};
MinkowskiResult minkowski_check(const BlockAlgebra& alg, const Operator& a, const Operator& b, PIndex p,
                                double slack_rel = 1e-12);

// the unit-q-norm dual element attaining tau(A B) = ||A||_p
Operator minkowski_optimizer(const BlockAlgebra& alg, const Operator& a, PIndex p);

Complex duality_pairing(const BlockAlgebra& alg, const Operator& a, const Operator& b);

// max over sampled unit-q elements B of |tau(A B)|
double variational_norm(const BlockAlgebra& alg, const Operator& a, PIndex p, int sample_count,
                        std::uint64_t seed, bool include_optimizer = false);

struct InterpolationResult {
    double lhs;   // ||A||_r
    double rhs;   // ||A||_p^a ||A||_q^b
    double exponent_p;
    double exponent_q;
    bool holds;
};
InterpolationResult interpolation_check(const BlockAlgebra& alg, const Operator& a, PIndex p, PIndex q, PIndex r,
                                        double slack_rel = 1e-12);

} // namespace oplab
