#include "oplab/nclp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oplab/errors.hpp"
#include "oplab/random.hpp"

namespace oplab {

PIndex PIndex::finite(double p) {
    if (std::isinf(p) && p > 0) return infinity();
    if (!(p >= 1.0)) {
        std::ostringstream os;
        os << "PIndex: p must be >= 1, got " << p;
        throw InvalidArgument(os.str());
    }
    return PIndex(p);
}

double PIndex::value() const {
    if (infinite_) throw InvalidArgument("PIndex::value: index is infinite");
    return p_;
}

PIndex PIndex::conjugate() const {
    if (infinite_) return finite(1.0);
    if (p_ == 1.0) return infinity();
    return finite(p_ / (p_ - 1.0));
}

namespace {

void require_member(const BlockAlgebra& alg, const Operator& a, const char* where) {
    if (alg != *a.algebra()) throw ShapeError(std::string(where) + ": operator does not belong to the algebra");
}

// (sum_k w_k sum_i s_i^r)^(1/r) with the largest singular value factored out
double weighted_power_sum_root(const Operator& a, double r) {
    auto svs = block_singular_values(a);
    double top = 0.0;
    for (const auto& s : svs)
        if (s.size()) top = std::max(top, s(s.size() - 1));
    if (top == 0.0) return 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < svs.size(); ++k) {
        double w = a.algebra()->weight(k);
        for (Eigen::Index i = 0; i < svs[k].size(); ++i) acc += w * std::pow(svs[k](i) / top, r);
    }
    return top * std::pow(acc, 1.0 / r);
}

} // namespace

double lp_norm(const Operator& a, PIndex p) {
    if (p.is_infinite()) return op_norm(a);
    return weighted_power_sum_root(a, p.value());
}

double lp_norm(const BlockAlgebra& alg, const Operator& a, PIndex p) {
    require_member(alg, a, "lp_norm");
    return lp_norm(a, p);
}

double schatten_power_norm(const Operator& a, double r) {
    if (!(r > 0.0)) throw InvalidArgument("schatten_power_norm: r must be positive");
    if (std::isinf(r)) return op_norm(a);
    return weighted_power_sum_root(a, r);
}

CheckRecord HolderResult::record() const {
    return CheckRecord{"holder", lhs, rhs, std::max(0.0, lhs - rhs), slack, holds};
}

HolderResult holder_check(const BlockAlgebra& alg, const std::vector<Operator>& factors,
                          const std::vector<PIndex>& ps, double slack_rel) {
    if (factors.empty() || factors.size() != ps.size())
        throw InvalidArgument("holder_check: need one exponent per factor");
    double inv_r = 0.0;
    for (const auto& p : ps) inv_r += p.reciprocal();
    Operator prod = factors.front();
    require_member(alg, prod, "holder_check");
    for (std::size_t i = 1; i < factors.size(); ++i) {
        require_member(alg, factors[i], "holder_check");
        prod = prod * factors[i];
    }
    double lhs = inv_r == 0.0 ? op_norm(prod) : schatten_power_norm(prod, 1.0 / inv_r);
    double rhs = 1.0, scale = 1.0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        double n = lp_norm(factors[i], ps[i]);
        rhs *= n;
        scale *= std::max(1.0, n);
    }
    double slack = slack_rel * scale;
    return HolderResult{lhs, rhs, inv_r == 0.0 ? 0.0 : 1.0 / inv_r, slack, lhs <= rhs + slack};
}

HolderResult holder_check(const BlockAlgebra& alg, const std::vector<Operator>& factors,
                          const std::vector<PIndex>& ps, PIndex expected_r, double slack_rel) {
    double inv_r = 0.0;
    for (const auto& p : ps) inv_r += p.reciprocal();
    if (std::abs(inv_r - expected_r.reciprocal()) > 1e-12) {
        std::ostringstream os;
        os << "holder_check: sum of 1/p_i is " << inv_r << " but 1/r is " << expected_r.reciprocal();
        throw InvalidArgument(os.str());
    }
    return holder_check(alg, factors, ps, slack_rel);
}

MinkowskiResult minkowski_check(const BlockAlgebra& alg, const Operator& a, const Operator& b, PIndex p,
                                double slack_rel) {
    require_member(alg, a, "minkowski_check");
    require_member(alg, b, "minkowski_check");
    double na = lp_norm(a, p), nb = lp_norm(b, p);
    double lhs = lp_norm(a + b, p);
    double slack = slack_rel * std::max(1.0, na + nb);
    return MinkowskiResult{lhs, na + nb, slack, lhs <= na + nb + slack};
}

Operator minkowski_optimizer(const BlockAlgebra& alg, const Operator& a, PIndex p) {
    require_member(alg, a, "minkowski_optimizer");
    if (p.is_infinite() || p.value() <= 1.0) throw InvalidArgument("minkowski_optimizer: requires 1 < p < inf");
    double pv = p.value();
    double norm = lp_norm(a, p);
    if (norm == 0.0) throw InvalidArgument("minkowski_optimizer: A = 0 has no normalized optimizer");
    // |A|^(p-1) u* = (u |A|^(p-1))*, scaled so the p-th power sum is 1
    Operator out = a.map([&](const Matrix& m) -> Matrix {
        Polar pd = polar(m);
        Matrix pw = matrix_function(pd.p, [&](double x) { return Complex(std::pow(std::max(x, 0.0) / norm, pv - 1.0)); });
        return pw * pd.u.adjoint();
    });
    return out;
}

Complex duality_pairing(const BlockAlgebra& alg, const Operator& a, const Operator& b) {
    require_member(alg, a, "duality_pairing");
    require_member(alg, b, "duality_pairing");
    return trace(a * b);
}

double variational_norm(const BlockAlgebra& alg, const Operator& a, PIndex p, int sample_count, std::uint64_t seed,
                        bool include_optimizer) {
    require_member(alg, a, "variational_norm");
    if (sample_count < 1) throw InvalidArgument("variational_norm: sample_count must be >= 1");
    PIndex q = p.conjugate();
    Rng rng(seed);
    double best = 0.0;
    for (int s = 0; s < sample_count; ++s) {
        Operator b = random_operator(rng, a.algebra());
        double nb = lp_norm(b, q);
        if (nb == 0.0) continue;
        best = std::max(best, std::abs(trace(a * b)) / nb);
    }
    if (include_optimizer && !p.is_infinite() && p.value() > 1.0 && lp_norm(a, p) > 0.0) {
        Operator b = minkowski_optimizer(alg, a, p);
        best = std::max(best, std::abs(trace(a * b)) / lp_norm(b, q));
    }
    return best;
}

InterpolationResult interpolation_check(const BlockAlgebra& alg, const Operator& a, PIndex p, PIndex q, PIndex r,
                                        double slack_rel) {
    require_member(alg, a, "interpolation_check");
    if (p.is_infinite()) throw InvalidArgument("interpolation_check: p must be finite");
    double pv = p.value();
    bool r_inf = r.is_infinite();
    if (r_inf && !q.is_infinite()) throw InvalidArgument("interpolation_check: ordering p <= r <= q violated");
    if (!r_inf && (r.value() < pv || (!q.is_infinite() && r.value() > q.value())))
        throw InvalidArgument("interpolation_check: ordering p <= r <= q violated");
    if (!q.is_infinite() && q.value() < pv) throw InvalidArgument("interpolation_check: ordering p <= r <= q violated");

    double np = lp_norm(a, p), nq = lp_norm(a, q), nr = lp_norm(a, r);
    double ea, eb;
    if (q.is_infinite()) {
        double rv = r_inf ? kInf : r.value();
        ea = r_inf ? 0.0 : pv / rv;
        eb = 1.0 - ea;
    } else if (q.value() == pv) {
        ea = 1.0;
        eb = 0.0;
    } else {
        double qv = q.value(), rv = r.value();
        ea = (pv / (qv - pv)) * (qv / rv - 1.0);
        eb = (qv / (qv - pv)) * (1.0 - pv / rv);
    }
    double rhs = (ea == 0.0 ? 1.0 : std::pow(np, ea)) * (eb == 0.0 ? 1.0 : std::pow(nq, eb));
    double slack = slack_rel * std::max(1.0, rhs);
    return InterpolationResult{nr, rhs, ea, eb, nr <= rhs + slack};
}

} // namespace oplab
