#include "oplab/expclass.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oplab/errors.hpp"
#include "oplab/random.hpp"

namespace oplab {

namespace {

const double kTwoE = 2.0 * std::exp(1.0);
constexpr long kMaxIndex = 100000000;

// Neumaier-compensated sum of exp(l_i), kept relative to the running maximum log
class LogSum {
public:
    void add(double log_term) {
        if (log_term == -kInf) return;
        if (log_term > ref_) {
            double r = std::exp(ref_ - log_term);
            sum_ *= r;
            comp_ *= r;
            ref_ = log_term;
        }
        double x = std::exp(log_term - ref_);
        double t = sum_ + x;
        comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
        sum_ = t;
    }
    double log() const { return ref_ == -kInf ? -kInf : ref_ + std::log(sum_ + comp_); }

private:
    double ref_ = -kInf;
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class Neumaier {
public:
    void add(double x) {
        double t = sum_ + x;
        comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// log of sum_{n > terms} x^n / n!
double log_exp_tail(double x, int terms) {
    if (x <= 0.0) return -kInf;
    LogSum s;
    double lt = (terms + 1) * std::log(x) - std::lgamma(terms + 2.0);
    for (int n = terms + 1; n < terms + 100000; ++n) {
        s.add(lt);
        lt += std::log(x) - std::log(n + 1.0);
        if (lt < s.log() - 45.0) break;
    }
    return s.log();
}

double log_expm1(double x) { return x > 30.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x)); }

} // namespace

std::optional<TailFamily::Kind> TailFamily::parse(const std::string& name) {
    if (name == "example61") return Kind::Example61;
    if (name == "example62") return Kind::Example62;
    return std::nullopt;
}

std::string TailFamily::name() const { return kind == Kind::Example61 ? "example61" : "example62"; }

double TailFamily::log_mass(long m) const {
    const double dm = static_cast<double>(m);
    if (kind == Kind::Example61) return std::log(2.0 * dm) - std::lgamma(dm + 2.0);   // 2(1/m! - 1/(m+1)!)
    return std::log(2.0) + std::log1p(-1.0 / kTwoE) - dm * std::log(kTwoE);
}

double TailFamily::mass_ratio(long m) const {
    const double dm = static_cast<double>(m);
    if (kind == Kind::Example61) return (dm + 1.0) / (dm * (dm + 2.0));
    return 1.0 / kTwoE;
}

double TailFamily::total_mass() const { return kind == Kind::Example61 ? 2.0 : 2.0 / kTwoE; }

StepMeasure::StepMeasure(std::vector<std::pair<double, double>> atoms, std::optional<TailFamily> tail)
    : atoms_(std::move(atoms)), tail_(tail) {
    for (const auto& [v, m] : atoms_) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("StepMeasure: atom values must be finite and >= 0");
        if (!(m > 0.0) || !std::isfinite(m)) throw InvalidArgument("StepMeasure: atom masses must be finite and > 0");
    }
    if (tail_ && !(tail_->scale >= 0.0 && std::isfinite(tail_->scale)))
        throw InvalidArgument("StepMeasure: tail scale must be finite and >= 0");
}

StepMeasure StepMeasure::example61(double scale) { return StepMeasure({}, TailFamily{TailFamily::Kind::Example61, scale}); }

StepMeasure StepMeasure::example62(double scale) { return StepMeasure({}, TailFamily{TailFamily::Kind::Example62, scale}); }

StepMeasure StepMeasure::scaled(double c) const {
    // only |f| enters the series, so the sign of c is dropped
    const double a = std::abs(c);
    std::vector<std::pair<double, double>> atoms = atoms_;
    for (auto& at : atoms) at.first *= a;
    std::optional<TailFamily> tail = tail_;
    if (tail) tail->scale *= a;
    return StepMeasure(std::move(atoms), tail);
}

double StepMeasure::total_mass() const {
    double s = tail_ ? tail_->total_mass() : 0.0;
    for (const auto& at : atoms_) s += at.second;
    return s;
}

double StepMeasure::log_power_integral(double r) const {
    if (r == 0.0) return std::log(total_mass());
    LogSum s;
    for (const auto& [v, m] : atoms_)
        if (v > 0.0) s.add(std::log(m) + r * std::log(v));
    if (!tail_ || tail_->scale == 0.0) return s.log();
    const TailFamily& fam = *tail_;
    for (long m = 1; m < kMaxIndex; ++m) {
        double lt = fam.log_mass(m) + r * std::log(fam.value(m));
        s.add(lt);
        // term ratios from m on are bounded by q, so the rest is at most term * q / (1 - q)
        double q = fam.mass_ratio(m) * std::pow((m + 1.0) / m, r);
        if (q < 1.0 && lt + std::log(q / (1.0 - q)) < s.log() - 40.0) return s.log();
    }
    throw ConvergenceError("StepMeasure: tail sum did not certify within the index cap");
}

double exp_series_closed_form_p1(const StepMeasure& f, double lambda) {
    if (!(lambda > 0.0) || std::isinf(lambda)) throw InvalidArgument("exp_series_closed_form_p1: lambda must be finite and > 0");
    Neumaier atoms;
    for (const auto& [v, m] : f.atoms()) atoms.add(m * std::expm1(lambda * v));
    if (!f.tail() || f.tail()->scale == 0.0) return atoms.value();
    const TailFamily& fam = *f.tail();
    const double a = lambda * fam.scale;
    // mass(m+1)/mass(m) tends to 0 for example61 and to 1/(2e) for example62
    if (fam.kind == TailFamily::Kind::Example62 && std::exp(a) / kTwoE >= 1.0) return kInf;
    LogSum s;
    for (long m = 1; m < kMaxIndex; ++m) {
        double lt = fam.log_mass(m) + log_expm1(a * m);
        s.add(lt);
        double q = fam.mass_ratio(m) * (std::exp(a) + std::expm1(a) / std::expm1(a * m));
        if (q < 1.0 && lt + std::log(q / (1.0 - q)) < s.log() - 40.0) return atoms.value() + std::exp(s.log());
    }
    throw ConvergenceError("exp_series_closed_form_p1: tail did not certify within the index cap");
}

ExpClassVerdict exp_series_commutative(const StepMeasure& f, PIndex p, double lambda, double tol, double threshold) {
    if (!(lambda > 0.0) || std::isinf(lambda)) throw InvalidArgument("exp_series_commutative: lambda must be finite and > 0");
    constexpr int kMaxOuter = 4000;
    ExpClassVerdict out;
    double vmax = 0.0;
    for (const auto& at : f.atoms()) vmax = std::max(vmax, at.first);
    const bool unbounded = f.tail() && f.tail()->scale > 0.0;
    if (p.is_infinite() && unbounded) {
        out.partial_sums.push_back(kInf);
        out.value = kInf;
        out.witness = 1;
        return out;
    }

    Neumaier sum;
    std::vector<double> terms;
    int down_streak = 0;
    for (int n = 1; n <= kMaxOuter; ++n) {
        double log_norm = p.is_infinite() ? (vmax > 0.0 ? n * std::log(vmax) : -kInf)
                                          : f.log_power_integral(n * p.value()) / p.value();
        double term = std::exp(n * std::log(lambda) - std::lgamma(n + 1.0) + log_norm);
        sum.add(term);
        out.partial_sums.push_back(sum.value());
        down_streak = (!terms.empty() && term < terms.back()) || term == 0.0 ? down_streak + 1 : 0;
        terms.push_back(term);
        if (!std::isfinite(sum.value()) || sum.value() > threshold) {
            out.witness = n;
            break;
        }
        if (down_streak >= 3 && term <= tol * sum.value()) {
            out.converged = true;
            break;
        }
        if (sum.value() == 0.0 && n > 1) {
            out.converged = true;
            break;
        }
    }
    out.value = sum.value();
    const int used = static_cast<int>(terms.size());

    if (p == PIndex::finite(1.0)) {
        double closed = exp_series_closed_form_p1(f, lambda);
        out.closed_form = closed;
        if (std::isfinite(closed) && out.converged) {
            out.tail_bound = std::max(0.0, closed - out.value);
            out.value = closed;
            out.tail_certified = true;
        } else if (!std::isfinite(closed)) {
            out.converged = false;
        }
    } else if (!unbounded) {
        // || f^n ||_p <= vmax^n M^(1/p)
        double mass = f.total_mass();
        double mfac = p.is_infinite() ? 1.0 : std::pow(mass, 1.0 / p.value());
        out.tail_bound = mfac * std::exp(log_exp_tail(lambda * vmax, used));
        out.tail_certified = true;
    } else if (out.converged && used >= 2) {
        // geometric extrapolation from the last ratio; not a certified bound
        double q = terms[used - 1] / terms[used - 2];
        out.tail_bound = q < 1.0 ? terms[used - 1] * q / (1.0 - q) : kInf;
        out.tail_certified = false;
    }
    return out;
}

DoublingVerdict divergence_check_double(const StepMeasure& f, double threshold) {
    if (!(threshold > 0.0)) throw InvalidArgument("divergence_check_double: threshold must be positive");
    PIndex one = PIndex::finite(1.0);
    return DoublingVerdict{exp_series_commutative(f, one, 1.0, 1e-15, threshold),
                           exp_series_commutative(f.scaled(2.0), one, 1.0, 1e-15, threshold)};
}

namespace {

// log tau(|A|^r) from singular values
double log_trace_power(const BlockAlgebra& alg, const std::vector<RealVector>& sv, double r) {
    LogSum s;
    for (std::size_t k = 0; k < sv.size(); ++k)
        for (Eigen::Index i = 0; i < sv[k].size(); ++i)
            if (sv[k](i) > 0.0) s.add(std::log(alg.weight(k)) + r * std::log(sv[k](i)));
    return s.log();
}

double max_singular(const std::vector<RealVector>& sv) {
    double m = 0.0;
    for (const auto& v : sv)
        if (v.size() > 0) m = std::max(m, v.maxCoeff());
    return m;
}

// || |A|^n ||_p through singular values
double log_power_norm(const BlockAlgebra& alg, const std::vector<RealVector>& sv, int n, PIndex p) {
    double smax = max_singular(sv);
    if (smax == 0.0) return -kInf;
    if (p.is_infinite()) return n * std::log(smax);
    return log_trace_power(alg, sv, n * p.value()) / p.value();
}

void check_algebra(const BlockAlgebra& alg, const Operator& a, const char* where) {
    if (alg != *a.algebra()) throw ShapeError(std::string(where) + ": operator does not belong to the algebra");
}

} // namespace

ExpClassVerdict exp_series_matrix(const BlockAlgebra& alg, const Operator& a, PIndex p, double lambda, double tol) {
    check_algebra(alg, a, "exp_series_matrix");
    if (!(lambda > 0.0)) throw InvalidArgument("exp_series_matrix: lambda must be > 0");
    if (std::isinf(lambda)) throw InvalidArgument("exp_series_matrix: use exp_series_matrix_grid for lambda = inf");
    constexpr int kMaxTerms = 10000;
    auto sv = block_singular_values(a);
    const double smax = max_singular(sv);
    ExpClassVerdict out;
    out.converged = true;
    out.tail_certified = true;
    if (smax == 0.0) {
        out.partial_sums.push_back(0.0);
        out.closed_form = 0.0;
        return out;
    }

    // route 1: explicit powers of |A| / ||A||
    Operator b = abs_value(a) * (1.0 / smax);
    Operator pw = Operator::identity(a.algebra());
    Neumaier direct, spectral;
    int n = 1;
    for (; n <= kMaxTerms; ++n) {
        pw = pw * b;
        double log_pref = n * std::log(lambda * smax) - std::lgamma(n + 1.0);
        double term = std::exp(log_pref) * lp_norm(alg, pw, p);
        direct.add(term);
        spectral.add(std::exp(n * std::log(lambda) - std::lgamma(n + 1.0) + log_power_norm(alg, sv, n, p)));
        out.partial_sums.push_back(direct.value());
        if (n > lambda * smax && term <= tol * direct.value()) break;
    }
    out.value = direct.value();
    // || |A|^n ||_p <= ||A||^(n-1) ||A||_p
    double ratio = lp_norm(alg, a, p) / smax;
    out.tail_bound = ratio * std::exp(log_exp_tail(lambda * smax, n));

    if (p == PIndex::finite(1.0)) {
        Neumaier closed;
        for (std::size_t k = 0; k < sv.size(); ++k)
            for (Eigen::Index i = 0; i < sv[k].size(); ++i) closed.add(alg.weight(k) * std::expm1(lambda * sv[k](i)));
        out.closed_form = closed.value();
    } else if (p.is_infinite()) {
        out.closed_form = std::expm1(lambda * smax);
    } else {
        out.closed_form = spectral.value();
    }
    return out;
}

std::vector<ExpClassVerdict> exp_series_matrix_grid(const BlockAlgebra& alg, const Operator& a, PIndex p,
                                                    const std::vector<double>& lambdas, double tol) {
    std::vector<ExpClassVerdict> out;
    for (double l : lambdas) out.push_back(exp_series_matrix(alg, a, p, l, tol));
    return out;
}

namespace {

constexpr int kMajorantTerms = 30;

std::vector<double> power_norms(const BlockAlgebra& alg, const Operator& a, PIndex p) {
    auto sv = block_singular_values(a);
    std::vector<double> out(kMajorantTerms + 1);
    for (int n = 1; n <= kMajorantTerms; ++n) out[n] = std::exp(log_power_norm(alg, sv, n, p));
    return out;
}

// largest relative excess of lhs over rhs
double excess(double lhs, double rhs) { return (lhs - rhs) / std::max(1.0, std::abs(rhs)); }

double partial_sum(const std::vector<double>& norms, double lambda, int upto) {
    Neumaier s;
    for (int n = 1; n <= upto; ++n) s.add(std::exp(n * std::log(lambda) - std::lgamma(n + 1.0)) * norms[n]);
    return s.value();
}

} // namespace

CheckReport exconvex_property_check(const BlockAlgebra& alg, const Operator& a, const Operator& b, PIndex p,
                                    const std::vector<double>& lambda_grid, int samples, std::uint64_t seed) {
    check_algebra(alg, a, "exconvex_property_check");
    check_algebra(alg, b, "exconvex_property_check");
    for (double l : lambda_grid)
        if (!exp_series_matrix(alg, a, p, l).converged || !exp_series_matrix(alg, b, p, l).converged)
            throw InvalidArgument("exconvex_property_check: membership precondition failed");

    Rng rng(seed);
    const auto na = power_norms(alg, a, p);
    const auto nb = power_norms(alg, b, p);
    double balanced = -kInf, convex = -kInf, product = -kInf, sum = -kInf, partial = -kInf;
    for (int s = 0; s < samples; ++s) {
        Complex mu = std::polar(uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 2.0 * M_PI));
        double t = uniform(rng, 0.0, 1.0);
        const auto nmu = power_norms(alg, mu * a, p);
        const auto nc = power_norms(alg, t * a + (1.0 - t) * b, p);
        for (int n = 1; n <= kMajorantTerms; ++n) {
            balanced = std::max(balanced, excess(nmu[n], na[n]));
            // Minkowski, then convexity of x^n
            convex = std::max(convex, excess(nc[n], t * na[n] + (1.0 - t) * nb[n]));
        }
        for (double l : lambda_grid)
            for (int n = 1; n <= kMajorantTerms; ++n)
                partial = std::max(partial, excess(partial_sum(nc, l, n), t * partial_sum(na, l, n) +
                                                                              (1.0 - t) * partial_sum(nb, l, n)));
    }
    // Hoelder with exponents np and nq', 1/p + 1/q' = 1
    PIndex q = p.conjugate();
    const auto nq = power_norms(alg, b, q);
    const auto nab = power_norms(alg, a * b, PIndex::finite(1.0));
    const auto nsum = power_norms(alg, a + b, p);
    for (int n = 1; n <= kMajorantTerms; ++n) {
        product = std::max(product, excess(nab[n], na[n] * nq[n]));
        sum = std::max(sum, excess(nsum[n], std::ldexp(na[n] + nb[n], n - 1)));
    }

    CheckReport rep;
    rep.append(inequality_check("exconvex_balanced", balanced, 0.0, 1e-12));
    rep.append(inequality_check("exconvex_convex_terms", convex, 0.0, 1e-12));
    rep.append(inequality_check("exconvex_convex_partial_sums", partial, 0.0, 1e-12));
    rep.append(inequality_check("exconvex_hoelder_product", product, 0.0, 1e-12));
    rep.append(inequality_check("exconvex_sum_majorant", sum, 0.0, 1e-12));
    return rep;
}

CheckReport exconvex_measure_check(const StepMeasure& f, PIndex p, double lambda, int samples, std::uint64_t seed) {
    ExpClassVerdict base = exp_series_commutative(f, p, lambda);
    if (!base.converged) throw InvalidArgument("exconvex_measure_check: membership precondition failed");
    if (p.is_infinite()) throw InvalidArgument("exconvex_measure_check: finite p required");
    Rng rng(seed);
    auto log_norm = [&](const StepMeasure& g, int n) { return g.log_power_integral(n * p.value()) / p.value(); };
    double balanced = -kInf, self_convex = -kInf;
    for (int s = 0; s < samples; ++s) {
        double mu = uniform(rng, -1.0, 1.0);
        double t = uniform(rng, 0.0, 1.0);
        StepMeasure g = f.scaled(mu);
        StepMeasure h = f.scaled(t + (1.0 - t));
        for (int n = 1; n <= kMajorantTerms; ++n) {
            double ln = log_norm(f, n);
            if (mu != 0.0) balanced = std::max(balanced, std::expm1(log_norm(g, n) - ln));
            self_convex = std::max(self_convex, std::expm1(log_norm(h, n) - ln));
        }
        if (mu == 0.0) balanced = std::max(balanced, -1.0);
    }
    CheckReport rep;
    rep.append(inequality_check("exconvex_measure_balanced", balanced, 0.0, 1e-12));
    rep.append(inequality_check("exconvex_measure_self_convex", self_convex, 0.0, 1e-12));
    return rep;
}

BoundednessVerdict boundedness_characterization(const BlockAlgebra& alg, const Operator& a, int max_power) {
    check_algebra(alg, a, "boundedness_characterization");
    auto sv = block_singular_values(a);
    const double smax = max_singular(sv);
    BoundednessVerdict out;
    out.bounded = true;
    out.checked_up_to = max_power;
    if (smax == 0.0) return out;
    const double tr = std::exp(log_trace_power(alg, sv, 1.0));
    out.constant = smax * std::max(1.0, tr / smax);
    for (int n = 1; n <= max_power; ++n) {
        if (log_trace_power(alg, sv, n) > n * std::log(out.constant) + 1e-12) {
            out.bounded = false;
            out.witness = n;
            break;
        }
    }
    return out;
}

BoundednessVerdict boundedness_characterization(const StepMeasure& f, double m_candidate, int max_power) {
    if (!(m_candidate > 0.0)) throw InvalidArgument("boundedness_characterization: candidate must be positive");
    BoundednessVerdict out;
    double vmax = 0.0;
    for (const auto& at : f.atoms()) vmax = std::max(vmax, at.first);
    out.bounded = !(f.tail() && f.tail()->scale > 0.0);
    if (out.bounded && vmax > 0.0) {
        double tr = std::exp(f.log_power_integral(1.0));
        out.constant = vmax * std::max(1.0, tr / vmax);
    }
    for (int n = 1; n <= max_power; ++n) {
        out.checked_up_to = n;
        if (f.log_power_integral(n) > n * std::log(m_candidate) + 1e-12) {
            out.witness = n;
            break;
        }
    }
    return out;
}

} // namespace oplab
