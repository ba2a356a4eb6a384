#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oplab/algebra.hpp"
#include "oplab/nclp.hpp"
#include "oplab/report.hpp"

namespace oplab {

// Step functions with values scale*m on sets of measure mass(m), m = 1, 2, ...
struct TailFamily {
    enum class Kind { Example61, Example62 };
    Kind kind = Kind::Example61;
    double scale = 1.0;

    static std::optional<Kind> parse(const std::string& name);
    std::string name() const;
    double value(long m) const { return scale * static_cast<double>(m); }
    double log_mass(long m) const;
    // sup over m' >= m of mass(m'+1) / mass(m')
    double mass_ratio(long m) const;
    double total_mass() const;
};

class StepMeasure {
public:
    StepMeasure() = default;
    StepMeasure(std::vector<std::pair<double, double>> atoms, std::optional<TailFamily> tail = std::nullopt);

    static StepMeasure example61(double scale = 1.0);
    static StepMeasure example62(double scale = 1.0);

    // (value, mass) pairs
    const std::vector<std::pair<double, double>>& atoms() const { return atoms_; }
    const std::optional<TailFamily>& tail() const { return tail_; }
    StepMeasure scaled(double c) const;
    double total_mass() const;
    bool bounded() const { return !tail_.has_value(); }

    // log of the integral of f^r, with a certified tail over the family
    double log_power_integral(double r) const;

private:
    std::vector<std::pair<double, double>> atoms_;
    std::optional<TailFamily> tail_;
};

struct ExpClassVerdict {
    bool converged = false;
    double value = 0.0;                 // best estimate of the series
    std::vector<double> partial_sums;   // sum_{n<=N} lambda^n || |A|^n ||_p / n!
    double tail_bound = 0.0;
    bool tail_certified = false;
    std::optional<int> witness;         // first N whose partial sum passed the threshold
    std::optional<double> closed_form;  // second route where one exists
};

ExpClassVerdict exp_series_matrix(const BlockAlgebra& alg, const Operator& a, PIndex p, double lambda,
                                  double tol = 1e-15);
// the infinite index is tested on the supplied grid
std::vector<ExpClassVerdict> exp_series_matrix_grid(const BlockAlgebra& alg, const Operator& a, PIndex p,
                                                    const std::vector<double>& lambdas, double tol = 1e-15);

ExpClassVerdict exp_series_commutative(const StepMeasure& f, PIndex p, double lambda, double tol = 1e-15,
                                       double threshold = kInf);
// sum_m mass(m) (exp(lambda v_m) - 1), the p = 1 value; infinite when the family outgrows its masses
double exp_series_closed_form_p1(const StepMeasure& f, double lambda);

struct DoublingVerdict {
    ExpClassVerdict original;
    ExpClassVerdict doubled;
};

DoublingVerdict divergence_check_double(const StepMeasure& f, double threshold);

// termwise majorants for balanced hulls, convex combinations, Hoelder products and sums
CheckReport exconvex_property_check(const BlockAlgebra& alg, const Operator& a, const Operator& b, PIndex p,
                                    const std::vector<double>& lambda_grid, int samples, std::uint64_t seed = 1);
CheckReport exconvex_measure_check(const StepMeasure& f, PIndex p, double lambda, int samples,
                                   std::uint64_t seed = 1);

struct BoundednessVerdict {
    bool bounded = false;
    double constant = 0.0;        // certified M with tau(|A|^n) <= M^n
    std::optional<int> witness;   // n with tau(|A|^n) > M_candidate^n
    int checked_up_to = 0;
};

BoundednessVerdict boundedness_characterization(const BlockAlgebra& alg, const Operator& a, int max_power = 50);
BoundednessVerdict boundedness_characterization(const StepMeasure& f, double m_candidate, int max_power = 10000);

} // namespace oplab
