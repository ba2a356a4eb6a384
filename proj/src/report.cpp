#include "oplab/report.hpp"

#include <algorithm>
#include <cmath>

namespace oplab {

bool CheckReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.passed; });
}

double CheckReport::max_residual(const std::string& prefix) const {
    double m = 0.0;
    for (const auto& c : checks)
        if (c.name.rfind(prefix, 0) == 0) m = std::max(m, c.residual);
    return m;
}

void CheckReport::append(const CheckReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

CheckRecord equality_check(std::string name, double lhs, double rhs, double tol) {
    double r = std::abs(lhs - rhs);
    return CheckRecord{std::move(name), lhs, rhs, r, tol, std::isfinite(r) && r <= tol};
}

CheckRecord residual_check(std::string name, double residual, double tol) {
    return CheckRecord{std::move(name), residual, 0.0, residual, tol, std::isfinite(residual) && residual <= tol};
}

CheckRecord inequality_check(std::string name, double lhs, double rhs, double tol) {
    double r = std::max(0.0, lhs - rhs);
    bool ok = !std::isnan(lhs) && !std::isnan(rhs) && lhs <= rhs + tol;
    return CheckRecord{std::move(name), lhs, rhs, r, tol, ok};
}

} // namespace oplab
