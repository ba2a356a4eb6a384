#pragma once

#include <string>
#include <vector>

namespace oplab {

struct CheckRecord {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct CheckReport {
    std::vector<CheckRecord> checks;

    bool passed() const;
    // largest residual among records whose name starts with prefix
    double max_residual(const std::string& prefix = "") const;
    void append(const CheckReport& other);
    void append(const CheckRecord& record) { checks.push_back(record); }
};

// |lhs - rhs| <= tol
CheckRecord equality_check(std::string name, double lhs, double rhs, double tol);
// residual already computed as a norm of a difference
CheckRecord residual_check(std::string name, double residual, double tol);
// lhs <= rhs + tol
CheckRecord inequality_check(std::string name, double lhs, double rhs, double tol);

} // namespace oplab
