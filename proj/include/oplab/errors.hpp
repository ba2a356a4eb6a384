#pragma once

#include <stdexcept>
#include <string>

namespace oplab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class NotHermitianError : public Error {
public:
    using Error::Error;
};

// f returned a non-finite value on some eigenvalue
class DomainError : public Error {
public:
    DomainError(const std::string& what, double eigenvalue) : Error(what), eigenvalue_(eigenvalue) {}
    double eigenvalue() const { return eigenvalue_; }

private:
    double eigenvalue_;
};

class NotPositiveError : public Error {
public:
    NotPositiveError(const std::string& what, double min_eigenvalue)
        : Error(what), min_eigenvalue_(min_eigenvalue) {}
    double min_eigenvalue() const { return min_eigenvalue_; }

private:
    double min_eigenvalue_;
};

class AmbiguousIntervalError : public Error {
public:
    using Error::Error;
};

class NotFaithfulError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DominationError : public Error {
public:
    DominationError(const std::string& what, double violation) : Error(what), violation_(violation) {}
    // most negative eigenvalue of rho_phi - rho_psi
    double violation() const { return violation_; }

private:
    double violation_;
};

class InvarianceError : public Error {
public:
    InvarianceError(const std::string& what, double commutator_norm)
        : Error(what), commutator_norm_(commutator_norm) {}
    double commutator_norm() const { return commutator_norm_; }

private:
    double commutator_norm_;
};

class DegenerateSupportError : public Error {
public:
    DegenerateSupportError(const std::string& what, int kernel_dim) : Error(what), kernel_dim_(kernel_dim) {}
    int kernel_dim() const { return kernel_dim_; }

private:
    int kernel_dim_;
};

class RegionError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    SchemaError(const std::string& path, const std::string& message)
        : Error(path + ": " + message), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

} // namespace oplab
