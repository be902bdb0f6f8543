#ifndef PCMTES_ERRORS_HPP
#define PCMTES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pcmtes {

// Input outside the mathematical domain of a correlation or resistance formula.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Bad or unknown configuration (key path is part of the message).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Newton iteration budget exhausted; carries the last residual norm.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual_norm, int iterations)
        : std::runtime_error(what), residual_norm_(residual_norm), iterations_(iterations) {}

    double residual_norm() const noexcept { return residual_norm_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_norm_;
    int iterations_;
};

// Requested operation is outside what the selected model can represent.
class UnsupportedOperation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace pcmtes

#endif
