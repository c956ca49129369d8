#pragma once

#include <stdexcept>
#include <string>

namespace zeno {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (a >= b, negative width, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative method exhausted its budget before meeting the requested accuracy.
class NonConvergence : public Error {
public:
    using Error::Error;
};

/// The function values at the ends of a root bracket have the same sign.
class NoSignChange : public Error {
public:
    using Error::Error;
};

/// Evaluation requested exactly at a logarithmic branch point of the self-energy.
class BranchPoint : public DomainError {
public:
    using DomainError::DomainError;
};

/// Evaluation requested exactly at a two-particle threshold or cutoff edge.
class ThresholdPoint : public DomainError {
public:
    using DomainError::DomainError;
};

/// Total norm of a lattice state drifted beyond tolerance.
class NormLoss : public Error {
public:
    NormLoss(const std::string& what, double drift) : Error(what), drift_(drift) {}
    double drift() const noexcept { return drift_; }

private:
    double drift_;
};

/// A no-click collapse was requested on a state that clicks with certainty.
class DegenerateCollapse : public Error {
public:
    using Error::Error;
};

/// The band click probability exceeded the total decay probability.
class BandTooEffective : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration. Carries the offending field and source line when known.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::string field = {}, int line = 0)
        : Error(what), field_(std::move(field)), line_(line) {}

    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

private:
    std::string field_;
    int line_;
};

/// A requested output grid has no points.
class EmptyGrid : public ConfigError {
public:
    using ConfigError::ConfigError;
};

} // namespace zeno
