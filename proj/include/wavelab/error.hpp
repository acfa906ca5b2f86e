#pragma once

#include <stdexcept>
#include <string>

namespace wavelab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid lattice, grid or experiment parameters.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Query or region outside the simulated trapezoid.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A point, partition or region that does not land on the lattice.
class AlignmentError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Statistic undefined for the input (e.g. zero conditional variance).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Numeric failure during a replicate; carries the seed for replay.
class ReplicateFailure : public Error {
public:
    ReplicateFailure(const std::string& what, unsigned long long seed)
        : Error(what + " (seed " + std::to_string(seed) + ")"), seed_(seed) {}
    unsigned long long seed() const noexcept { return seed_; }

private:
    unsigned long long seed_;
};

} // namespace wavelab
