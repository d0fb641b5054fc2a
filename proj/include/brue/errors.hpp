#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace brue {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or argument values.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A computation would exceed a configured size cap.
class ResourceError : public Error {
public:
    ResourceError(const std::string& what, std::uint64_t count, std::uint64_t cap)
        : Error(what), count_(count), cap_(cap) {}

    std::uint64_t count() const noexcept { return count_; }
    std::uint64_t cap() const noexcept { return cap_; }

private:
    std::uint64_t count_;
    std::uint64_t cap_;
};

/// The MDP lacks an optional capability (e.g. outcome enumeration).
class CapabilityError : public Error {
public:
    using Error::Error;
};

class ContractViolation : public Error {
public:
    using Error::Error;
};

class MissingOracleEntry : public Error {
public:
    using Error::Error;
};

/// Bound constants are undefined because d = 0.
class DegenerateInstance : public Error {
public:
    using Error::Error;
};

/// The planner has no visited root action to recommend.
class InsufficientBudget : public Error {
public:
    using Error::Error;
};

} // namespace brue
