#pragma once

#include <stdexcept>
#include <string>

namespace alphaeta {

/// Seeding an LFSR with the all-zero register (a fixed point of the feedback).
class DegenerateSeedError : public std::invalid_argument {
public:
    explicit DegenerateSeedError(const std::string& what)
        : std::invalid_argument(what) {}
};

/// Tap set outside {1..L} or missing the terminal position L.
class InvalidTapsError : public std::invalid_argument {
public:
    explicit InvalidTapsError(const std::string& what)
        : std::invalid_argument(what) {}
};

/// Requested exhaustive enumeration exceeds the configured budget.
class InfeasibleSizeError : public std::runtime_error {
public:
    explicit InfeasibleSizeError(const std::string& what)
        : std::runtime_error(what) {}
};

/// A solve needs more observations than were supplied.
class NeedsMoreDataError : public std::runtime_error {
public:
    explicit NeedsMoreDataError(const std::string& what)
        : std::runtime_error(what) {}
};

/// Config file parse or validation failure; message names the violated rule.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what)
        : std::runtime_error(what) {}
};

} // namespace alphaeta
