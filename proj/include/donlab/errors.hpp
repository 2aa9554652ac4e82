#pragma once

#include <stdexcept>
#include <string>

namespace donlab {

// Invalid configuration (bad spec, infeasible plan, missing settings).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Arguments that violate an operation's preconditions (shapes, ranges).
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed files: bad headers, wrong column counts, unparsable values.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdown, e.g. a failed Cholesky factorization.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// A time-stepping solver blew up.
class DivergenceError : public NumericalError {
public:
    DivergenceError(const std::string& what, long step) : NumericalError(what), step_(step) {}
    long step() const noexcept { return step_; }

private:
    long step_;
};

}  // namespace donlab
