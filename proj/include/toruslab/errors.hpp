#pragma once

#include <stdexcept>
#include <string>

#include "toruslab/multi_index.hpp"

namespace toruslab {

// Errors that map to CLI exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A homological division |k.omega| fell below the configured floor.
struct SmallDivisorError : NumericalError {
    SmallDivisorError(MultiIndex k_, double divisor_, const std::string& what_)
        : NumericalError(what_), k(std::move(k_)), divisor(divisor_) {}
    MultiIndex k;
    double divisor;
};

// A truncation, term-count or iteration budget was exhausted.
struct BudgetExceededError : NumericalError {
    using NumericalError::NumericalError;
};

// Integrator failure: implicit solve did not converge, or NaN appeared.
struct IntegrationError : NumericalError {
    using NumericalError::NumericalError;
};

// Invalid configuration or input files; maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace toruslab
