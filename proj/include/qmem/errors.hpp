#pragma once

#include <stdexcept>
#include <string>

namespace qmem {

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ZeroDetuning : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotUnitary : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct FactorOutOfRange : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Integration step too large for the fastest rate in the model.
struct UnstableStep : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// lambda * alpha >= 1 (or a dispersion-corrected denominator <= 0):
// the dwell time formula has no finite value there.
struct DivergentGain : std::domain_error {
    using std::domain_error::domain_error;
};

struct NegativeDenominator : std::domain_error {
    using std::domain_error::domain_error;
};

struct FitDegenerate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qmem
