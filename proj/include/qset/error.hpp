#pragma once

#include <stdexcept>
#include <string>

namespace qset {

enum class ErrorKind {
    InvalidBehavior,      // fails validate, or steered correlator out of range
    NullImage,
    DegenerateTheta,
    MarginalUnit,
    LocalInput,
    NonzeroMarginals,
    NotSelfTesting,
    InconsistentGauge,
    NoThetaBranch,
    DegenerateDenominator,
    Precondition,
    SamplingFailed,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace qset
