#include "qset/error.hpp"

namespace qset {

const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidBehavior: return "InvalidBehavior";
        case ErrorKind::NullImage: return "NullImage";
        case ErrorKind::DegenerateTheta: return "DegenerateTheta";
        case ErrorKind::MarginalUnit: return "MarginalUnit";
        case ErrorKind::LocalInput: return "LocalInput";
        case ErrorKind::NonzeroMarginals: return "NonzeroMarginals";
        case ErrorKind::NotSelfTesting: return "NotSelfTesting";
        case ErrorKind::InconsistentGauge: return "InconsistentGauge";
        case ErrorKind::NoThetaBranch: return "NoThetaBranch";
        case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
        case ErrorKind::Precondition: return "Precondition";
        case ErrorKind::SamplingFailed: return "SamplingFailed";
    }
    return "Unknown";
}

}  // namespace qset
