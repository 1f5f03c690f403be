#include "curvedmag/errors.hpp"

namespace curvedmag {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ChartDomain: return "ChartDomain";
        case ErrorKind::Unsupported: return "Unsupported";
        case ErrorKind::EmbeddingViolation: return "EmbeddingViolation";
        case ErrorKind::AxisSingularity: return "AxisSingularity";
        case ErrorKind::DegenerateShift: return "DegenerateShift";
        case ErrorKind::BranchSingularity: return "BranchSingularity";
        case ErrorKind::InvalidLambda: return "InvalidLambda";
        case ErrorKind::InvalidRadius: return "InvalidRadius";
        case ErrorKind::InvalidParams: return "InvalidParams";
        case ErrorKind::RegimeMismatch: return "RegimeMismatch";
        case ErrorKind::BranchError: return "BranchError";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::InsufficientData: return "InsufficientData";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

}  // namespace curvedmag
