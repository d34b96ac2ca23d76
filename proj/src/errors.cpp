#include "fracflow/errors.hpp"

namespace fracflow {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::domain: return "DomainError";
        case ErrorKind::non_convergent: return "NonConvergent";
        case ErrorKind::quadrature_failure: return "QuadratureFailure";
        case ErrorKind::shape_mismatch: return "ShapeMismatch";
        case ErrorKind::empty_ball_family: return "EmptyBallFamily";
        case ErrorKind::parameter_mismatch: return "ParameterMismatch";
        case ErrorKind::empty_trajectory: return "EmptyTrajectory";
        case ErrorKind::non_contraction: return "NonContraction";
        case ErrorKind::overflow: return "Overflow";
        case ErrorKind::insufficient_overlap: return "InsufficientOverlap";
        case ErrorKind::window_too_short: return "WindowTooShort";
        case ErrorKind::schema: return "SchemaError";
        case ErrorKind::io: return "IOError";
    }
    return "Error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void raise(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace fracflow
