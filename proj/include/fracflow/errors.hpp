#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fracflow {

enum class ErrorKind {
    domain,
    non_convergent,
    quadrature_failure,
    shape_mismatch,
    empty_ball_family,
    parameter_mismatch,
    empty_trajectory,
    non_contraction,
    overflow,
    insufficient_overlap,
    window_too_short,
    schema,
    io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so the CLI can map it
/// to a message and exit code without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);
    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition) raise(kind, message);
}

}  // namespace fracflow
