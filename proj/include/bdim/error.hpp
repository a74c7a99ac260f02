#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bdim {

enum class ErrorKind {
    invalid_input,
    degenerate_point,
    point_off_boundary,
    no_convergence,
    eclipse_violation,
    degenerate_hull,
    tangent_ray,
    grazing_collision,
    basis_mismatch,
    inadmissible_sequence,
    config_parse,
    unsupported,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto an exit status without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& what);

}  // namespace bdim
