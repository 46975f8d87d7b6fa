#pragma once

#include <stdexcept>
#include <string>

namespace rigidnet {

/// Failure categories, mirroring the CLI exit-code contract:
/// invalid_input -> 2, numerical -> 3, precondition -> 4.
enum class ErrorKind { invalid_input, numerical, precondition };

enum class Errc {
    invalid_input,
    invalid_vertex,
    coincident_points,
    degenerate_configuration,
    disconnected,
    no_path,
    not_isar,
    not_laman,
    degree_too_low,
    not_angle_connected,
    missing_angle,
    missing_angle_measurement,
    not_localizable,
    assumption_violated,
    no_adjacent_anchors,
    non_finite,
    too_few_points,
};

class Error : public std::runtime_error {
  public:
    Error(Errc code, std::string message, ErrorKind kind)
        : std::runtime_error(std::move(message)), code_(code), kind_(kind) {}

    Error(Errc code, std::string message)
        : Error(code, std::move(message), default_kind(code)) {}

    Errc code() const noexcept { return code_; }
    ErrorKind kind() const noexcept { return kind_; }

    static ErrorKind default_kind(Errc code) {
        switch (code) {
            case Errc::invalid_input:
            case Errc::invalid_vertex:
                return ErrorKind::invalid_input;
            case Errc::non_finite:
                return ErrorKind::numerical;
            default:
                return ErrorKind::precondition;
        }
    }

  private:
    Errc code_;
    ErrorKind kind_;
};

inline int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_input: return 2;
        case ErrorKind::numerical: return 3;
        case ErrorKind::precondition: return 4;
    }
    return 1;
}

} // namespace rigidnet
