#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spectral {

/// Failure categories raised by the library. The CLI renders them by name.
enum class Errc {
    PoleArgument,
    Overflow,
    DomainError,
    IndexOutOfRange,
    UnsupportedSpec,
    NonConvergent,
    DivergentAtS1,
    UnsupportedContinuation,
    MomentAtPole,
    NotAPole,
    InsufficientData,
    QuadratureFailure,
    UnsupportedAlpha,
    ParseError,
    InvariantViolation,
};

constexpr std::string_view errc_name(Errc e) noexcept {
    switch (e) {
        case Errc::PoleArgument: return "PoleArgument";
        case Errc::Overflow: return "Overflow";
        case Errc::DomainError: return "DomainError";
        case Errc::IndexOutOfRange: return "IndexOutOfRange";
        case Errc::UnsupportedSpec: return "UnsupportedSpec";
        case Errc::NonConvergent: return "NonConvergent";
        case Errc::DivergentAtS1: return "DivergentAtS1";
        case Errc::UnsupportedContinuation: return "UnsupportedContinuation";
        case Errc::MomentAtPole: return "MomentAtPole";
        case Errc::NotAPole: return "NotAPole";
        case Errc::InsufficientData: return "InsufficientData";
        case Errc::QuadratureFailure: return "QuadratureFailure";
        case Errc::UnsupportedAlpha: return "UnsupportedAlpha";
        case Errc::ParseError: return "ParseError";
        case Errc::InvariantViolation: return "InvariantViolation";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace spectral
