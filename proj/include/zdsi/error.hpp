#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zdsi {

enum class Errc {
    NegativeEntry,
    SumNotOne,
    ConditionOnZero,
    TooLarge,
    InfeasibleProtocol,
    EmptyInput,
    BelowMinimumDistortion,
    DomainError,
    NoConvergence,
    SyncLoss,
    ParseError,
    ValidationError,
};

constexpr std::string_view to_string(Errc code) noexcept
{
    switch (code) {
    case Errc::NegativeEntry: return "NegativeEntry";
    case Errc::SumNotOne: return "SumNotOne";
    case Errc::ConditionOnZero: return "ConditionOnZero";
    case Errc::TooLarge: return "TooLarge";
    case Errc::InfeasibleProtocol: return "InfeasibleProtocol";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::BelowMinimumDistortion: return "BelowMinimumDistortion";
    case Errc::DomainError: return "DomainError";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::SyncLoss: return "SyncLoss";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what)
    {
    }

    Errc code() const noexcept { return code_; }
    /// Text without the code prefix.
    const std::string& message() const noexcept { return message_; }

private:
    Errc code_;
    std::string message_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace zdsi
