#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dgad {

enum class ErrorKind {
    InvalidDomain,
    NoValidSuffix,
    EmptySld,
    TooLong,
    MalformedIp,
    Io,
    Parse,
    SingleClass,
    EmptyData,
    SchemaMismatch,
    NoNegatives,
    TooFewExamples,
    SeedTooShort,
    PoolTooSmall,
    InvalidConfig,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidDomain: return "InvalidDomain";
        case ErrorKind::NoValidSuffix: return "NoValidSuffix";
        case ErrorKind::EmptySld: return "EmptySld";
        case ErrorKind::TooLong: return "TooLong";
        case ErrorKind::MalformedIp: return "MalformedIp";
        case ErrorKind::Io: return "Io";
        case ErrorKind::Parse: return "Parse";
        case ErrorKind::SingleClass: return "SingleClass";
        case ErrorKind::EmptyData: return "EmptyData";
        case ErrorKind::SchemaMismatch: return "SchemaMismatch";
        case ErrorKind::NoNegatives: return "NoNegatives";
        case ErrorKind::TooFewExamples: return "TooFewExamples";
        case ErrorKind::SeedTooShort: return "SeedTooShort";
        case ErrorKind::PoolTooSmall: return "PoolTooSmall";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

/// Every failure surfaced by the library carries a kind so callers (the CLI
/// in particular) can map it to a stable exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error{std::string{to_string(kind)} + ": " + what}, kind_{kind} {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace dgad
