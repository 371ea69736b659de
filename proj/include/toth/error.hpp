#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace toth {

enum class ErrorCode {
    CycleDetected,
    DanglingEdge,
    EmptyTrace,
    AnswerNotFound,
    InvalidCalibration,
    InvalidProbability,
    ProviderUnavailable,
    MalformedResponse,
    MissingTrust,
    EmptyGraph,
    NoValidGraph,
    EmptyQuestion,
    MalformedRecord,
    UnknownKind,
    EmptyVote,
    ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure surfaced by the library carries one of the codes above so
/// callers can branch on the category without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace toth
