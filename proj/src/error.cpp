#include "toth/error.hpp"

namespace toth {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::DanglingEdge: return "DanglingEdge";
    case ErrorCode::EmptyTrace: return "EmptyTrace";
    case ErrorCode::AnswerNotFound: return "AnswerNotFound";
    case ErrorCode::InvalidCalibration: return "InvalidCalibration";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::ProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::MissingTrust: return "MissingTrust";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::NoValidGraph: return "NoValidGraph";
    case ErrorCode::EmptyQuestion: return "EmptyQuestion";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::EmptyVote: return "EmptyVote";
    case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

} // namespace toth
