#include "maser/error.hpp"

namespace maser {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MissingField: return "MissingField";
        case ErrorCode::FieldParseError: return "FieldParseError";
        case ErrorCode::ExtractionParseError: return "ExtractionParseError";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::PersonaParseError: return "PersonaParseError";
        case ErrorCode::InvalidLevel: return "InvalidLevel";
        case ErrorCode::VerdictParseError: return "VerdictParseError";
        case ErrorCode::JudgeParseError: return "JudgeParseError";
        case ErrorCode::ComplaintParseError: return "ComplaintParseError";
        case ErrorCode::IncompleteTranscript: return "IncompleteTranscript";
        case ErrorCode::TranscriptInvariantViolation: return "TranscriptInvariantViolation";
        case ErrorCode::InvariantViolation: return "InvariantViolation";
        case ErrorCode::ScriptExhausted: return "ScriptExhausted";
        case ErrorCode::BackendUnavailable: return "BackendUnavailable";
        case ErrorCode::AuthMissing: return "AuthMissing";
        case ErrorCode::CacheMiss: return "CacheMiss";
        case ErrorCode::TemplateError: return "TemplateError";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    }
    return "UnknownError";
}

}  // namespace maser
