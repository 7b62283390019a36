#pragma once

#include <stdexcept>
#include <string>

namespace maser {

// Every failure the engine can surface, one code per contract-level error.
enum class ErrorCode {
    MissingField,
    FieldParseError,
    ExtractionParseError,
    SchemaError,
    DuplicateId,
    PersonaParseError,
    InvalidLevel,
    VerdictParseError,
    JudgeParseError,
    ComplaintParseError,
    IncompleteTranscript,
    TranscriptInvariantViolation,
    InvariantViolation,
    ScriptExhausted,
    BackendUnavailable,
    AuthMissing,
    CacheMiss,
    TemplateError,
    ConfigError,
    IoError,
    PreconditionViolation,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace maser
