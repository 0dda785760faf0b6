#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace posterforge {

/// Closed set of failure kinds raised across the library. The service layer
/// maps each one onto an HTTP status, the CLI onto an exit code.
enum class ErrorCode {
    // blueprint
    MalformedDocument,
    SchemaViolation,
    InvalidColor,
    InvalidRequirement,
    // backends
    BackendTimeout,
    BackendRejected,
    BackendUnreachable,
    InvalidBackendOutput,
    ResolutionMismatch,
    ParseFailure,
    TextCoverageViolation,
    // typography
    SyntaxError,
    UnclosedTag,
    UnknownTag,
    UnknownProperty,
    MissingRootDimensions,
    DuplicateId,
    MixedContent,
    ScaleOutOfRange,
    MissingImageAsset,
    UnknownNode,
    InvalidStyleValue,
    InvalidEdit,
    ImageDecode,
    // metrics
    EmptyGroundTruth,
    DimensionMismatch,
    DegenerateSet,
    NumericalFailure,
    MalformedFeatureFile,
    // datapipe
    MissingEmbedding,
    MalformedManifest,
    VersionUnsupported,
    // pipeline
    StateTerminal,
    WrongState,
    StaleVersion,
    JobNotFound,
    Storage,
    // shared
    ArithmeticOverflow,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::vector<std::string> details = {})
        : std::runtime_error(message), code_(code), details_(std::move(details)) {}

    ErrorCode code() const noexcept { return code_; }

    /// Structured payload: a field path, the offending value, missing strings, ...
    const std::vector<std::string>& details() const noexcept { return details_; }

private:
    ErrorCode code_;
    std::vector<std::string> details_;
};

/// Byte-offset tagged diagnostic produced by lenient parsers.
struct Warning {
    std::string code;
    std::size_t position = 0;
    std::string message;

    bool operator==(const Warning&) const = default;
};

enum class ParseMode { Strict, Lenient };

}  // namespace posterforge
