#include "posterforge/core/error.hpp"

namespace posterforge {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedDocument: return "MalformedDocument";
        case ErrorCode::SchemaViolation: return "SchemaViolation";
        case ErrorCode::InvalidColor: return "InvalidColor";
        case ErrorCode::InvalidRequirement: return "InvalidRequirement";
        case ErrorCode::BackendTimeout: return "BackendTimeout";
        case ErrorCode::BackendRejected: return "BackendRejected";
        case ErrorCode::BackendUnreachable: return "BackendUnreachable";
        case ErrorCode::InvalidBackendOutput: return "InvalidBackendOutput";
        case ErrorCode::ResolutionMismatch: return "ResolutionMismatch";
        case ErrorCode::ParseFailure: return "ParseFailure";
        case ErrorCode::TextCoverageViolation: return "TextCoverageViolation";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::UnclosedTag: return "UnclosedTag";
        case ErrorCode::UnknownTag: return "UnknownTag";
        case ErrorCode::UnknownProperty: return "UnknownProperty";
        case ErrorCode::MissingRootDimensions: return "MissingRootDimensions";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::MixedContent: return "MixedContent";
        case ErrorCode::ScaleOutOfRange: return "ScaleOutOfRange";
        case ErrorCode::MissingImageAsset: return "MissingImageAsset";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::InvalidStyleValue: return "InvalidStyleValue";
        case ErrorCode::InvalidEdit: return "InvalidEdit";
        case ErrorCode::ImageDecode: return "ImageDecode";
        case ErrorCode::EmptyGroundTruth: return "EmptyGroundTruth";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::DegenerateSet: return "DegenerateSet";
        case ErrorCode::NumericalFailure: return "NumericalFailure";
        case ErrorCode::MalformedFeatureFile: return "MalformedFeatureFile";
        case ErrorCode::MissingEmbedding: return "MissingEmbedding";
        case ErrorCode::MalformedManifest: return "MalformedManifest";
        case ErrorCode::VersionUnsupported: return "VersionUnsupported";
        case ErrorCode::StateTerminal: return "StateTerminal";
        case ErrorCode::WrongState: return "WrongState";
        case ErrorCode::StaleVersion: return "StaleVersion";
        case ErrorCode::JobNotFound: return "JobNotFound";
        case ErrorCode::Storage: return "Storage";
        case ErrorCode::ArithmeticOverflow: return "ArithmeticOverflow";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace posterforge
