#include "qdeconv/format.h"

#include <charconv>
#include <cmath>
#include <system_error>

#include "qdeconv/errors.h"

namespace qdeconv {

std::string format_double(double value) {
    if (value == 0.0) {
        // Collapse -0 so golden files do not depend on the sign of a zero.
        return "0";
    }
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) {
        throw InvalidArgument("format_double: conversion failed");
    }
    return std::string(buf, end);
}

std::optional<double> parse_double(std::string_view token) {
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
    }
    if (token.empty()) {
        return std::nullopt;
    }
    double value = 0.0;
    auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || end != token.data() + token.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

const char *error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::kInvalidArgument:
            return "InvalidArgument";
        case ErrorCode::kDimensionMismatch:
            return "DimensionMismatch";
        case ErrorCode::kParse:
            return "ParseError";
        case ErrorCode::kNonHermitianInput:
            return "NonHermitianInput";
        case ErrorCode::kNotTracePreserving:
            return "NotTracePreserving";
        case ErrorCode::kInvalidProbability:
            return "InvalidProbability";
        case ErrorCode::kInvalidCorrelation:
            return "InvalidCorrelation";
        case ErrorCode::kNonInvertibleChannel:
            return "NonInvertibleChannel";
        case ErrorCode::kSingularPtm:
            return "SingularPTM";
        case ErrorCode::kMissingMeasurement:
            return "MissingMeasurement";
        case ErrorCode::kNonUnitalChannel:
            return "NonUnitalChannel";
        case ErrorCode::kIdentityProbe:
            return "IdentityProbe";
        case ErrorCode::kProbabilityOutOfRange:
            return "ProbabilityOutOfRange";
        case ErrorCode::kResourceCap:
            return "ResourceCapExceeded";
        case ErrorCode::kInvalidConfig:
            return "InvalidConfig";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {
}

ParseError::ParseError(const std::string &message, std::size_t line, std::size_t column)
    : Error(ErrorCode::kParse,
            "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {
}

}  // namespace qdeconv
