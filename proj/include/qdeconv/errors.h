#ifndef QDECONV_ERRORS_H
#define QDECONV_ERRORS_H

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qdeconv {

/// Failure categories raised by the library. The CLI maps them onto exit
/// codes (see `exit_code_for`).
enum class ErrorCode {
    kInvalidArgument,
    kDimensionMismatch,
    kParse,
    kNonHermitianInput,
    kNotTracePreserving,
    kInvalidProbability,
    kInvalidCorrelation,
    kNonInvertibleChannel,
    kSingularPtm,
    kMissingMeasurement,
    kNonUnitalChannel,
    kIdentityProbe,
    kProbabilityOutOfRange,
    kResourceCap,
    kInvalidConfig,
};

const char *error_code_name(ErrorCode code);

class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message);
    ErrorCode code() const noexcept {
        return code_;
    }

   private:
    ErrorCode code_;
};

template <ErrorCode C>
class CodedError : public Error {
   public:
    explicit CodedError(const std::string &message) : Error(C, message) {
    }
};

using InvalidArgument = CodedError<ErrorCode::kInvalidArgument>;
using DimensionMismatch = CodedError<ErrorCode::kDimensionMismatch>;
using NonHermitianInput = CodedError<ErrorCode::kNonHermitianInput>;
using NotTracePreserving = CodedError<ErrorCode::kNotTracePreserving>;
using InvalidProbability = CodedError<ErrorCode::kInvalidProbability>;
using InvalidCorrelation = CodedError<ErrorCode::kInvalidCorrelation>;
using NonInvertibleChannel = CodedError<ErrorCode::kNonInvertibleChannel>;
using SingularPtm = CodedError<ErrorCode::kSingularPtm>;
using MissingMeasurement = CodedError<ErrorCode::kMissingMeasurement>;
using NonUnitalChannel = CodedError<ErrorCode::kNonUnitalChannel>;
using IdentityProbe = CodedError<ErrorCode::kIdentityProbe>;
using ProbabilityOutOfRange = CodedError<ErrorCode::kProbabilityOutOfRange>;
using ResourceCapExceeded = CodedError<ErrorCode::kResourceCap>;
/// Well-formed input that violates a config schema.
using ConfigError = CodedError<ErrorCode::kInvalidConfig>;

/// Parse failure with a 1-based source position. Column 0 means the whole
/// line is at fault.
class ParseError : public Error {
   public:
    ParseError(const std::string &message, std::size_t line, std::size_t column);
    std::size_t line() const noexcept {
        return line_;
    }
    std::size_t column() const noexcept {
        return column_;
    }

   private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace qdeconv

#endif
