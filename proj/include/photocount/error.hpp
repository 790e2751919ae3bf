#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace photocount {

enum class ErrorCode {
    EmptyInput,
    NegativeEntry,
    NotNormalized,
    NonFiniteInput,
    DimensionMismatch,
    EtaZero,
    IndexOutOfRange,
    InvalidArgument,
    ParseError,
};

/// Stable machine-readable name, e.g. "NegativeEntry".
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, std::string const& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

} // namespace photocount
