#pragma once

#include <stdexcept>
#include <string>

namespace causalir {

enum class ErrorCode {
    InvalidArgument,
    Io,
    Parse,
    Format,     // snapshot magic/version mismatch or truncated binary data
    Dimension,
    NotFound,
    Network,
    Internal,
};

const char* to_string(ErrorCode code);

/// Exception type thrown by every causalir module.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace causalir
