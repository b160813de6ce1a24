#include "causalir/errors.hpp"

namespace causalir {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Io: return "i/o error";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Format: return "format error";
    case ErrorCode::Dimension: return "dimension mismatch";
    case ErrorCode::NotFound: return "not found";
    case ErrorCode::Network: return "network error";
    case ErrorCode::Internal: return "internal error";
    }
    return "unknown error";
}

} // namespace causalir
