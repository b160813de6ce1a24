#pragma once

#include <string_view>

namespace causalir {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Diagnostics go to standard error; data never does.
void set_log_level(LogLevel level);
LogLevel log_level();
void log(LogLevel level, std::string_view message);

inline void log_warn(std::string_view message) { log(LogLevel::Warn, message); }
inline void log_info(std::string_view message) { log(LogLevel::Info, message); }

} // namespace causalir
