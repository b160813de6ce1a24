#include "causalir/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace causalir {

namespace {
std::atomic<int> g_level{static_cast<int>(LogLevel::Warn)};
std::mutex g_mutex;

const char* prefix(LogLevel level) {
    switch (level) {
    case LogLevel::Error: return "error: ";
    case LogLevel::Warn: return "warning: ";
    case LogLevel::Info: return "info: ";
    case LogLevel::Debug: return "debug: ";
    }
    return "";
}
} // namespace

void set_log_level(LogLevel level) { g_level.store(static_cast<int>(level)); }

LogLevel log_level() { return static_cast<LogLevel>(g_level.load()); }

void log(LogLevel level, std::string_view message) {
    if (static_cast<int>(level) > g_level.load()) {
        return;
    }
    std::lock_guard lock(g_mutex);
    std::cerr << prefix(level) << message << '\n';
}

} // namespace causalir
