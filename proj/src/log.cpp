#include "conekit/log.hpp"

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace conekit {

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("CONEKIT_LOG");
        if (env == nullptr) return LogLevel::Error;
        if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
        if (std::strcmp(env, "info") == 0) return LogLevel::Info;
        return LogLevel::Error;
    }();
    return level;
}

bool log_enabled(LogLevel level) {
    return static_cast<int>(level) <= static_cast<int>(log_level());
}

void log_msg(LogLevel level, const char* fmt, ...) {
    if (!log_enabled(level)) return;
    const char* tag = level == LogLevel::Debug  ? "debug"
                      : level == LogLevel::Info ? "info"
                                                : "error";
    std::fprintf(stderr, "[%s] ", tag);
    va_list args;
    va_start(args, fmt);
    std::vfprintf(stderr, fmt, args);
    va_end(args);
    std::fputc('\n', stderr);
}

} // namespace conekit
