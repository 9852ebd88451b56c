#pragma once

namespace conekit {

// Log levels selected via the CONEKIT_LOG environment variable
// ("error", "info", "debug"); unset or unrecognized means "error".
enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

LogLevel log_level();
bool log_enabled(LogLevel level);

// printf-style message to stderr, prefixed with the level tag.
void log_msg(LogLevel level, const char* fmt, ...)
#if defined(__GNUC__)
    __attribute__((format(printf, 2, 3)))
#endif
    ;

} // namespace conekit
