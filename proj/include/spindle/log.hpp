#ifndef SPINDLE_LOG_HPP
#define SPINDLE_LOG_HPP

#include <cstdlib>
#include <iostream>
#include <string>

namespace spindle {

// Verbosity from the SPINDLE_LOG environment variable: "debug", "info", or
// anything else (off). Diagnostics go to stderr.
enum class LogLevel { Off = 0, Info = 1, Debug = 2 };

inline LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("SPINDLE_LOG");
        if (!env) return LogLevel::Off;
        const std::string v(env);
        if (v == "debug") return LogLevel::Debug;
        if (v == "info") return LogLevel::Info;
        return LogLevel::Off;
    }();
    return level;
}

inline void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::Info) std::cerr << "[spindle] " << msg << "\n";
}

inline void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::Debug) std::cerr << "[spindle:debug] " << msg << "\n";
}

}  // namespace spindle

#endif  // SPINDLE_LOG_HPP
