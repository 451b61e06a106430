#ifndef TERMTOPICS_LOG_HPP
#define TERMTOPICS_LOG_HPP

#include <functional>
#include <string_view>

namespace termtopics {

enum class LogLevel { Debug, Info, Warning, Error };

using LogSink = std::function<void(LogLevel, std::string_view)>;

/// Replaces the process-wide sink. The default writes warnings and errors to stderr.
void set_log_sink(LogSink sink);

void log(LogLevel level, std::string_view message);

inline void log_info(std::string_view message) { log(LogLevel::Info, message); }
inline void log_warning(std::string_view message) { log(LogLevel::Warning, message); }

} // namespace termtopics

#endif // TERMTOPICS_LOG_HPP
