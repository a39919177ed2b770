#include "qnewton/cli/log.hpp"

#include <cstdlib>
#include <iostream>

namespace qn::cli {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("QNEWTON_LOG");
    if (!env) return LogLevel::Off;
    const std::string value(env);
    if (value == "debug") return LogLevel::Debug;
    if (value == "info") return LogLevel::Info;
    return LogLevel::Off;
  }();
  return level;
}

void log_info(const std::string& message) {
  if (log_level() >= LogLevel::Info) std::cerr << "[info] " << message << "\n";
}

void log_debug(const std::string& message) {
  if (log_level() >= LogLevel::Debug) std::cerr << "[debug] " << message << "\n";
}

}  // namespace qn::cli
