#pragma once

#include <string>

// stderr logging gated by the QNEWTON_LOG environment variable:
// "off" (default), "info", or "debug".

namespace qn::cli {

enum class LogLevel { Off = 0, Info = 1, Debug = 2 };

LogLevel log_level();

void log_info(const std::string& message);
void log_debug(const std::string& message);

}  // namespace qn::cli
