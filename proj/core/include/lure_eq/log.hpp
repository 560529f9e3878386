#pragma once

#include <string_view>

namespace lure::log {

enum class Level { Quiet = 0, Info = 1, Trace = 2 };

/// Current verbosity. Initialised from LURE_EQ_LOG on first use.
Level level();
void set_level(Level lvl);

/// Parses "quiet", "info" or "trace"; anything else maps to Info.
Level parse_level(std::string_view text);

void warn(std::string_view msg);
void info(std::string_view msg);
void trace(std::string_view msg);

}  // namespace lure::log
