#pragma once

#include <memory>

#include <spdlog/spdlog.h>

namespace tropcert {

// Shared stderr logger. The level comes from TROPCERT_LOG_LEVEL
// (trace, debug, info, warn, error, off); default info.
std::shared_ptr<spdlog::logger> logger();

}  // namespace tropcert
