#include "tropcert/log.hpp"

#include <cstdlib>
#include <mutex>

#include <spdlog/sinks/stdout_color_sinks.h>

namespace tropcert {

std::shared_ptr<spdlog::logger> logger() {
  static std::once_flag once;
  static std::shared_ptr<spdlog::logger> instance;
  std::call_once(once, [] {
    instance = spdlog::get("tropcert");
    if (!instance) instance = spdlog::stderr_color_mt("tropcert");
    instance->set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
    const char* level = std::getenv("TROPCERT_LOG_LEVEL");
    instance->set_level(level ? spdlog::level::from_str(level) : spdlog::level::info);
  });
  return instance;
}

}  // namespace tropcert
