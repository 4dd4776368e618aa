#pragma once

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

namespace rdag::detail {

// Diagnostics go to stderr so they never mix with CSV or JSON on stdout.
inline spdlog::logger& log() {
  static auto logger = [] {
    auto existing = spdlog::get("rdag");
    return existing ? existing : spdlog::stderr_logger_mt("rdag");
  }();
  return *logger;
}

}  // namespace rdag::detail
