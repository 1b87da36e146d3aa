#ifndef VPS_LOG_HPP
#define VPS_LOG_HPP

#include <cstdlib>
#include <iostream>
#include <string>

namespace vps::log {

enum class Level { quiet = 0, warn = 1, info = 2, debug = 3 };

// Level comes from the VPS_LOG environment variable
// (quiet|warn|info|debug); default warn.
inline Level level() {
  static const Level lvl = [] {
    const char* env = std::getenv("VPS_LOG");
    if (!env) return Level::warn;
    const std::string s(env);
    if (s == "quiet") return Level::quiet;
    if (s == "info") return Level::info;
    if (s == "debug") return Level::debug;
    return Level::warn;
  }();
  return lvl;
}

inline void warn(const std::string& msg) {
  if (level() >= Level::warn) std::cerr << "[vps] warning: " << msg << "\n";
}

inline void info(const std::string& msg) {
  if (level() >= Level::info) std::cerr << "[vps] " << msg << "\n";
}

inline void debug(const std::string& msg) {
  if (level() >= Level::debug) std::cerr << "[vps] debug: " << msg << "\n";
}

}  // namespace vps::log

#endif  // VPS_LOG_HPP
