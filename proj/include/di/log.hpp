#pragma once

#include <sstream>
#include <string>

namespace di::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Global level, read once from the DI_LOG environment variable
// (error|warn|info|debug or 0..3, default warn).
Level level();
bool enabled(Level lvl);
void write(Level lvl, const std::string& msg);

template <typename... Args>
void emit(Level lvl, Args&&... args) {
  if (!enabled(lvl)) return;
  std::ostringstream os;
  (os << ... << args);
  write(lvl, os.str());
}

template <typename... Args>
void error(Args&&... args) {
  emit(Level::Error, std::forward<Args>(args)...);
}
template <typename... Args>
void warn(Args&&... args) {
  emit(Level::Warn, std::forward<Args>(args)...);
}
template <typename... Args>
void info(Args&&... args) {
  emit(Level::Info, std::forward<Args>(args)...);
}
template <typename... Args>
void debug(Args&&... args) {
  emit(Level::Debug, std::forward<Args>(args)...);
}

}  // namespace di::log
