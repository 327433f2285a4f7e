#include "di/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace di::log {

static Level parse_env() {
  const char* v = std::getenv("DI_LOG");
  if (!v || !*v) return Level::Warn;
  if (!std::strcmp(v, "error") || !std::strcmp(v, "0")) return Level::Error;
  if (!std::strcmp(v, "warn") || !std::strcmp(v, "1")) return Level::Warn;
  if (!std::strcmp(v, "info") || !std::strcmp(v, "2")) return Level::Info;
  if (!std::strcmp(v, "debug") || !std::strcmp(v, "3")) return Level::Debug;
  return Level::Warn;
}

Level level() {
  static const Level lvl = parse_env();
  return lvl;
}

bool enabled(Level lvl) { return static_cast<int>(lvl) <= static_cast<int>(level()); }

void write(Level lvl, const std::string& msg) {
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::fprintf(stderr, "[di %s] %s\n", names[static_cast<int>(lvl)], msg.c_str());
}

}  // namespace di::log
