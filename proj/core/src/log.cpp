#include "lure_eq/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>

namespace lure::log {
namespace {

Level from_env() {
    const char* env = std::getenv("LURE_EQ_LOG");
    return env ? parse_level(env) : Level::Info;
}

std::atomic<int>& current() {
    static std::atomic<int> lvl{static_cast<int>(from_env())};
    return lvl;
}

void emit(std::string_view tag, std::string_view msg) {
    static std::mutex mu;
    std::lock_guard lock(mu);
    std::cerr << "[lure-eq " << tag << "] " << msg << '\n';
}

}  // namespace

Level level() { return static_cast<Level>(current().load()); }

void set_level(Level lvl) { current().store(static_cast<int>(lvl)); }

Level parse_level(std::string_view text) {
    if (text == "quiet") return Level::Quiet;
    if (text == "trace") return Level::Trace;
    return Level::Info;
}

void warn(std::string_view msg) {
    if (level() >= Level::Info) emit("warn", msg);
}

void info(std::string_view msg) {
    if (level() >= Level::Info) emit("info", msg);
}

void trace(std::string_view msg) {
    if (level() >= Level::Trace) emit("trace", msg);
}

}  // namespace lure::log
