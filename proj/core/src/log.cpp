#include "repominer/log.hpp"

#include <atomic>
#include <iostream>

namespace repominer::log {

namespace {

std::atomic<Level> g_level{Level::Warn};

std::string_view label(Level at) {
    switch (at) {
        case Level::Debug: return "debug";
        case Level::Info: return "info";
        case Level::Warn: return "warn";
        case Level::Error: return "error";
        case Level::Off: break;
    }
    return "?";
}

}  // namespace

void set_level(Level level) { g_level.store(level); }

Level level() { return g_level.load(); }

void write(Level at, std::string_view message) {
    if (at < g_level.load()) {
        return;
    }
    std::cerr << '[' << label(at) << "] " << message << '\n';
}

}  // namespace repominer::log
