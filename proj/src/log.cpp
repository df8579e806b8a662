#include "idearel/log.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace idearel::log {
namespace {

std::mutex sink_mutex;

Sink& current_sink() {
    static Sink sink;
    return sink;
}

}  // namespace

Sink set_warning_sink(Sink sink) {
    std::lock_guard lock(sink_mutex);
    return std::exchange(current_sink(), std::move(sink));
}

void warn(std::string_view message) {
    std::lock_guard lock(sink_mutex);
    if (auto& sink = current_sink()) {
        sink(message);
        return;
    }
    std::cerr << "warning: " << message << '\n';
}

}  // namespace idearel::log
