// warnings.cpp — Default warning sink

#include "blockade/warnings.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace blockade {

namespace {

std::mutex handler_mutex;

WarningHandler& handler_ref()
{
    static WarningHandler handler = [](const std::string& msg) {
        std::cerr << "[blockade] warning: " << msg << "\n";
    };
    return handler;
}

} // namespace

WarningHandler set_warning_handler(WarningHandler handler)
{
    std::lock_guard<std::mutex> lock(handler_mutex);
    WarningHandler previous = std::move(handler_ref());
    handler_ref() = std::move(handler);
    return previous;
}

void emit_warning(const std::string& message)
{
    WarningHandler snapshot;
    {
        std::lock_guard<std::mutex> lock(handler_mutex);
        snapshot = handler_ref();
    }
    if (snapshot) snapshot(message);
}

} // namespace blockade
