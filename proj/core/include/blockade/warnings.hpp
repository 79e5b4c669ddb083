// warnings.hpp — Soft-failure reporting hook

#pragma once

#include <functional>
#include <string>

namespace blockade {

using WarningHandler = std::function<void(const std::string&)>;

// Replaces the process-wide warning sink (default: stderr). Returns the
// previous handler. Not intended to be swapped concurrently with running
// operations.
WarningHandler set_warning_handler(WarningHandler handler);

void emit_warning(const std::string& message);

} // namespace blockade
