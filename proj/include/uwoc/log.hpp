#pragma once

#include <functional>
#include <string>

namespace uwoc {

/// Warnings go to stderr unless a sink is installed. Each distinct message is
/// emitted once per process.
void log_warning(const std::string& msg);
void set_warning_sink(std::function<void(const std::string&)> sink);

}  // namespace uwoc
