#include "uwoc/log.hpp"

#include <iostream>
#include <mutex>
#include <set>

namespace uwoc {
namespace {

std::mutex g_mu;
std::set<std::string> g_seen;
std::function<void(const std::string&)> g_sink;

}  // namespace

void log_warning(const std::string& msg) {
  std::lock_guard lock(g_mu);
  if (!g_seen.insert(msg).second) return;
  if (g_sink)
    g_sink(msg);
  else
    std::cerr << "warning: " << msg << '\n';
}

void set_warning_sink(std::function<void(const std::string&)> sink) {
  std::lock_guard lock(g_mu);
  g_sink = std::move(sink);
}

}  // namespace uwoc
