#include "catchannel/diagnostics.hpp"

#include <iostream>
#include <mutex>

namespace catchannel::diag {
namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

Sink& current_sink() {
  static Sink sink = [](std::string_view module, std::string_view message) {
    std::cerr << "warning [" << module << "]: " << message << '\n';
  };
  return sink;
}

}  // namespace

Sink set_sink(Sink sink) {
  std::lock_guard lock(sink_mutex());
  Sink previous = std::move(current_sink());
  current_sink() = std::move(sink);
  return previous;
}

void warn(std::string_view module, std::string_view message) {
  std::lock_guard lock(sink_mutex());
  if (current_sink()) current_sink()(module, message);
}

}  // namespace catchannel::diag
