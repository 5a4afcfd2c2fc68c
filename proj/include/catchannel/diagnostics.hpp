#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace catchannel::diag {

/// Non-fatal numerical warnings (ill-conditioning, clamped probabilities,
/// short cutoffs). They go to a process-wide sink; the default writes one
/// line to stderr.
using Sink = std::function<void(std::string_view module, std::string_view message)>;

/// Installs a sink and returns the previous one. An empty sink discards.
Sink set_sink(Sink sink);

void warn(std::string_view module, std::string_view message);

/// Scoped sink replacement, mainly for tests.
class ScopedSink {
 public:
  explicit ScopedSink(Sink sink) : previous_(set_sink(std::move(sink))) {}
  ~ScopedSink() { set_sink(std::move(previous_)); }
  ScopedSink(const ScopedSink&) = delete;
  ScopedSink& operator=(const ScopedSink&) = delete;

 private:
  Sink previous_;
};

}  // namespace catchannel::diag
