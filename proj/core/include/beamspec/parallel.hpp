#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <vector>

namespace beamspec {

/// Worker count from BEAMSPEC_THREADS (0 or unset = hardware concurrency).
unsigned worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. If any call
/// throws, the exception from the lowest index is rethrown after all workers join,
/// so failures are reported deterministically.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Deterministic map: out[i] = fn(i), independent of scheduling.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn) {
  std::vector<std::optional<T>> slots(count);
  parallel_for(count, [&](std::size_t i) { slots[i].emplace(fn(i)); });
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace beamspec
