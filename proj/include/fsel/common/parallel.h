#pragma once

#include <cstddef>
#include <functional>

namespace fsel {

/// Resolves a requested worker count; 0 means one per hardware thread.
std::size_t resolve_workers(std::size_t requested) noexcept;

/// Runs body(i) for i in [0, count) on a pool of workers pulling indices
/// from a shared counter. If any call throws, the exception from the
/// lowest failing index is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace fsel
