#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace zeno {

/// Caps the number of worker threads used by parallel_for (0 restores the default,
/// which is std::thread::hardware_concurrency()).
void set_thread_limit(unsigned limit);
unsigned thread_limit();

/// Reads ZENO_LAB_THREADS and applies it. Returns the effective limit.
unsigned apply_thread_limit_from_env();

/// Calls body(i) for i in [0, count). Each index is visited exactly once; results are
/// independent of the thread count as long as body writes only to slot i.
/// The first exception thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace zeno
