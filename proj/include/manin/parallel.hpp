#pragma once

#include <cstddef>
#include <functional>

namespace manin {

// Worker count: MANIN_TORIC_THREADS if set, else hardware concurrency.
unsigned thread_count();
void set_thread_count(unsigned threads);

// Runs body(i) for i in [0, count). Work is split into fixed chunks, so any
// reduction the caller performs afterwards in index order is independent of
// the number of threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace manin
