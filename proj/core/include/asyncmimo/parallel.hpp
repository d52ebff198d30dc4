// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#pragma once

#include <cstddef>
#include <functional>

namespace asyncmimo {

// Worker count: ASYNC_MIMO_THREADS if set (>= 1), else the hardware concurrency.
int default_thread_count();

// Runs body(task) for task = 0..count-1 on up to `threads` workers. Tasks are
// handed out dynamically; callers must make results independent of which
// worker ran a task.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

} // namespace asyncmimo
