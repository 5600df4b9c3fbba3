// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace smatch {

/// Default worker count: hardware concurrency, at least one.
inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Runs body(worker_state, i) for i in [0, count) over `workers` threads.
/// Each worker owns a default-constructed State; the states are returned in
/// worker order so the caller can reduce them. Replicate i must derive its
/// randomness from i alone, and reductions must be order-independent
/// (integer counts), for results not to depend on the worker count.
template <class State, class Body>
std::vector<State> parallel_replicates(std::size_t count, unsigned workers, Body&& body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::vector<State> states(workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(states[0], i);
    return states;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < count; i += workers) body(states[w], i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return states;
}

}  // namespace smatch
