#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "plab/rng.hpp"
#include "plab/trace.hpp"

namespace plab {

// Runs run_one(seed) for seeds base + t, t = 0..trials-1, and returns the
// traces in trial order. Trials are spread across hardware threads; each
// owns its RNG stream, so the result does not depend on scheduling.
template <class Fn>
std::vector<IterateTrace> run_trials(std::size_t trials, std::uint64_t base_seed, Fn&& run_one) {
  std::vector<IterateTrace> out(trials);
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(trials, 1));
  if (workers <= 1) {
    for (std::size_t t = 0; t < trials; ++t) out[t] = run_one(trial_seed(base_seed, t));
    return out;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t t = w; t < trials; t += workers) {
        try {
          out[t] = run_one(trial_seed(base_seed, t));
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace plab
