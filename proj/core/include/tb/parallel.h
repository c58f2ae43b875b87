#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tb {

// 0 selects $TB_WORKERS if set, else the number of hardware threads.
inline unsigned resolve_workers(unsigned const requested) {
  if (requested != 0U) {
    return requested;
  }
  if (auto const* env = std::getenv("TB_WORKERS"); env != nullptr) {
    auto const v = std::atoi(env);
    if (v > 0) {
      return static_cast<unsigned>(v);
    }
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

// Calls fn(i) for i in [0, n). Items are handed out in small chunks; fn must
// only write to state owned by item i.
template <typename Fn>
void parallel_for(std::size_t const n, unsigned const workers, Fn&& fn) {
  auto const n_threads =
      static_cast<std::size_t>(std::min<std::size_t>(resolve_workers(workers), n));
  if (n_threads <= 1U) {
    for (auto i = std::size_t{0U}; i != n; ++i) {
      fn(i);
    }
    return;
  }

  constexpr auto kChunk = std::size_t{16U};
  auto next = std::atomic_size_t{0U};
  auto first_error = std::exception_ptr{};
  auto error_mutex = std::mutex{};
  {
    auto threads = std::vector<std::jthread>{};
    threads.reserve(n_threads);
    for (auto t = std::size_t{0U}; t != n_threads; ++t) {
      threads.emplace_back([&]() {
        try {
          for (auto begin = next.fetch_add(kChunk); begin < n;
               begin = next.fetch_add(kChunk)) {
            auto const end = std::min(n, begin + kChunk);
            for (auto i = begin; i != end; ++i) {
              fn(i);
            }
          }
        } catch (...) {
          auto const lock = std::scoped_lock{error_mutex};
          if (!first_error) {
            first_error = std::current_exception();
          }
          next = n;
        }
      });
    }
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

}  // namespace tb
