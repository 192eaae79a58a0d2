#pragma once

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace vibctl {

/// Cooperative stop flag shared between a scan and whoever wants to end it.
class CancellationToken {
 public:
  void request() noexcept { flag_.store(true, std::memory_order_relaxed); }
  bool requested() const noexcept { return flag_.load(std::memory_order_relaxed); }

 private:
  std::atomic<bool> flag_{false};
};

/// 0 means one worker per hardware thread.
inline std::size_t resolve_workers(std::size_t requested) {
  if (requested > 0) return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Evaluates compute(i) for i in [0, count) on `workers` threads and hands
/// each result to consume(i, result) on the calling thread in index order.
/// Workers pull indices from a shared counter, so the set of results does
/// not depend on scheduling. After cancellation no new index is started and
/// consumption stops at the first index that was never computed. The first
/// exception thrown by compute or consume is rethrown once all threads are
/// joined. Returns the number of results consumed.
template <class Compute, class Consume>
std::size_t run_ordered(std::size_t count, std::size_t workers, Compute&& compute,
                        Consume&& consume, const CancellationToken* cancel = nullptr) {
  using Result = std::decay_t<std::invoke_result_t<Compute&, std::size_t>>;
  workers = std::min(resolve_workers(workers), std::max<std::size_t>(count, 1));

  std::vector<std::optional<Result>> slots(count);
  std::vector<char> skipped(count, 0);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mutex;
  std::condition_variable ready;
  std::exception_ptr failure;

  auto fail = [&](std::exception_ptr e) {
    std::lock_guard lock(mutex);
    if (!failure) failure = e;
    stop = true;
  };

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) break;
      if (stop || (cancel && cancel->requested())) {
        std::lock_guard lock(mutex);
        skipped[i] = 1;
        ready.notify_all();
        continue;
      }
      try {
        Result r = compute(i);
        std::lock_guard lock(mutex);
        slots[i].emplace(std::move(r));
      } catch (...) {
        fail(std::current_exception());
        std::lock_guard lock(mutex);
        skipped[i] = 1;
      }
      ready.notify_all();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers > 1 ? workers : 0);
  if (workers > 1) {
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  std::size_t consumed = 0;
  if (workers <= 1) {
    work();
  }
  for (std::size_t i = 0; i < count; ++i) {
    std::optional<Result> r;
    {
      std::unique_lock lock(mutex);
      ready.wait(lock, [&] { return slots[i].has_value() || skipped[i]; });
      if (skipped[i]) break;
      r = std::move(slots[i]);
      slots[i].reset();
    }
    if (stop) break;
    try {
      consume(i, std::move(*r));
      ++consumed;
    } catch (...) {
      fail(std::current_exception());
      break;
    }
  }
  stop = true;
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return consumed;
}

}  // namespace vibctl
