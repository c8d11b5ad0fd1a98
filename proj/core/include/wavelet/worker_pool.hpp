#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace wavelet {

/// Fixed set of worker threads executing static range partitions. The
/// calling thread takes part as worker 0, so a pool of size 1 spawns nothing.
class WorkerPool {
 public:
  /// `workers` == 0 selects std::thread::hardware_concurrency().
  explicit WorkerPool(std::size_t workers = 1);
  ~WorkerPool();

  WorkerPool(WorkerPool const&) = delete;
  WorkerPool& operator=(WorkerPool const&) = delete;

  std::size_t size() const noexcept { return size_; }

  /// Splits [0, count) into at most size() contiguous ranges of at least
  /// `grain` items and calls fn(begin, end) for each; blocks until all are
  /// done. The first exception thrown by any range is rethrown.
  void parallel_for(std::size_t count, std::size_t grain,
                    std::function<void(std::size_t, std::size_t)> const& fn);

  /// As parallel_for, but also passes the range's part index; returns the
  /// number of parts used.
  std::size_t parallel_for_parts(std::size_t count, std::size_t grain,
                                 std::function<void(std::size_t, std::size_t, std::size_t)> const& fn);

  /// Runs fn(worker_index) once on each of `parts` (<= size()) workers.
  void run(std::size_t parts, std::function<void(std::size_t)> const& fn);

 private:
  void worker_loop(std::size_t index);

  std::size_t size_;
  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  std::function<void(std::size_t)> const* job_ = nullptr;
  std::size_t job_parts_ = 0;
  std::size_t generation_ = 0;
  std::size_t pending_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
};

/// Resolves a user-facing worker count (0 = all hardware threads).
std::size_t resolve_workers(std::size_t workers) noexcept;

}  // namespace wavelet
