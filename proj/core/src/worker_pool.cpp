#include "wavelet/worker_pool.hpp"

#include <algorithm>

namespace wavelet {

std::size_t resolve_workers(std::size_t workers) noexcept {
  if (workers != 0) return workers;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

WorkerPool::WorkerPool(std::size_t workers) : size_(resolve_workers(workers)) {
  threads_.reserve(size_ - 1);
  for (std::size_t i = 1; i < size_; ++i) {
    threads_.emplace_back([this, i] { worker_loop(i); });
  }
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mutex_);
    stop_ = true;
  }
  wake_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::worker_loop(std::size_t index) {
  std::size_t seen = 0;
  for (;;) {
    std::function<void(std::size_t)> const* job = nullptr;
    {
      std::unique_lock lock(mutex_);
      wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      if (index >= job_parts_) continue;
      job = job_;
    }
    std::exception_ptr err;
    try {
      (*job)(index);
    } catch (...) {
      err = std::current_exception();
    }
    std::lock_guard lock(mutex_);
    if (err && !error_) error_ = err;
    if (--pending_ == 0) done_.notify_one();
  }
}

void WorkerPool::run(std::size_t parts, std::function<void(std::size_t)> const& fn) {
  parts = std::min(parts, size_);
  if (parts == 0) return;
  if (parts == 1) {
    fn(0);
    return;
  }
  {
    std::lock_guard lock(mutex_);
    job_ = &fn;
    job_parts_ = parts;
    pending_ = parts - 1;
    error_ = nullptr;
    ++generation_;
  }
  wake_.notify_all();
  std::exception_ptr local;
  try {
    fn(0);
  } catch (...) {
    local = std::current_exception();
  }
  std::unique_lock lock(mutex_);
  done_.wait(lock, [&] { return pending_ == 0; });
  job_ = nullptr;
  auto err = local ? local : error_;
  error_ = nullptr;
  lock.unlock();
  if (err) std::rethrow_exception(err);
}

void WorkerPool::parallel_for(std::size_t count, std::size_t grain,
                              std::function<void(std::size_t, std::size_t)> const& fn) {
  parallel_for_parts(count, grain, [&](std::size_t, std::size_t begin, std::size_t end) { fn(begin, end); });
}

std::size_t WorkerPool::parallel_for_parts(
    std::size_t count, std::size_t grain,
    std::function<void(std::size_t, std::size_t, std::size_t)> const& fn) {
  if (count == 0) return 0;
  grain = std::max<std::size_t>(grain, 1);
  std::size_t const parts = std::clamp<std::size_t>((count + grain - 1) / grain, 1, size_);
  std::size_t const base = count / parts;
  std::size_t const extra = count % parts;
  run(parts, [&](std::size_t p) {
    std::size_t const begin = p * base + std::min(p, extra);
    std::size_t const end = begin + base + (p < extra ? 1 : 0);
    fn(p, begin, end);
  });
  return parts;
}

}  // namespace wavelet
