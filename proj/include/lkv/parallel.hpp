#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace lkv {

// Effective worker count: an explicit request wins, then the LKV_THREADS
// environment variable, then the hardware concurrency.
inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LKV_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Small fork-join pool. parallel_for splits [begin, end) into grain-sized
// chunks claimed through an atomic cursor; the calling thread participates.
// Bodies must not issue nested parallel_for calls on the same pool.
class ThreadPool {
 public:
  explicit ThreadPool(unsigned threads) : n_(threads ? threads : 1) {
    for (unsigned i = 0; i + 1 < n_; ++i)
      workers_.emplace_back([this] { worker_loop(); });
  }

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  ~ThreadPool() {
    {
      std::lock_guard<std::mutex> lk(m_);
      stop_ = true;
    }
    cv_.notify_all();
    for (auto& t : workers_) t.join();
  }

  unsigned thread_count() const { return n_; }

  void parallel_for(uint64_t begin, uint64_t end, uint64_t grain,
                    const std::function<void(uint64_t, uint64_t)>& body) {
    if (begin >= end) return;
    if (grain == 0) grain = 1;
    if (workers_.empty() || end - begin <= grain) {
      body(begin, end);
      return;
    }
    {
      std::lock_guard<std::mutex> lk(m_);
      body_ = &body;
      end_ = end;
      grain_ = grain;
      cursor_.store(begin, std::memory_order_relaxed);
      pending_ = static_cast<unsigned>(workers_.size());
      ++epoch_;
    }
    cv_.notify_all();
    run_chunks();
    std::unique_lock<std::mutex> lk(m_);
    done_cv_.wait(lk, [this] { return pending_ == 0; });
    body_ = nullptr;
    if (eptr_) {
      std::exception_ptr e = eptr_;
      eptr_ = nullptr;
      std::rethrow_exception(e);
    }
  }

 private:
  void run_chunks() {
    for (;;) {
      uint64_t lo = cursor_.fetch_add(grain_, std::memory_order_relaxed);
      if (lo >= end_) break;
      uint64_t hi = std::min(end_, lo + grain_);
      try {
        (*body_)(lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> lk(m_);
        if (!eptr_) eptr_ = std::current_exception();
        cursor_.store(end_, std::memory_order_relaxed);
        break;
      }
    }
  }

  void worker_loop() {
    uint64_t seen = 0;
    for (;;) {
      std::unique_lock<std::mutex> lk(m_);
      cv_.wait(lk, [this, &seen] { return stop_ || epoch_ != seen; });
      if (stop_) return;
      seen = epoch_;
      lk.unlock();
      run_chunks();
      lk.lock();
      if (--pending_ == 0) done_cv_.notify_all();
    }
  }

  unsigned n_;
  std::vector<std::thread> workers_;
  std::mutex m_;
  std::condition_variable cv_, done_cv_;
  const std::function<void(uint64_t, uint64_t)>* body_ = nullptr;
  std::atomic<uint64_t> cursor_{0};
  uint64_t end_ = 0;
  uint64_t grain_ = 1;
  uint64_t epoch_ = 0;
  unsigned pending_ = 0;
  bool stop_ = false;
  std::exception_ptr eptr_;
};

}  // namespace lkv
