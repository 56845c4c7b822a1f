#pragma once

#include <condition_variable>
#include <functional>
#include <mutex>
#include <queue>
#include <thread>
#include <vector>

namespace lcl {

// Fixed-size pool used for trajectory/Gramian-column parallelism.  Results
// are always collected in task-index order, so the output of a parallel
// region is independent of scheduling.
class ThreadPool {
  public:
    explicit ThreadPool(unsigned n_threads);
    ~ThreadPool();

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    unsigned size() const { return static_cast<unsigned>(workers_.size()); }

    // Runs fn(i) for i in [0, n); blocks until all are done.  fn must not
    // touch shared mutable state; each index writes only its own slot.
    void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

    // Thread count from LCL_THREADS, default 1 per logical core.
    static unsigned configured_threads();

  private:
    void worker_loop();

    std::vector<std::thread> workers_;
    std::queue<std::function<void()>> tasks_;
    std::mutex mu_;
    std::condition_variable cv_;
    bool stop_ = false;
};

// Shared pool sized from the environment, constructed on first use.
ThreadPool& global_pool();

}  // namespace lcl
