#include "lcl/thread_pool.hpp"

#include <atomic>
#include <cstdlib>
#include <future>

namespace lcl {

ThreadPool::ThreadPool(unsigned n_threads) {
    if (n_threads == 0) n_threads = 1;
    workers_.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i)
        workers_.emplace_back([this] { worker_loop(); });
}

ThreadPool::~ThreadPool() {
    {
        std::lock_guard<std::mutex> lk(mu_);
        stop_ = true;
    }
    cv_.notify_all();
    for (auto& w : workers_) w.join();
}

void ThreadPool::worker_loop() {
    for (;;) {
        std::function<void()> task;
        {
            std::unique_lock<std::mutex> lk(mu_);
            cv_.wait(lk, [this] { return stop_ || !tasks_.empty(); });
            if (stop_ && tasks_.empty()) return;
            task = std::move(tasks_.front());
            tasks_.pop();
        }
        task();
    }
}

void ThreadPool::parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    if (size() == 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::promise<void>> done(size());
    std::vector<std::future<void>> futs;
    futs.reserve(size());
    for (auto& p : done) futs.push_back(p.get_future());
    {
        std::lock_guard<std::mutex> lk(mu_);
        for (unsigned w = 0; w < size(); ++w) {
            tasks_.push([&, w] {
                for (;;) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= n) break;
                    fn(i);
                }
                done[w].set_value();
            });
        }
    }
    cv_.notify_all();
    for (auto& f : futs) f.get();
}

unsigned ThreadPool::configured_threads() {
    if (const char* env = std::getenv("LCL_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

ThreadPool& global_pool() {
    static ThreadPool pool(ThreadPool::configured_threads());
    return pool;
}

}  // namespace lcl
