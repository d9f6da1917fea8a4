// Minimal fixed-size worker pool. All parallel loops in the library go
// through parallel_for; each index writes only its own output slot, so
// results do not depend on the thread count.

#ifndef TALBOT_PARALLEL_HPP
#define TALBOT_PARALLEL_HPP

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace talbot {

class ThreadPool {
public:
    /// threads == 0 means hardware concurrency.
    explicit ThreadPool(std::size_t threads = 0);
    ~ThreadPool();
    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    std::size_t size() const noexcept { return workers_.size() + 1; }

    /// Calls body(i) for every i in [begin, end), the calling thread
    /// included. The first exception thrown by any body is rethrown after
    /// all indices have finished or been abandoned.
    void parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& body);

private:
    void worker_loop();

    std::vector<std::thread> workers_;
    std::mutex mutex_;
    std::condition_variable wake_;
    std::condition_variable done_;
    const std::function<void(std::size_t)>* body_ = nullptr;
    std::size_t next_ = 0;
    std::size_t end_ = 0;
    std::size_t active_ = 0;
    std::size_t generation_ = 0;
    std::exception_ptr error_;
    bool stop_ = false;
};

/// Thread count from TALBOT_THREADS, or hardware concurrency.
std::size_t default_thread_count();

}  // namespace talbot

#endif
