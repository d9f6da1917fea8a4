#include "talbot/parallel.hpp"

#include <cstdlib>
#include <string>

namespace talbot {

ThreadPool::ThreadPool(std::size_t threads) {
    if (threads == 0) threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    for (std::size_t i = 1; i < threads; ++i) workers_.emplace_back([this] { worker_loop(); });
}

ThreadPool::~ThreadPool() {
    {
        std::lock_guard lock(mutex_);
        stop_ = true;
    }
    wake_.notify_all();
    for (auto& w : workers_) w.join();
}

void ThreadPool::worker_loop() {
    std::size_t seen = 0;
    std::unique_lock lock(mutex_);
    for (;;) {
        wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
        ++active_;
        while (next_ < end_) {
            const std::size_t i = next_++;
            const auto* body = body_;
            lock.unlock();
            try {
                (*body)(i);
            } catch (...) {
                lock.lock();
                if (!error_) error_ = std::current_exception();
                next_ = end_;
                continue;
            }
            lock.lock();
        }
        if (--active_ == 0) done_.notify_all();
    }
}

void ThreadPool::parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& body) {
    if (begin >= end) return;
    if (workers_.empty()) {
        for (std::size_t i = begin; i < end; ++i) body(i);
        return;
    }
    std::unique_lock lock(mutex_);
    body_ = &body;
    next_ = begin;
    end_ = end;
    error_ = nullptr;
    ++generation_;
    ++active_;
    wake_.notify_all();
    while (next_ < end_) {
        const std::size_t i = next_++;
        lock.unlock();
        try {
            body(i);
        } catch (...) {
            lock.lock();
            if (!error_) error_ = std::current_exception();
            next_ = end_;
            continue;
        }
        lock.lock();
    }
    --active_;
    done_.wait(lock, [&] { return active_ == 0; });
    body_ = nullptr;
    if (error_) {
        auto e = error_;
        error_ = nullptr;
        std::rethrow_exception(e);
    }
}

std::size_t default_thread_count() {
    if (const char* env = std::getenv("TALBOT_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (...) {
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

}  // namespace talbot
