#include "isoclust/executor.hpp"

#include <charconv>
#include <cstdlib>
#include <string_view>

namespace isoclust {

std::size_t default_worker_count() {
    if (const char* env = std::getenv("ISOCLUST_WORKERS")) {
        std::string_view text{env};
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec == std::errc{} && ptr == text.data() + text.size() && value > 0) return value;
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

Executor::Executor(std::size_t workers) : workers_(std::max<std::size_t>(workers, 1)) {
    threads_.reserve(workers_ - 1);
    for (std::size_t i = 1; i < workers_; ++i) threads_.emplace_back([this] { worker_loop(); });
}

Executor::~Executor() {
    {
        std::lock_guard lock(mutex_);
        stop_ = true;
    }
    wake_.notify_all();
    for (auto& t : threads_) t.join();
}

void Executor::drain() {
    for (;;) {
        std::size_t chunk;
        {
            std::lock_guard lock(mutex_);
            if (next_chunk_ >= chunk_count_) return;
            chunk = next_chunk_++;
        }
        try {
            (*task_)(chunk);
        } catch (...) {
            std::lock_guard lock(mutex_);
            if (!error_) error_ = std::current_exception();
            next_chunk_ = chunk_count_;
        }
    }
}

void Executor::worker_loop() {
    std::size_t seen = 0;
    for (;;) {
        {
            std::unique_lock lock(mutex_);
            wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
            if (stop_) return;
            seen = generation_;
        }
        drain();
        {
            std::lock_guard lock(mutex_);
            ++acknowledged_;
        }
        finished_.notify_one();
    }
}

void Executor::dispatch(std::size_t chunks, const std::function<void(std::size_t)>& task) {
    {
        std::lock_guard lock(mutex_);
        task_ = &task;
        chunk_count_ = chunks;
        next_chunk_ = 0;
        acknowledged_ = 0;
        error_ = nullptr;
        ++generation_;
    }
    wake_.notify_all();
    drain();
    std::exception_ptr error;
    {
        std::unique_lock lock(mutex_);
        finished_.wait(lock, [&] { return acknowledged_ == threads_.size(); });
        task_ = nullptr;
        error = error_;
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace isoclust
