#pragma once

#include <algorithm>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace isoclust {

/// Worker count used when none is requested explicitly: the ISOCLUST_WORKERS
/// environment variable if set to a positive integer, otherwise the hardware
/// concurrency (at least 1).
std::size_t default_worker_count();

/// Fork-join pool with a fixed set of workers. The calling thread takes part
/// in every dispatch, so an Executor with one worker never spawns a thread.
///
/// Dispatch is blocking: parallel_for returns only after every chunk has run
/// and every helper thread has left the job. This is the barrier that the
/// depth-by-depth engine relies on.
class Executor {
public:
    explicit Executor(std::size_t workers = default_worker_count());
    ~Executor();

    Executor(const Executor&) = delete;
    Executor& operator=(const Executor&) = delete;

    std::size_t workers() const noexcept { return workers_; }

    /// Calls body(begin, end) over disjoint chunks covering [0, count).
    /// Ranges no larger than `grain` run inline on the caller.
    template <typename Body>
    void parallel_for(std::size_t count, std::size_t grain, Body&& body) {
        if (count == 0) return;
        grain = std::max<std::size_t>(grain, 1);
        if (workers_ == 1 || count <= grain) {
            body(std::size_t{0}, count);
            return;
        }
        const std::size_t max_chunks = (count + grain - 1) / grain;
        const std::size_t chunks = std::min(max_chunks, workers_ * 4);
        const std::size_t step = (count + chunks - 1) / chunks;
        const std::size_t used = (count + step - 1) / step;
        std::function<void(std::size_t)> task = [&](std::size_t c) {
            const std::size_t begin = c * step;
            body(begin, std::min(count, begin + step));
        };
        dispatch(used, task);
    }

private:
    void dispatch(std::size_t chunks, const std::function<void(std::size_t)>& task);
    void worker_loop();
    void drain();

    std::size_t workers_;
    std::vector<std::thread> threads_;

    std::mutex mutex_;
    std::condition_variable wake_;
    std::condition_variable finished_;
    bool stop_ = false;
    std::size_t generation_ = 0;
    std::size_t acknowledged_ = 0;

    const std::function<void(std::size_t)>* task_ = nullptr;
    std::size_t chunk_count_ = 0;
    std::size_t next_chunk_ = 0;
    std::exception_ptr error_;
};

}  // namespace isoclust
