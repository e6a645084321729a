#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace drm3d {

// Fixed pool of worker threads shared by matmul, dataset generation and
// evaluation. Work is split into one contiguous chunk per thread, so results
// are bitwise identical for any thread count.
class ThreadPool {
  public:
    static ThreadPool& instance();

    void resize(int threads);
    int threads() const;

    // Calls fn(begin, end) over a partition of [0, n). Blocks until done.
    // Re-entrant calls from worker threads run inline on the caller.
    void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn);

    ~ThreadPool();

  private:
    ThreadPool();
    struct Impl;
    Impl* impl_;
};

inline void parallel_for(std::int64_t n,
                         const std::function<void(std::int64_t, std::int64_t)>& fn) {
    ThreadPool::instance().parallel_for(n, fn);
}

}  // namespace drm3d
