#include "drm3d/thread_pool.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <mutex>
#include <thread>

namespace drm3d {

namespace {
thread_local bool t_inside_pool = false;
}

struct ThreadPool::Impl {
    std::mutex call_mu;  // serializes parallel_for callers
    std::mutex mu;
    std::condition_variable cv_work;
    std::condition_variable cv_done;
    std::vector<std::thread> workers;
    std::function<void(int)> chunk_fn;
    int chunk_count = 0;
    std::atomic<int> next_chunk{0};
    int done_chunks = 0;
    int checked_in = 0;
    std::uint64_t generation = 0;
    bool stopping = false;
    int thread_count = 1;

    void worker_loop() {
        t_inside_pool = true;
        std::uint64_t seen = 0;
        for (;;) {
            std::function<void(int)> fn;
            {
                std::unique_lock<std::mutex> lk(mu);
                cv_work.wait(lk, [&] { return stopping || generation != seen; });
                if (stopping) return;
                seen = generation;
                fn = chunk_fn;
            }
            run_chunks(fn);
            std::lock_guard<std::mutex> lk(mu);
            ++checked_in;
            cv_done.notify_all();
        }
    }

    void run_chunks(const std::function<void(int)>& fn) {
        for (;;) {
            int idx = next_chunk.fetch_add(1);
            if (idx >= chunk_count) break;
            fn(idx);
            std::lock_guard<std::mutex> lk(mu);
            ++done_chunks;
            cv_done.notify_all();
        }
    }

    void stop() {
        {
            std::lock_guard<std::mutex> lk(mu);
            stopping = true;
        }
        cv_work.notify_all();
        for (auto& t : workers) t.join();
        workers.clear();
    }
};

ThreadPool::ThreadPool() : impl_(new Impl) {}

ThreadPool::~ThreadPool() {
    impl_->stop();
    delete impl_;
}

ThreadPool& ThreadPool::instance() {
    static ThreadPool pool;
    return pool;
}

void ThreadPool::resize(int threads) {
    threads = std::max(1, threads);
    std::lock_guard<std::mutex> call_lk(impl_->call_mu);
    if (threads == impl_->thread_count) return;
    impl_->stop();
    impl_->stopping = false;
    impl_->thread_count = threads;
    for (int i = 0; i < threads - 1; ++i) {
        impl_->workers.emplace_back([this] { impl_->worker_loop(); });
    }
}

int ThreadPool::threads() const { return impl_->thread_count; }

void ThreadPool::parallel_for(std::int64_t n,
                              const std::function<void(std::int64_t, std::int64_t)>& fn) {
    if (n <= 0) return;
    if (t_inside_pool) {  // nested call: run inline
        fn(0, n);
        return;
    }
    std::lock_guard<std::mutex> call_lk(impl_->call_mu);
    int t = impl_->thread_count;
    if (t <= 1 || n == 1) {
        fn(0, n);
        return;
    }
    int chunks = static_cast<int>(std::min<std::int64_t>(t, n));
    std::int64_t base = n / chunks;
    std::int64_t rem = n % chunks;
    auto chunk_fn = [=](int idx) {
        std::int64_t begin = idx * base + std::min<std::int64_t>(idx, rem);
        std::int64_t end = begin + base + (idx < rem ? 1 : 0);
        fn(begin, end);
    };
    int nworkers = static_cast<int>(impl_->workers.size());
    {
        std::lock_guard<std::mutex> lk(impl_->mu);
        impl_->chunk_fn = chunk_fn;
        impl_->chunk_count = chunks;
        impl_->next_chunk.store(0);
        impl_->done_chunks = 0;
        impl_->checked_in = 0;
        ++impl_->generation;
    }
    impl_->cv_work.notify_all();
    impl_->run_chunks(chunk_fn);
    // Wait for chunk completion and for every worker to retire this
    // generation, so no stale worker can race into the next call.
    std::unique_lock<std::mutex> lk(impl_->mu);
    impl_->cv_done.wait(lk, [&] {
        return impl_->done_chunks == impl_->chunk_count && impl_->checked_in == nworkers;
    });
}

}  // namespace drm3d
