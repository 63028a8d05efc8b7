#pragma once

#include <condition_variable>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace senseforge {

// Ordered parallel map over a stream: produce() hands out items one by one,
// work() runs on a worker pool, consume() sees results strictly in production
// order on the calling thread. A bounded in-flight window keeps memory flat
// when consumers are slower than workers. threads <= 1 degrades to a plain
// sequential loop with identical semantics.
template <typename Producer, typename Work, typename Consume>
void ordered_pipeline(Producer produce, Work work, Consume consume, int threads,
                      size_t window = 0) {
    using Item = typename std::invoke_result_t<Producer>::value_type;
    using Result = std::invoke_result_t<Work, Item&&>;

    if (threads <= 1) {
        while (auto item = produce()) consume(work(std::move(*item)));
        return;
    }
    if (window == 0) window = static_cast<size_t>(threads) * 4;

    std::mutex mtx;
    std::condition_variable room_cv, ready_cv;
    std::map<size_t, Result> ready;
    size_t next_seq = 0;       // next item to hand out
    size_t consumed = 0;       // next result to consume
    bool exhausted = false;
    size_t in_flight = 0;
    std::exception_ptr failure;

    auto worker = [&]() {
        while (true) {
            std::optional<Item> item;
            size_t seq = 0;
            {
                std::unique_lock lk(mtx);
                room_cv.wait(lk, [&] { return failure || exhausted || in_flight < window; });
                if (failure || exhausted) return;
                try {
                    item = produce();
                } catch (...) {
                    failure = std::current_exception();
                    ready_cv.notify_all();
                    room_cv.notify_all();
                    return;
                }
                if (!item) {
                    exhausted = true;
                    ready_cv.notify_all();
                    room_cv.notify_all();
                    return;
                }
                seq = next_seq++;
                ++in_flight;
            }
            try {
                Result r = work(std::move(*item));
                std::lock_guard lk(mtx);
                ready.emplace(seq, std::move(r));
                ready_cv.notify_all();
            } catch (...) {
                std::lock_guard lk(mtx);
                if (!failure) failure = std::current_exception();
                ready_cv.notify_all();
                room_cv.notify_all();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);

    {
        std::unique_lock lk(mtx);
        while (true) {
            ready_cv.wait(lk, [&] {
                return failure || ready.count(consumed) > 0 ||
                       (exhausted && in_flight == 0 && ready.empty());
            });
            if (failure) break;
            auto it = ready.find(consumed);
            if (it == ready.end()) break;  // exhausted and drained
            Result r = std::move(it->second);
            ready.erase(it);
            --in_flight;
            ++consumed;
            room_cv.notify_all();
            lk.unlock();
            try {
                consume(std::move(r));
            } catch (...) {
                lk.lock();
                if (!failure) failure = std::current_exception();
                room_cv.notify_all();
                break;
            }
            lk.lock();
        }
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace senseforge
