#ifndef MVOS_HSI_INTERNAL_PARALLEL_HPP
#define MVOS_HSI_INTERNAL_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace mvos_hsi::detail {

/// Run fn(i) for i in [0, n) on up to `jobs` worker threads (0 = hardware
/// concurrency). fn must not throw; per-item errors belong in the item's
/// result slot so reports stay in input order.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
    if (jobs == 0)
        jobs = std::thread::hardware_concurrency();
    if (jobs == 0)
        jobs = 1;
    if (n == 0)
        return;
    if (jobs == 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                fn(i);
        });
    }
    for (auto& t : pool)
        t.join();
}

} // namespace mvos_hsi::detail

#endif
