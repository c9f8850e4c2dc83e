#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <thread>
#include <vector>

namespace spectral::detail {

/// f applied to each input on a bounded pool of async workers; output order
/// follows input order.
template <class T, class F>
auto parallel_map(const std::vector<T>& in, F f) -> std::vector<decltype(f(in.front()))> {
    using R = decltype(f(in.front()));
    std::vector<R> out(in.size());
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(in.size(), std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = f(in[i]);
        return out;
    }
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w)
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < in.size(); i += workers) out[i] = f(in[i]);
        }));
    for (auto& j : jobs) j.get();
    return out;
}

}  // namespace spectral::detail
