#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace loforge {

/// Explicit request, else LO_FORGE_WORKERS, else hardware concurrency (>= 1).
inline unsigned resolve_workers(std::optional<unsigned> requested = std::nullopt) {
    if (requested && *requested > 0) return *requested;
    if (const char* env = std::getenv("LO_FORGE_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (...) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Splits [0, total) into a fixed number of chunks, independent of the worker
/// count, and runs fn(chunk, begin, end) for each. Callers reduce per-chunk
/// results in chunk order, so output never depends on `workers`.
template <class Fn>
std::size_t parallel_chunks(std::uint64_t total, unsigned workers, Fn&& fn, std::size_t chunks = 256) {
    chunks = static_cast<std::size_t>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(chunks, total)));
    const auto bounds = [&](std::size_t c) { return total * c / chunks; };
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(chunks)));
    if (workers == 1) {
        for (std::size_t c = 0; c < chunks; ++c) fn(c, bounds(c), bounds(c + 1));
        return chunks;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t c = w; c < chunks; c += workers) fn(c, bounds(c), bounds(c + 1));
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return chunks;
}

}  // namespace loforge
