// parallel.hpp — Block-parallel loops with thread-count independent reductions
//
// Work is cut into fixed-size blocks whose boundaries depend only on the
// problem size. Partial sums are stored per block and combined serially in
// block order, so results are bit-identical for any thread count.

#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace giant::parallel {

inline constexpr std::size_t block_size = 4096;

void set_threads(int n);  // n <= 0 restores the runtime default
int threads();

inline std::size_t block_count(std::size_t n) { return (n + block_size - 1) / block_size; }

// body(begin, end) for each block, possibly concurrently.
template <class Body>
void for_blocks(std::size_t n, Body&& body) {
    const auto blocks = static_cast<long>(block_count(n));
#pragma omp parallel for schedule(static) if (blocks > 1)
    for (long b = 0; b < blocks; ++b) {
        const std::size_t begin = static_cast<std::size_t>(b) * block_size;
        body(begin, std::min(n, begin + block_size));
    }
}

// Deterministic sum of body(begin, end) over blocks.
template <class T, class Body>
T block_sum(std::size_t n, Body&& body) {
    const std::size_t blocks = block_count(n);
    std::vector<T> partial(blocks, T{});
    const auto nb = static_cast<long>(blocks);
#pragma omp parallel for schedule(static) if (nb > 1)
    for (long b = 0; b < nb; ++b) {
        const std::size_t begin = static_cast<std::size_t>(b) * block_size;
        partial[static_cast<std::size_t>(b)] = body(begin, std::min(n, begin + block_size));
    }
    T total{};
    for (const auto& p : partial) total += p;
    return total;
}

} // namespace giant::parallel
