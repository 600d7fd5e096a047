#pragma once

#include <cstdint>
#include <vector>

#include "chemoctrl/parallel.hpp"

namespace chemoctrl {

namespace detail {

constexpr std::int64_t kReduceBlock = 1024;

inline double combine_pairwise(const std::vector<double>& partials, std::size_t lo,
                               std::size_t hi) {
    if (hi - lo == 1) return partials[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return combine_pairwise(partials, lo, mid) + combine_pairwise(partials, mid, hi);
}

}  // namespace detail

// Deterministic sum of term(i) for i in [0, n): fixed 1024-wide blocks are
// summed sequentially, then combined over a fixed pairwise tree. Block partials
// may be computed in parallel; the result is identical for every worker count.
template <class F>
double indexed_sum(std::int64_t n, F&& term) {
    if (n <= 0) return 0.0;
    const std::int64_t nblocks = (n + detail::kReduceBlock - 1) / detail::kReduceBlock;
    if (nblocks == 1) {
        double s = 0.0;
        for (std::int64_t i = 0; i < n; ++i) s += term(i);
        return s;
    }
    std::vector<double> partials(static_cast<std::size_t>(nblocks), 0.0);
    parallel_for(nblocks, [&](std::int64_t bb, std::int64_t be) {
        for (std::int64_t b = bb; b < be; ++b) {
            const std::int64_t lo = b * detail::kReduceBlock;
            const std::int64_t hi = std::min(n, lo + detail::kReduceBlock);
            double s = 0.0;
            for (std::int64_t i = lo; i < hi; ++i) s += term(i);
            partials[static_cast<std::size_t>(b)] = s;
        }
    });
    return detail::combine_pairwise(partials, 0, partials.size());
}

}  // namespace chemoctrl
