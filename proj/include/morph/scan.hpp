#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace morph::scan {

/// Min/max reduction over f(0..n-1). NaN samples are skipped. Results are
/// schedule-independent because min/max are exact in floating point, so the
/// OpenMP variant is bit-identical to the serial reference.
struct MinMax {
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
};

template <class F>
MinMax minmax_serial(std::uint64_t n, F&& f) {
    MinMax r;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double v = f(i);
        if (std::isnan(v)) continue;
        if (v < r.min) r.min = v;
        if (v > r.max) r.max = v;
    }
    return r;
}

template <class F>
MinMax minmax_parallel(std::uint64_t n, F&& f) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(min : lo) reduction(max : hi) schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        const double v = f(static_cast<std::uint64_t>(i));
        if (std::isnan(v)) continue;
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
    return {lo, hi};
}

template <class Pred>
std::uint64_t count_serial(std::uint64_t n, Pred&& pred) {
    std::uint64_t c = 0;
    for (std::uint64_t i = 0; i < n; ++i)
        if (pred(i)) ++c;
    return c;
}

template <class Pred>
std::uint64_t count_parallel(std::uint64_t n, Pred&& pred) {
    std::uint64_t c = 0;
#pragma omp parallel for reduction(+ : c) schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
        if (pred(static_cast<std::uint64_t>(i))) ++c;
    return c;
}

}  // namespace morph::scan
