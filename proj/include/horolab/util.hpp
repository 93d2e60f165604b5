#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace horolab {

using std::int64_t;
using std::uint32_t;
using std::uint64_t;
using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// e(x) = exp(2*pi*i*x), with argument reduction done in long double before
// the trig call so that large rational phases (integers times b/r) stay sharp.
inline cplx e_of(double x) {
    long double frac = std::fmod(static_cast<long double>(x), 1.0L);
    double a = static_cast<double>(kTwoPi * frac);
    return {std::cos(a), std::sin(a)};
}

// Pairwise (tree) summation.  All long sums in the library go through this so
// results do not depend on how a range was split across blocks.
template <typename T>
T pairwise_sum(std::span<const T> xs) {
    if (xs.size() <= 32) {
        T acc{};
        for (const T& x : xs) acc += x;
        return acc;
    }
    std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

// Pairwise accumulation of f(i) for i in [0, n) without materializing values.
template <typename T, typename F>
T pairwise_sum_fn(uint64_t lo, uint64_t hi, F&& f) {
    if (hi <= lo) return T{};
    if (hi - lo <= 64) {
        T acc{};
        for (uint64_t i = lo; i < hi; ++i) acc += f(i);
        return acc;
    }
    uint64_t mid = lo + (hi - lo) / 2;
    return pairwise_sum_fn<T>(lo, mid, f) + pairwise_sum_fn<T>(mid, hi, f);
}

// Deterministic xorshift-family generator.  We do not use <random>
// distributions anywhere results are persisted, so outputs are reproducible
// down to the byte for a fixed seed.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // uniform integer in [0, n)
    uint64_t below(uint64_t n) { return n ? next() % n : 0; }

    int64_t integer(int64_t a, int64_t b) {  // inclusive range
        return a + static_cast<int64_t>(below(static_cast<uint64_t>(b - a + 1)));
    }

private:
    uint64_t state_;
};

// Least-squares slope of y against x.
inline double fit_slope(std::span<const double> x, std::span<const double> y) {
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Number formatting used by every CSV writer: shortest round-trip form, so
// identical runs produce identical bytes.
std::string fmt_double(double v);
std::string fmt_cplx(cplx v);

// Thread cap from HOROLAB_THREADS (default 1).
unsigned thread_cap();

// Runs fn(block_index) for block_index in [0, nblocks), possibly on several
// threads.  Blocks are fixed ahead of time, so any reduction done in block
// order afterwards is independent of the thread count.
void parallel_blocks(std::size_t nblocks, const std::function<void(std::size_t)>& fn);

} // namespace horolab
