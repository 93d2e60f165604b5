#include "horolab/util.hpp"

#include <cstdio>
#include <cstdlib>
#include <thread>

namespace horolab {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt_cplx(cplx v) {
    return fmt_double(v.real()) + (v.imag() < 0 ? "-" : "+") + fmt_double(std::abs(v.imag())) + "i";
}

unsigned thread_cap() {
    const char* env = std::getenv("HOROLAB_THREADS");
    if (!env) return 1;
    long n = std::strtol(env, nullptr, 10);
    if (n < 1) return 1;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    return static_cast<unsigned>(n) > 4 * hw ? 4 * hw : static_cast<unsigned>(n);
}

void parallel_blocks(std::size_t nblocks, const std::function<void(std::size_t)>& fn) {
    unsigned threads = thread_cap();
    if (threads <= 1 || nblocks <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b) fn(b);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t stride = threads;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            for (std::size_t b = t; b < nblocks; b += stride) fn(b);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace horolab
