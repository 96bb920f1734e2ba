#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace spacinglab {

/// Process-wide worker count for parallel loops. 0 means hardware default.
inline int& thread_count() {
    static int n = 0;
    return n;
}

inline int effective_threads() {
    int n = thread_count();
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    return n > 0 ? n : 1;
}

/// Runs fn(i) for i in [0, n). Work is partitioned by index, so results
/// written to slot i are identical for every thread count.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const int workers = static_cast<int>(std::min<std::size_t>(effective_threads(), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error = nullptr;
    std::mutex err_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

/// splitmix64 finalizer; the standard mixer for deriving child seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic child seed for stream `index` of a base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return mix64(base ^ mix64(index));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) {
    return mix64(mix64(mix64(base ^ mix64(a)) ^ mix64(b)) ^ mix64(c));
}

/// Kahan compensated accumulator.
class KahanSum {
public:
    void add(double x) {
        const double y = x - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double kahan_dot(const std::vector<double>& a, const std::vector<double>& b) {
    KahanSum s;
    for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
    return s.value();
}

inline double kahan_dot3(const std::vector<double>& a, const std::vector<double>& b,
                         const std::vector<double>& c) {
    KahanSum s;
    for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i] * c[i]);
    return s.value();
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    const double h = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) v[i] = lo + h * static_cast<double>(i);
    v.back() = hi;
    return v;
}

/// Shortest decimal form that round-trips a double exactly.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace spacinglab
