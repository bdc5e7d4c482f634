#pragma once

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace weaksub {

using cplx = std::complex<double>;
using std::int64_t;

inline constexpr double PI = 3.14159265358979323846264338327950288;

// Thrown when an operation is called outside its stated domain.
struct precondition_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when a requested tolerance cannot be met within the step budget.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Global worker count. Parallel loops always split work into a fixed number
// of chunks (independent of the worker count) and reduce chunk results in
// index order, so results are bit-identical for any thread setting.
// ---------------------------------------------------------------------------
inline unsigned& thread_count_ref() {
    static unsigned n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}
inline void set_thread_count(unsigned n) { thread_count_ref() = std::max(1u, n); }
inline unsigned thread_count() { return thread_count_ref(); }

// body(chunk_index, begin, end) over [0, n) split into n_chunks pieces.
inline void parallel_chunks(int64_t n, int n_chunks,
                            const std::function<void(int, int64_t, int64_t)>& body) {
    if (n <= 0) return;
    if (n_chunks > n) n_chunks = static_cast<int>(n);
    unsigned workers = std::min<unsigned>(thread_count(), n_chunks);
    if (workers <= 1) {
        for (int c = 0; c < n_chunks; ++c) {
            int64_t b = n * c / n_chunks, e = n * (c + 1) / n_chunks;
            body(c, b, e);
        }
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    auto work = [&] {
        for (;;) {
            int c = next.fetch_add(1);
            if (c >= n_chunks) break;
            int64_t b = n * c / n_chunks, e = n * (c + 1) / n_chunks;
            body(c, b, e);
        }
    };
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
}

// ---------------------------------------------------------------------------
// Neumaier compensated accumulator. The Irwin-Hall weight and a few identity
// residuals subtract nearly equal alternating terms; plain summation loses
// digits near the knots.
// ---------------------------------------------------------------------------
struct kahan_sum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace weaksub
