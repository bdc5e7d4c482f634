#pragma once

// Multiplicative-function coefficient machinery: Euler-factor data at prime
// powers (LambdaTable), materialized coefficients with prefix sums
// (CoeffTable), the von Mangoldt table, the exponential expansion
//   exp(sum_k b(k) x^k / k) = sum_n a(n) x^n,
// its squared-modulus majorant, and the exact identity
//   (log x) S(x) = sum_{d<=x} Lambda_f(d) S(x/d) + sum_{n<=x} f(n) log(x/n).

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "weaksub/common.hpp"

namespace weaksub {

// ---------------------------------------------------------------------------
// Smallest-prime-factor sieve. Shared by coefficient assembly, the von
// Mangoldt table and prime enumeration.
// ---------------------------------------------------------------------------
struct SpfSieve {
    int64_t limit = 0;
    std::vector<uint32_t> spf;     // spf[n] = smallest prime factor, spf[1] = 1
    std::vector<int64_t> primes;

    explicit SpfSieve(int64_t n) : limit(n), spf(static_cast<size_t>(n) + 1, 0) {
        if (n >= 1) spf[1] = 1;
        for (int64_t i = 2; i <= n; ++i) {
            if (spf[i] == 0) {
                spf[i] = static_cast<uint32_t>(i);
                primes.push_back(i);
            }
            for (int64_t p : primes) {
                if (p > spf[i] || i * p > n) break;
                spf[i * p] = static_cast<uint32_t>(p);
            }
        }
    }
};

// ---------------------------------------------------------------------------
// VonMangoldtTable: values[n] = log p if n = p^k, else 0.
// ---------------------------------------------------------------------------
struct VonMangoldtTable {
    int64_t limit = 0;
    std::vector<double> values;

    explicit VonMangoldtTable(const SpfSieve& sieve)
        : limit(sieve.limit), values(static_cast<size_t>(sieve.limit) + 1, 0.0) {
        for (int64_t p : sieve.primes) {
            double lp = std::log(static_cast<double>(p));
            for (int64_t q = p; q <= limit; q *= p) {
                values[q] = lp;
                if (q > limit / p) break;
            }
        }
    }

    double psi() const {
        kahan_sum s;
        for (double v : values) s.add(v);
        return s.value();
    }
};

// ---------------------------------------------------------------------------
// LambdaTable: lambda_f at prime powers n = p^k <= N; zero elsewhere.
// Entries are kept sorted by n for windowed scans.
// ---------------------------------------------------------------------------
class LambdaTable {
  public:
    int64_t max_index = 0;

    LambdaTable() = default;
    LambdaTable(int64_t n, std::vector<std::pair<int64_t, cplx>> entries)
        : max_index(n), entries_(std::move(entries)) {
        std::sort(entries_.begin(), entries_.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [q, v] : entries_) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw precondition_error("LambdaTable: non-finite lambda value");
            if (q < 2 || q > n)
                throw precondition_error("LambdaTable: index out of range");
        }
    }

    // gen(p, k, q = p^k) -> lambda_f(p^k), evaluated at every prime power <= n.
    template <typename Gen>
    static LambdaTable from_generator(int64_t n, const SpfSieve& sieve, Gen&& gen) {
        std::vector<std::pair<int64_t, cplx>> ent;
        for (int64_t p : sieve.primes) {
            if (p > n) break;
            int64_t q = p;
            for (int k = 1; q <= n; ++k) {
                ent.emplace_back(q, gen(p, k, q));
                if (q > n / p) break;
                q *= p;
            }
        }
        return LambdaTable(n, std::move(ent));
    }

    cplx lookup(int64_t n) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), n,
                                   [](const auto& e, int64_t v) { return e.first < v; });
        if (it != entries_.end() && it->first == n) return it->second;
        return cplx(0.0, 0.0);
    }

    const std::vector<std::pair<int64_t, cplx>>& entries() const { return entries_; }

  private:
    std::vector<std::pair<int64_t, cplx>> entries_;  // sorted by index
};

// zeta: lambda = 1 at every prime power.
inline LambdaTable lambda_zeta(int64_t n, const SpfSieve& sieve) {
    return LambdaTable::from_generator(n, sieve, [](int64_t, int, int64_t) { return cplx(1.0); });
}

// k-th divisor function: lambda = k at every prime power.
inline LambdaTable lambda_dk(int64_t n, int k, const SpfSieve& sieve) {
    return LambdaTable::from_generator(
        n, sieve, [k](int64_t, int, int64_t) { return cplx(static_cast<double>(k)); });
}

// Random table with |lambda| <= bound, for property tests and experiments.
inline LambdaTable lambda_random(int64_t n, double bound, uint64_t seed, const SpfSieve& sieve) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mag(0.0, bound);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * PI);
    return LambdaTable::from_generator(n, sieve, [&](int64_t, int, int64_t) {
        return std::polar(mag(rng), ang(rng));
    });
}

// ---------------------------------------------------------------------------
// euler_expand: a(0) = 1, n a(n) = sum_{k=1..n} b(k) a(n-k).
// b is 1-based conceptually; b[0] holds b(1).
// ---------------------------------------------------------------------------
inline std::vector<cplx> euler_expand(const std::vector<cplx>& b, int K) {
    if (K < 0) throw precondition_error("euler_expand: K < 0");
    std::vector<cplx> a(static_cast<size_t>(K) + 1, cplx(0.0));
    a[0] = 1.0;
    for (int n = 1; n <= K; ++n) {
        cplx acc(0.0);
        for (int k = 1; k <= n; ++k) {
            cplx bk = (k <= static_cast<int>(b.size())) ? b[k - 1] : cplx(0.0);
            acc += bk * a[n - k];
        }
        a[n] = acc / static_cast<double>(n);
    }
    return a;
}

// Table with |lambda|^2 at every stored prime power; generates the pointwise
// majorant of |f|^2.
inline LambdaTable majorant_f2(const LambdaTable& lt) {
    std::vector<std::pair<int64_t, cplx>> ent;
    ent.reserve(lt.entries().size());
    for (const auto& [q, v] : lt.entries()) ent.emplace_back(q, cplx(std::norm(v), 0.0));
    return LambdaTable(lt.max_index, std::move(ent));
}

// ---------------------------------------------------------------------------
// CoeffTable: f(n) for n <= N plus prefix sums S(n) and S~(n) = sum f(m) log m.
// ---------------------------------------------------------------------------
class CoeffTable {
  public:
    int64_t limit = 0;
    std::vector<cplx> coeffs;      // [0] unused, coeffs[n] = f(n)
    std::vector<cplx> prefix;      // prefix[n] = S(n), prefix[0] = 0
    std::vector<cplx> log_prefix;  // log_prefix[n] = S~(n)

    CoeffTable() = default;

    // Direct construction from raw coefficients (f[0] ignored). Used by tests
    // exercising linearity of the sum functionals.
    explicit CoeffTable(std::vector<cplx> f) : limit(static_cast<int64_t>(f.size()) - 1),
                                               coeffs(std::move(f)) {
        if (limit < 1) throw precondition_error("CoeffTable: need N >= 1");
        fill_prefixes();
    }

    cplx f(int64_t n) const { return coeffs[static_cast<size_t>(n)]; }

    // S(x) = sum_{n <= x} f(n); zero below 1.
    cplx partial_sum(double x) const {
        if (x < 0.0 || x > static_cast<double>(limit) + 0.5)
            throw precondition_error("partial_sum: x out of table range");
        if (x < 1.0) return cplx(0.0);
        return prefix[static_cast<size_t>(std::floor(x))];
    }

    // S~(x) = sum_{n <= x} f(n) log n.
    cplx log_weighted_sum(double x) const {
        if (x < 0.0 || x > static_cast<double>(limit) + 0.5)
            throw precondition_error("log_weighted_sum: x out of table range");
        if (x < 1.0) return cplx(0.0);
        return log_prefix[static_cast<size_t>(std::floor(x))];
    }

    // sum_{n <= x} f(n) log(x/n) = (log x) S(x) - S~(x); equals the exact value
    // of the integral of S(t) dt/t over [1, x].
    cplx log_ratio_sum(double x) const {
        if (x < 1.0) return cplx(0.0);
        return std::log(x) * partial_sum(x) - log_weighted_sum(x);
    }

    void fill_prefixes() {
        size_t n = coeffs.size();
        prefix.assign(n, cplx(0.0));
        log_prefix.assign(n, cplx(0.0));
        for (size_t i = 1; i < n; ++i) {
            prefix[i] = prefix[i - 1] + coeffs[i];
            log_prefix[i] = log_prefix[i - 1] + coeffs[i] * std::log(static_cast<double>(i));
        }
    }
};

// ---------------------------------------------------------------------------
// build_coefficients: local factors via euler_expand on b(k) = lambda_f(p^k),
// assembled multiplicatively along smallest-prime-factor factorizations.
// ---------------------------------------------------------------------------
inline CoeffTable build_coefficients(const LambdaTable& lt, int64_t N, const SpfSieve& sieve) {
    if (N < 1) throw precondition_error("build_coefficients: N < 1");
    if (N > lt.max_index) throw precondition_error("build_coefficients: N exceeds lambda table");
    if (N > sieve.limit) throw precondition_error("build_coefficients: N exceeds sieve");

    // Local expansions f(p^j) for p <= sqrt(N); larger primes only ever appear
    // to the first power, where f(p) = lambda_f(p).
    std::map<int64_t, std::vector<cplx>> local;
    for (int64_t p : sieve.primes) {
        if (p > N / p) break;
        std::vector<cplx> b;
        int64_t q = p;
        int K = 0;
        while (q <= N) {
            b.push_back(lt.lookup(q));
            ++K;
            if (q > N / p) break;
            q *= p;
        }
        local[p] = euler_expand(b, K);
    }

    CoeffTable ct;
    ct.limit = N;
    ct.coeffs.assign(static_cast<size_t>(N) + 1, cplx(0.0));
    ct.coeffs[1] = 1.0;
    for (int64_t n = 2; n <= N; ++n) {
        int64_t p = sieve.spf[n];
        int64_t m = n;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        cplx fp;
        if (e == 1 && p * p > N) {
            fp = lt.lookup(p);
        } else {
            fp = local[p][static_cast<size_t>(e)];
        }
        ct.coeffs[n] = fp * ct.coeffs[m];
    }
    ct.fill_prefixes();
    return ct;
}

// ---------------------------------------------------------------------------
// chebyshev_identity_residual: |(log x) S(x) - sum_{d<=x} Lambda_f(d) S(x/d)
//                               - sum_{n<=x} f(n) log(x/n)|.
// The d-sum runs over stored prime powers; the trailing sum is evaluated in
// closed form from the prefix arrays, so the two sides share no computation
// beyond the table itself.
// ---------------------------------------------------------------------------
inline double chebyshev_identity_residual(const CoeffTable& ct, const LambdaTable& lt,
                                           const VonMangoldtTable& vt, double x) {
    if (x < 2.0 || x > static_cast<double>(ct.limit))
        throw precondition_error("chebyshev_identity_residual: x out of range");
    cplx lhs = std::log(x) * ct.partial_sum(x);
    cplx dsum(0.0);
    for (const auto& [q, lam] : lt.entries()) {
        if (static_cast<double>(q) > x) break;
        dsum += lam * vt.values[static_cast<size_t>(q)] * ct.partial_sum(x / static_cast<double>(q));
    }
    cplx rhs = dsum + ct.log_ratio_sum(x);
    return std::abs(lhs - rhs);
}

}  // namespace weaksub
