#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "weaksub/coeffs.hpp"

using namespace weaksub;

TEST_CASE("euler_expand reproduces the geometric case b(k)=1") {
    std::vector<cplx> b(30, cplx(1.0));
    auto a = euler_expand(b, 30);
    for (int n = 0; n <= 30; ++n) REQUIRE(std::abs(a[n] - cplx(1.0)) < 1e-12);
}

TEST_CASE("euler_expand with b(1)=2 only gives 2^n/n!") {
    std::vector<cplx> b = {cplx(2.0)};
    auto a = euler_expand(b, 12);
    double expect = 1.0;
    for (int n = 0; n <= 12; ++n) {
        REQUIRE(std::abs(a[n] - expect) < 1e-12 * expect);
        expect *= 2.0 / (n + 1);
    }
}

TEST_CASE("euler_expand with b(k)=2 counts divisors of p^j") {
    std::vector<cplx> b(16, cplx(2.0));
    auto a = euler_expand(b, 16);
    for (int j = 0; j <= 16; ++j) {
        int64_t dk = oracles::divisor_dk(static_cast<int64_t>(1) << j, 2);  // d_2(2^j)
        REQUIRE(std::abs(a[j] - static_cast<double>(dk)) < 1e-10);
    }
}

TEST_CASE("euler_expand rejects K < 0") {
    REQUIRE_THROWS_AS(euler_expand({}, -1), precondition_error);
}

TEST_CASE("majorant table squares the lambda values and dominates |f|^2") {
    SpfSieve sieve(10000);

    SECTION("zeta: identity case") {
        auto lt = lambda_zeta(1000, sieve);
        auto m = majorant_f2(lt);
        auto f2 = build_coefficients(m, 1000, sieve);
        for (int64_t n = 1; n <= 1000; ++n)
            REQUIRE(std::abs(f2.f(n) - cplx(1.0)) < 1e-12);
    }

    SECTION("d_2: f2(4) from the b=4 expansion dominates d_2(4)^2 = 9") {
        auto lt = lambda_dk(100, 2, sieve);
        auto m = majorant_f2(lt);
        REQUIRE(std::abs(m.lookup(4) - cplx(4.0)) < 1e-14);
        std::vector<cplx> b(8, cplx(4.0));
        auto a = euler_expand(b, 8);
        auto f2 = build_coefficients(m, 100, sieve);
        REQUIRE(std::abs(f2.f(4) - a[2]) < 1e-12);
        REQUIRE(f2.f(4).real() >= 9.0);
        REQUIRE(std::abs(f2.f(4) - cplx(10.0)) < 1e-12);
    }

    SECTION("random bounded lambda: |f(n)|^2 <= f2(n) for all n <= 10^4") {
        for (uint64_t seed : {11u, 22u, 33u}) {
            auto lt = lambda_random(10000, 3.0, seed, sieve);
            auto ct = build_coefficients(lt, 10000, sieve);
            auto f2 = build_coefficients(majorant_f2(lt), 10000, sieve);
            for (int64_t n = 1; n <= 10000; ++n) {
                REQUIRE(std::abs(f2.f(n).imag()) < 1e-9 * (1.0 + std::abs(f2.f(n))));
                REQUIRE(std::norm(ct.f(n)) <= f2.f(n).real() * (1.0 + 1e-11) + 1e-11);
            }
        }
    }
}

TEST_CASE("build_coefficients: named families") {
    SpfSieve sieve(1000);

    SECTION("zeta family is constant 1") {
        auto ct = build_coefficients(lambda_zeta(1000, sieve), 1000, sieve);
        REQUIRE(std::abs(ct.partial_sum(10.0) - cplx(10.0)) < 1e-12);
        for (int64_t n = 1; n <= 1000; ++n) REQUIRE(std::abs(ct.f(n) - cplx(1.0)) < 1e-12);
    }

    SECTION("d_2 matches divisor enumeration") {
        auto ct = build_coefficients(lambda_dk(1000, 2, sieve), 1000, sieve);
        REQUIRE(std::abs(ct.f(12) - cplx(6.0)) < 1e-12);
        for (int64_t n : {1, 2, 36, 97, 360, 720, 991})
            REQUIRE(std::abs(ct.f(n) - static_cast<double>(oracles::divisor_dk(n, 2))) < 1e-9);
        REQUIRE(std::abs(ct.partial_sum(100.0) -
                         static_cast<double>(oracles::divisor_sum_d2(100))) < 1e-9);
        REQUIRE(std::abs(ct.partial_sum(100.0) - cplx(482.0)) < 1e-9);
    }

    SECTION("degree-2 Hecke relation f(4) = lambda(2)^2 - 1") {
        auto tau_c = oracles::naive_eta24(12);
        auto tau = [&](int64_t n) { return static_cast<double>(tau_c[n - 1]); };
        REQUIRE(tau(2) == -24.0);
        // v_k = alpha^k + beta^k with alpha beta = 1, alpha + beta = tau(p)/p^{11/2}
        auto lt = LambdaTable::from_generator(100, sieve, [&](int64_t p, int k, int64_t) {
            double lam = (p <= 12) ? tau(p) / std::pow(static_cast<double>(p), 5.5) : 0.0;
            double vm = 2.0, v = lam;
            for (int i = 1; i < k; ++i) {
                double vn = lam * v - vm;
                vm = v;
                v = vn;
            }
            return cplx(v, 0.0);
        });
        auto ct = build_coefficients(lt, 100, sieve);
        double lam2 = tau(2) / std::pow(2.0, 5.5);
        REQUIRE(std::abs(ct.f(4) - cplx(lam2 * lam2 - 1.0)) < 1e-12);
    }

    SECTION("rejects N < 1") {
        REQUIRE_THROWS_AS(build_coefficients(lambda_zeta(10, sieve), 0, sieve),
                          precondition_error);
    }
}

TEST_CASE("partial sums and log-weighted sums") {
    SpfSieve sieve(1000);
    auto zt = build_coefficients(lambda_zeta(1000, sieve), 1000, sieve);
    auto d2 = build_coefficients(lambda_dk(1000, 2, sieve), 1000, sieve);

    REQUIRE(std::abs(zt.partial_sum(10.7) - cplx(10.0)) < 1e-12);
    REQUIRE(std::abs(zt.partial_sum(0.5)) == 0.0);
    REQUIRE_THROWS_AS(zt.partial_sum(5000.0), precondition_error);
    REQUIRE_THROWS_AS(zt.partial_sum(-1.0), precondition_error);

    // log(10!) by direct summation
    double log_fact = 0.0;
    for (int n = 2; n <= 10; ++n) log_fact += std::log(static_cast<double>(n));
    REQUIRE(std::abs(zt.log_weighted_sum(10.0) - log_fact) < 1e-12);
    REQUIRE(std::abs(zt.log_weighted_sum(1.5)) == 0.0);

    double brute = 0.0;
    for (int64_t n = 2; n <= 50; ++n)
        brute += static_cast<double>(oracles::divisor_dk(n, 2)) * std::log(static_cast<double>(n));
    REQUIRE(std::abs(d2.log_weighted_sum(50.0) - brute) < 1e-9);
}

TEST_CASE("prefix arrays advance by exactly the stored coefficient") {
    SpfSieve sieve(5000);
    auto lt = lambda_random(5000, 3.0, 41, sieve);
    auto ct = build_coefficients(lt, 5000, sieve);
    for (int64_t n = 1; n <= 5000; ++n) {
        REQUIRE(ct.prefix[static_cast<size_t>(n)] ==
                ct.prefix[static_cast<size_t>(n - 1)] + ct.coeffs[static_cast<size_t>(n)]);
    }
}

TEST_CASE("multiplicativity on random coprime pairs") {
    SpfSieve sieve(100000);
    for (uint64_t seed : {7u, 8u}) {
        auto lt = lambda_random(100000, 3.0, seed, sieve);
        auto ct = build_coefficients(lt, 100000, sieve);
        std::mt19937_64 rng(seed * 97);
        std::uniform_int_distribution<int64_t> pick(2, 310);
        int checked = 0;
        while (checked < 300) {
            int64_t m = pick(rng), n = pick(rng);
            if (std::gcd(m, n) != 1 || m * n > 100000) continue;
            cplx lhs = ct.f(m * n), rhs = ct.f(m) * ct.f(n);
            REQUIRE(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(rhs)));
            ++checked;
        }
    }
}

TEST_CASE("exponential-expansion domination: A1 >= |a|, A2 >= |a|^2") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> mag(0.0, 5.0), ang(0.0, 2.0 * PI);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<cplx> b(50), b1(50), b2(50);
        for (int k = 0; k < 50; ++k) {
            b[k] = std::polar(mag(rng), ang(rng));
            b1[k] = std::abs(b[k]);
            b2[k] = std::norm(b[k]);
        }
        auto a = euler_expand(b, 50);
        auto A1 = euler_expand(b1, 50);
        auto A2 = euler_expand(b2, 50);
        for (int n = 0; n <= 50; ++n) {
            REQUIRE(A1[n].real() * (1.0 + 1e-11) + 1e-12 >= std::abs(a[n]));
            REQUIRE(A2[n].real() * (1.0 + 1e-11) + 1e-12 >= std::norm(a[n]));
        }
    }
}

TEST_CASE("chebyshev identity residual is rounding-level") {
    SpfSieve sieve(10000);
    VonMangoldtTable vt(sieve);

    auto zt = build_coefficients(lambda_zeta(10000, sieve), 10000, sieve);
    auto zl = lambda_zeta(10000, sieve);
    double r = chebyshev_identity_residual(zt, zl, vt, 100.0);
    REQUIRE(r <= 1e-9 * std::abs(std::log(100.0) * zt.partial_sum(100.0)));

    auto d2l = lambda_dk(10000, 2, sieve);
    auto d2 = build_coefficients(d2l, 10000, sieve);
    double r2 = chebyshev_identity_residual(d2, d2l, vt, 1000.0);
    REQUIRE(r2 <= 1e-9 * std::abs(std::log(1000.0) * d2.partial_sum(1000.0)));

    auto rl = lambda_random(10000, 3.0, 5, sieve);
    auto rt = build_coefficients(rl, 10000, sieve);
    double scale = std::abs(std::log(10000.0) * rt.partial_sum(10000.0)) + 1.0;
    REQUIRE(chebyshev_identity_residual(rt, rl, vt, 10000.0) <= 1e-8 * scale);
}

TEST_CASE("von Mangoldt table: psi(N) tracks N") {
    for (int64_t N : {static_cast<int64_t>(10000), static_cast<int64_t>(100000)}) {
        SpfSieve sieve(N);
        VonMangoldtTable vt(sieve);
        REQUIRE(std::abs(vt.psi() - static_cast<double>(N)) < 0.05 * static_cast<double>(N));
    }
}

TEST_CASE("lambda tables live on prime powers only") {
    SpfSieve sieve(500);
    auto lt = lambda_dk(500, 3, sieve);
    REQUIRE(std::abs(lt.lookup(6)) == 0.0);    // 6 = 2*3
    REQUIRE(std::abs(lt.lookup(12)) == 0.0);
    REQUIRE(std::abs(lt.lookup(8) - cplx(3.0)) < 1e-14);
    REQUIRE(std::abs(lt.lookup(499) - cplx(3.0)) < 1e-14);  // 499 prime
    REQUIRE_THROWS_AS(LambdaTable(10, {{4, cplx(std::numeric_limits<double>::infinity())}}),
                      precondition_error);
}

TEST_CASE("divisor families stay under the desk growth envelope") {
    SpfSieve sieve(1000000);
    for (int k = 2; k <= 4; ++k) {
        auto ct = build_coefficients(lambda_dk(1000000, k, sieve), 1000000, sieve);
        double abs_sum = 0.0;
        int64_t n = 1;
        for (double x = 100.0; x <= 1.0e6; x *= 10.0) {
            for (; n <= static_cast<int64_t>(x); ++n) abs_sum += std::abs(ct.f(n));
            double ratio = abs_sum / (x * std::pow(std::log(x), k));
            INFO("k=" << k << " x=" << x << " ratio=" << ratio);
            REQUIRE(ratio <= 5.0);
        }
    }
}
