// Acceptance suite: end-to-end checks of the exact identities, domination
// properties, quadrature oracles, frequency selection, window verifier,
// integer bounds and the central-value family report. One line per criterion;
// exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "weaksub/contour.hpp"
#include "weaksub/lfun.hpp"
#include "weaksub/oscillation.hpp"
#include "weaksub/tauselect.hpp"

using namespace weaksub;

namespace {

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void report(int idx, bool pass, const std::string& what, double secs) {
    std::printf("criterion %2d: %s  %s  [%.1fs]\n", idx, pass ? "PASS" : "FAIL", what.c_str(),
                secs);
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. exact identities over randomized configurations
// ---------------------------------------------------------------------------
void criterion1() {
    Timer timer;
    const int64_t N = 10000;
    SpfSieve sieve(N);
    VonMangoldtTable vt(sieve);

    struct Family {
        LambdaTable lt;
        CoeffTable ct;
    };
    std::vector<Family> fams;
    fams.push_back({lambda_zeta(N, sieve), {}});
    fams.push_back({lambda_dk(N, 2, sieve), {}});
    fams.push_back({lambda_dk(N, 3, sieve), {}});
    LInstance sym2 = make_sym2_delta(N, sieve);
    fams.push_back({sym2.lambda_table, {}});
    fams.push_back({lambda_random(N, 3.0, 424242, sieve), {}});
    for (auto& f : fams) f.ct = build_coefficients(f.lt, N, sieve);

    std::mt19937_64 rng(20240901);
    std::uniform_real_distribution<double> xpick(100.0, 10000.0);
    std::uniform_real_distribution<double> tau(-5.0, 5.0);
    std::uniform_real_distribution<double> wpick(1.0, 4.0);
    std::uniform_int_distribution<int> Rpick(1, 3), lpick(0, 3), fpick(0, 4);

    int configs = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 220; ++trial) {
        const Family& f = fams[static_cast<size_t>(fpick(rng))];
        double x = xpick(rng);
        int R = Rpick(rng);
        std::vector<int> ell(static_cast<size_t>(R));
        std::vector<double> taus(static_cast<size_t>(R));
        for (int r = 0; r < R; ++r) {
            ell[static_cast<size_t>(r)] = lpick(rng);
            taus[static_cast<size_t>(r)] = tau(rng);
        }
        double w = wpick(rng);
        OscillationSpec spec(ell, w, taus, f.ct);

        double cheb = chebyshev_identity_residual(f.ct, f.lt, vt, x);
        double cheb_scale = std::abs(std::log(x) * f.ct.partial_sum(x)) +
                            std::abs(f.ct.log_ratio_sum(x)) + 1.0;
        double r61 = logx_recursion_residual(spec, f.lt, vt, x);
        double r64 = log_decomposition_residual(spec, x);
        double scale = std::abs(std::log(x) * oscillation(spec, x)) +
                       std::abs(oscillation_tilde(spec, x)) +
                       std::abs(oscillation_log_integral(spec, x)) + 1.0;
        worst = std::max({worst, cheb / cheb_scale, r61 / scale, r64 / scale});
        ++configs;
    }
    bool pass = worst <= 1e-8 && configs >= 200 && timer.seconds() < 120.0;
    report(1, pass,
           "exact identities, " + std::to_string(configs) +
               " configs, worst relative residual " + fmt(worst),
           timer.seconds());
}

// ---------------------------------------------------------------------------
// 2. exponential-expansion domination and the |f|^2 majorant
// ---------------------------------------------------------------------------
void criterion2() {
    Timer timer;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> mag(0.0, 5.0), ang(0.0, 2.0 * PI);
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
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
            if (std::abs(a[n]) > A1[n].real() * (1.0 + 1e-11) + 1e-12) ++violations;
            if (std::norm(a[n]) > A2[n].real() * (1.0 + 1e-11) + 1e-12) ++violations;
        }
    }

    SpfSieve sieve(10000);
    for (int t = 0; t < 20; ++t) {
        auto lt = lambda_random(10000, 3.0, 9000 + t, sieve);
        auto ct = build_coefficients(lt, 10000, sieve);
        auto f2 = build_coefficients(majorant_f2(lt), 10000, sieve);
        for (int64_t n = 1; n <= 10000; ++n)
            if (std::norm(ct.f(n)) > f2.f(n).real() * (1.0 + 1e-11) + 1e-11) ++violations;
    }
    report(2, violations == 0,
           "domination A1 >= |a|, A2 >= |a|^2 and |f|^2 <= f2, violations " +
               std::to_string(violations),
           timer.seconds());
}

// ---------------------------------------------------------------------------
// 3. smoothed Perron sum against the direct weighted sum
// ---------------------------------------------------------------------------
void criterion3() {
    Timer timer;
    double worst_rel = 0.0;
    bool ok = true;
    for (int fam = 0; fam < 2; ++fam) {
        for (double x : {100.5, 1000.5}) {
            int64_t N = static_cast<int64_t>(x) + 10;
            SpfSieve sieve(N);
            VonMangoldtTable vt(sieve);
            LambdaTable lt = fam == 0 ? lambda_zeta(N, sieve) : lambda_dk(N, 2, sieve);
            CoeffTable ct = build_coefficients(lt, N, sieve);
            SeriesEvaluator ev(ct, lt, vt, 0.5 / std::log(x));
            for (int kcase = 0; kcase < 2; ++kcase) {
                KernelSpec ks =
                    kcase == 0 ? KernelSpec{1e-3, 3} : kernel_preset(fam == 0 ? 1 : 2, x, 1.0);
                cplx direct = perron_direct_sum(ct, x, ks);
                LineIntegrator li;
                li.tolerance = 0.5e-4 * std::abs(direct);
                li.height_cut = 5e5;
                cplx integral = smoothed_perron_sum(ev, x, ks, li);
                double rel = std::abs(integral - direct) / std::abs(direct);
                worst_rel = std::max(worst_rel, rel);
                if (rel > 1e-4) ok = false;
            }
        }
    }
    bool pass = ok && timer.seconds() < 60.0;
    report(3, pass, "Perron oracle equivalence, worst relative gap " + fmt(worst_rel),
           timer.seconds());
}

// ---------------------------------------------------------------------------
// 4. divisor-combination cancellation at x = 10^6 and decay to 4*10^6
// ---------------------------------------------------------------------------
void criterion4() {
    Timer timer;
    const int64_t N = 4000000;
    SpfSieve sieve(N);
    CoeffTable d2 = build_coefficients(lambda_dk(N, 2, sieve), N, sieve);

    double x = 1.0e6, w = 10.0;
    cplx comb = divisor_mean_combination(d2, 2, x, w);
    double peak = 0.0;
    for (int j = 0; j <= 2; ++j) {
        double y = x / std::pow(w, j);
        peak = std::max(peak, std::abs(d2.partial_sum(y)) / y);
    }
    cplx comb4 = divisor_mean_combination(d2, 2, 4.0 * x, w);

    // informational: the k = 3 error term oscillates and happens to grow over
    // this particular x pair (verified against a hyperbola-method oracle)
    CoeffTable d3 = build_coefficients(lambda_dk(N, 3, sieve), N, sieve);
    double k3 = std::abs(divisor_mean_combination(d3, 3, x, 5.0));
    double k3b = std::abs(divisor_mean_combination(d3, 3, 4.0 * x, 5.0));

    bool pass = std::abs(comb) <= 1e-2 * peak && std::abs(comb4) < std::abs(comb) &&
                timer.seconds() < 60.0;
    report(4, pass,
           "combination " + fmt(std::abs(comb)) + " <= " + fmt(1e-2 * peak) + ", at 4x " +
               fmt(std::abs(comb4)) + " (k=3 info: " + fmt(k3) + " -> " + fmt(k3b) + ")",
           timer.seconds());
}

// ---------------------------------------------------------------------------
// 5. pole-cancelling integral vs the oscillation functional, line shifts
// ---------------------------------------------------------------------------
void criterion5() {
    Timer timer;
    const double x = 1.0e4, w = 3.0;
    SpfSieve sieve(10000);
    LInstance d2 = make_zeta_shift_product({0.0}, {2}, 10000, sieve);
    OscillationSpec spec({2}, w, {0.0}, d2.coeffs);
    cplx oracle = oscillation(spec, x) / x;

    LineIntegrator li;
    li.tolerance = 2e-6;
    cplx got = zeta_product_line_integral({0.0}, {2}, w, x, li);
    double gap = std::abs(got - oracle);

    LineIntegrator li2;
    li2.abscissa = 1.0 + 1.0 / std::log(x) + 0.1;
    li2.tolerance = 2e-6;
    cplx shifted = zeta_product_line_integral({0.0}, {2}, w, x, li2);
    double shift_gap = std::abs(got - shifted);

    bool pass = gap <= 1e-4 && shift_gap <= 1e-5;
    report(5, pass,
           "integral-oracle gap " + fmt(gap) + ", contour shift gap " + fmt(shift_gap),
           timer.seconds());
}

// ---------------------------------------------------------------------------
// 6. successive maxima: planted frequency and well-spacing
// ---------------------------------------------------------------------------
void criterion6() {
    Timer timer;
    SpfSieve sieve(100000);
    VonMangoldtTable vt(sieve);
    LInstance planted = make_zeta_shift_product({5.0}, {1}, 100000, sieve);
    double X = 1.0e6;
    SeriesEvaluator ev(planted.coeffs, planted.lambda_table, vt, 0.5 / std::log(X),
                       TailPolicy{TailPolicy::Mode::none, 1});
    double delta = 1.0 / std::log(X);
    double step = delta / 10.0;
    auto res = successive_maxima(ev, X, 1, step, 8.0);
    double err = std::abs(res.taus.taus[0] - 5.0);

    SpfSieve small(3000);
    VonMangoldtTable vts(small);
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> Xpick(12.0, 2000.0);
    int spacing_ok = 0;
    for (int trial = 0; trial < 50; ++trial) {
        auto lt = lambda_random(3000, 3.0, 5000 + trial, small);
        auto ct = build_coefficients(lt, 3000, small);
        double Xr = Xpick(rng);
        int R = 2 + trial % 2;
        SeriesEvaluator evr(ct, lt, vts, 0.4 / std::log(Xr), TailPolicy{TailPolicy::Mode::none, 1});
        double dr = std::pow(std::log(Xr), -1.0 / R);
        auto rr = successive_maxima(evr, Xr, R, dr / 10.0, 5.0);
        bool ok = true;
        for (int j = 0; j < R; ++j)
            for (int k = j + 1; k < R; ++k)
                if (std::abs(rr.taus.taus[j] - rr.taus.taus[k]) < dr) ok = false;
        if (ok) ++spacing_ok;
    }
    bool pass = err <= step && spacing_ok == 50;
    report(6, pass,
           "tau recovery error " + fmt(err) + " (step " + fmt(step) + "), spacing ok " +
               std::to_string(spacing_ok) + "/50",
           timer.seconds());
}

// ---------------------------------------------------------------------------
// 7. weak-Ramanujan verifier: sym^2 at A = 3, divisor-family table identity
// ---------------------------------------------------------------------------
void criterion7() {
    Timer timer;
    const int64_t N = 100000;
    SpfSieve sieve(N);
    VonMangoldtTable vt(sieve);
    LInstance sym2 = make_sym2_delta(N, sieve);
    auto grid = eadic_grid(N);
    WRReport fit = weak_ramanujan_verify(sym2.lambda_table, vt, grid, 100.0, {{3.0, 100.0}});
    WRReport asserted =
        weak_ramanujan_verify(sym2.lambda_table, vt, grid, 100.0, {{3.0, fit.fitted_A0}});
    bool sym_ok = asserted.max_violation == 0.0;

    auto zl = lambda_zeta(N, sieve);
    WRReport rz = weak_ramanujan_verify(zl, vt, grid, 2.0);
    bool dk_ok = true;
    for (int k : {2, 4}) {  // power-of-two scalings are exact in binary
        auto dk = lambda_dk(N, k, sieve);
        double k2 = static_cast<double>(k * k);
        WRReport rk = weak_ramanujan_verify(dk, vt, grid, k2 * 2.0);
        for (size_t i = 0; i < grid.size(); ++i)
            if (rk.windows[i].sum != k2 * rz.windows[i].sum) dk_ok = false;
        if (rk.fitted_A2 != k2 * rz.fitted_A2) dk_ok = false;
    }
    auto d3 = lambda_dk(N, 3, sieve);
    WRReport r3 = weak_ramanujan_verify(d3, vt, grid, 9.0 * 2.0);
    for (size_t i = 0; i < grid.size(); ++i)
        if (std::abs(r3.windows[i].sum - 9.0 * rz.windows[i].sum) >
            1e-13 * (1.0 + 9.0 * rz.windows[i].sum))
            dk_ok = false;

    bool pass = sym_ok && dk_ok;
    report(7, pass,
           "sym^2 (A,A0)=(3," + fmt(fit.fitted_A0) + ") violations " +
               fmt(asserted.max_violation) + ", d_k identity " + (dk_ok ? "exact" : "BROKEN"),
           timer.seconds());
}

// ---------------------------------------------------------------------------
// 8. central values: Hurwitz oracle, line invariance, unimodular kappa
// ---------------------------------------------------------------------------
namespace hurwitz {
// test-side Euler-Maclaurin Hurwitz zeta (independent of the library zeta)
cplx zeta(cplx s, double a) {
    const int M = 60 + static_cast<int>(4.0 * std::abs(s.imag()));
    cplx acc(0.0);
    for (int n = 0; n < M; ++n) acc += std::exp(-s * std::log(n + a));
    const double T = M + a;
    cplx tpow = std::exp(-s * std::log(T));
    acc += tpow * T / (s - 1.0) + 0.5 * tpow;
    static const double bern[8] = {1.0 / 6,  -1.0 / 30,     1.0 / 42, -1.0 / 30,
                                   5.0 / 66, -691.0 / 2730, 7.0 / 6,  -3617.0 / 510};
    cplx deriv = s;
    cplx scale = tpow / T;
    double fact = 2.0;
    for (int k = 1; k <= 8; ++k) {
        acc += bern[k - 1] / fact * deriv * scale;
        deriv *= (s + cplx(2.0 * k - 1.0)) * (s + cplx(2.0 * k));
        scale /= T * T;
        fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    }
    return acc;
}
}  // namespace hurwitz

void criterion8() {
    Timer timer;
    SpfSieve sieve(20000);
    LInstance chi3 = make_dirichlet(3, 1, 20000, sieve);
    cplx L = afe_central_value(chi3, 1.0);
    cplx oracle =
        (hurwitz::zeta(cplx(0.5), 1.0 / 3.0) - hurwitz::zeta(cplx(0.5), 2.0 / 3.0)) /
        std::sqrt(3.0);
    double gap = std::abs(L - oracle);

    cplx La = afe_central_value(chi3, 0.75);
    cplx Lc = afe_central_value(chi3, 1.25);
    double inv = std::max(std::abs(La - L), std::abs(Lc - L));

    double kappa_worst = 0.0;
    for (int64_t q = 3; q <= 100; ++q) {
        if (q % 4 == 2) continue;
        DirichletGroup G(q);
        for (int64_t idx : primitive_indices(G)) {
            LInstance li = make_dirichlet(q, idx, 1200, sieve);
            kappa_worst = std::max(kappa_worst, std::abs(std::abs(li.root_number) - 1.0));
        }
    }
    bool pass = gap <= 1e-6 && inv <= 1e-8 && kappa_worst <= 1e-12;
    report(8, pass,
           "Hurwitz gap " + fmt(gap) + ", line invariance " + fmt(inv) + ", worst ||kappa|-1| " +
               fmt(kappa_worst),
           timer.seconds());
}

// ---------------------------------------------------------------------------
// 9. exact Deligne bound for p <= 10^5 and the log-derivative recursion oracle
// ---------------------------------------------------------------------------
void criterion9() {
    Timer timer;
    const int64_t N = 100000;
    auto tau = ramanujan_tau_table(N);
    SpfSieve sieve(N);
    int bad = 0;
    for (int64_t p : sieve.primes)
        if (!deligne_bound_holds(p, tau[static_cast<size_t>(p - 1)])) ++bad;

    // independent oracle: n p(n) = -24 sum_{k<=n} sigma(k) p(n-k)
    std::vector<long long> sig(40, 0), p(40, 0);
    for (int n = 1; n < 40; ++n)
        for (int d = 1; d <= n; ++d)
            if (n % d == 0) sig[static_cast<size_t>(n)] += d;
    p[0] = 1;
    bool rec_ok = true;
    for (int n = 1; n < 40; ++n) {
        long long acc = 0;
        for (int k = 1; k <= n; ++k) acc += sig[static_cast<size_t>(k)] * p[static_cast<size_t>(n - k)];
        if ((-24 * acc) % n != 0) rec_ok = false;
        p[static_cast<size_t>(n)] = -24 * acc / n;
        if (p[static_cast<size_t>(n)] != static_cast<long long>(tau[static_cast<size_t>(n)]))
            rec_ok = false;
    }
    rec_ok = rec_ok && static_cast<long long>(tau[1]) == -24 &&
             static_cast<long long>(tau[2]) == 252;
    bool pass = bad == 0 && rec_ok;
    report(9, pass,
           "Deligne violations " + std::to_string(bad) + "/" +
               std::to_string(sieve.primes.size()) + ", recursion oracle " +
               (rec_ok ? "agrees" : "DISAGREES"),
           timer.seconds());
}

// ---------------------------------------------------------------------------
// 10. weak-subconvexity family report over all primitive characters q <= 200
// ---------------------------------------------------------------------------
void criterion10() {
    Timer timer;
    SpfSieve sieve(2000);
    std::vector<LInstance> family;
    for (int64_t q = 3; q <= 200; ++q) {
        if (q % 4 == 2) continue;
        DirichletGroup G(q);
        for (int64_t idx : primitive_indices(G))
            family.push_back(make_dirichlet(q, idx, 1500, sieve));
    }
    std::vector<const LInstance*> ptrs;
    for (const auto& li : family) ptrs.push_back(&li);

    SubconvexityReport r1 = weak_subconvexity_report(ptrs, 0.5);
    SubconvexityReport r2 = weak_subconvexity_report(ptrs, 0.5);
    double drift = std::abs(r1.sup_rho - r2.sup_rho);
    bool pass = std::isfinite(r1.sup_rho) && r1.sup_rho > 0.0 && drift <= 1e-6 &&
                r1.rows.size() == family.size() && timer.seconds() < 300.0;
    report(10, pass,
           "family size " + std::to_string(r1.rows.size()) + ", sup rho " + fmt(r1.sup_rho) +
               " at " + r1.argmax_label + ", rerun drift " + fmt(drift),
           timer.seconds());
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    std::printf("%s (%d/10 criteria)\n", failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                10 - failures);
    return failures;
}
