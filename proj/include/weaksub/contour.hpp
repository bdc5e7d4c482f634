#pragma once

// Vertical-line contour integration: the smoothed Perron kernel
// ((e^{lambda s}-1)/(lambda s))^K, its exact Irwin-Hall cutoff weight, the
// smoothed Perron coefficient sum, and the pole-cancelling zeta-product
// integral behind the divisor-twist oscillation identity.

#include <algorithm>
#include <cmath>
#include <vector>

#include "weaksub/oscillation.hpp"
#include "weaksub/series.hpp"

namespace weaksub {

struct KernelSpec {
    double lambda = 1e-3;
    int K = 3;

    void validate() const {
        if (lambda <= 0.0 || K < 1) throw precondition_error("KernelSpec: need lambda > 0, K >= 1");
        if (lambda * K >= 1.0)
            throw precondition_error("KernelSpec: lambda*K >= 1 leaves the desk regime");
    }
};

// Preset used in the truncated-sum estimate: K = [m/4] + 3, lambda = (log x)^{-2-A^2}.
inline KernelSpec kernel_preset(int degree_m, double x, double A) {
    KernelSpec ks;
    ks.K = degree_m / 4 + 3;
    ks.lambda = std::pow(std::log(x), -2.0 - A * A);
    ks.validate();
    return ks;
}

// Exact piecewise weight: 1 for y >= 1, 0 for y < e^{-lambda K}, and in
// between the Irwin-Hall volume P(x_1 + ... + x_K >= -log y), x_i uniform on
// [0, lambda]. Alternating binomial terms are compensated-summed; they lose
// digits near the knots otherwise.
inline double kernel_weight(double y, const KernelSpec& ks) {
    ks.validate();
    if (y <= 0.0) throw precondition_error("kernel_weight: y <= 0");
    if (y >= 1.0) return 1.0;
    const double u = -std::log(y) / ks.lambda;  // in units of lambda
    if (u >= static_cast<double>(ks.K)) return 0.0;
    // F_K(u) = (1/K!) sum_{i <= floor(u)} (-1)^i binom(K,i) (u-i)^K
    kahan_sum cdf;
    double fact = 1.0;
    for (int i = 2; i <= ks.K; ++i) fact *= i;
    for (int i = 0; i <= static_cast<int>(std::floor(u)); ++i) {
        double sign = (i % 2 == 0) ? 1.0 : -1.0;
        cdf.add(sign * binomial(ks.K, i) * std::pow(u - i, ks.K) / fact);
    }
    return std::clamp(1.0 - cdf.value(), 0.0, 1.0);
}

struct LineIntegrator {
    double abscissa = 0.0;      // 0 leaves the default to each operation
    double height_cut = 2e5;    // hard ceiling on the integration height
    double tolerance = 1e-6;    // absolute target for the quadrature
    int max_refine = 3;         // Simpson halvings before giving up

    // optional decimated trace of (Im s, |integrand|) samples
    mutable std::vector<std::pair<double, double>>* trace = nullptr;
};

namespace detail {

// Composite Simpson over a symmetric uniform grid given integrand values.
inline cplx simpson(const std::vector<cplx>& v, double h) {
    const size_t n = v.size();  // odd count
    cplx acc = v[0] + v[n - 1];
    for (size_t i = 1; i + 1 < n; ++i) acc += v[i] * ((i % 2 == 1) ? 4.0 : 2.0);
    return acc * (h / 3.0);
}

inline void dump_trace(const LineIntegrator& li, const std::vector<cplx>& vals, double t0,
                       double step) {
    if (!li.trace || !li.trace->empty()) return;  // first resolution only
    size_t stride = std::max<size_t>(1, vals.size() / 2000);
    for (size_t i = 0; i < vals.size(); i += stride)
        li.trace->emplace_back(t0 + step * static_cast<double>(i), std::abs(vals[i]));
}

}  // namespace detail

// Complex exponential integral E1(z), principal branch. Power series in long
// double up to |z| = 30 (the alternating terms peak near e^{|z|}, long double
// keeps ~1e-10 absolute there), optimally-truncated asymptotic e^{-z}/z
// sum k!/(-z)^k beyond.
inline cplx exp_integral_e1(cplx z) {
    if (z == cplx(0.0)) throw precondition_error("exp_integral_e1: z = 0");
    if (std::abs(z) <= 30.0) {
        std::complex<long double> zl(z.real(), z.imag());
        std::complex<long double> term(1.0L), sum(0.0L);
        for (int k = 1; k <= 160; ++k) {
            term *= -zl / static_cast<long double>(k);
            std::complex<long double> add = -term / static_cast<long double>(k);
            sum += add;
            if (std::abs(add) < 1e-22L * (1.0L + std::abs(sum))) break;
        }
        const long double euler = 0.57721566490153286060651209008240243L;
        std::complex<long double> out = -euler - std::log(zl) + sum;
        return cplx(static_cast<double>(out.real()), static_cast<double>(out.imag()));
    }
    cplx inv = 1.0 / z;
    cplx term(1.0), sum(1.0);
    double last = 1.0;
    for (int k = 1; k <= 60; ++k) {
        term *= -static_cast<double>(k) * inv;
        double mag = std::abs(term);
        if (mag > last) break;  // divergent tail of the asymptotic series
        sum += term;
        last = mag;
        if (mag < 1e-18) break;
    }
    return std::exp(-z) * inv * sum;
}

// ---------------------------------------------------------------------------
// smoothed_perron_sum: (1/2 pi i) int F(s) (x^s / s) ((e^{ls}-1)/(ls))^K ds on
// Re s = c. Equal, for every truncation of F, to
//   sum_n f(n) kernel_weight(x/n),
// which is the built-in oracle. The series is cut at the kernel support edge
// x e^{lK}; coefficients beyond it carry zero weight on both sides.
// ---------------------------------------------------------------------------
inline cplx smoothed_perron_sum(const SeriesEvaluator& ev, double x, const KernelSpec& ks,
                                const LineIntegrator& li) {
    ks.validate();
    if (x <= 0.0) throw precondition_error("smoothed_perron_sum: x <= 0");
    const double c = li.abscissa > 1.0 ? li.abscissa : 1.0 + 1.0 / std::log(std::max(x, 3.0));
    if (c <= 1.0) throw precondition_error("smoothed_perron_sum: abscissa must exceed 1");

    const int64_t N = std::min<int64_t>(ev.ct->limit,
                                        static_cast<int64_t>(std::ceil(x * std::exp(ks.lambda * ks.K))) + 1);
    // sum |f(n)| n^-c over the support, for the height bound
    double M = 0.0;
    std::vector<double> ln(static_cast<size_t>(N) + 1, 0.0);
    std::vector<cplx> base(static_cast<size_t>(N) + 1, cplx(0.0));
    for (int64_t n = 1; n <= N; ++n) {
        ln[static_cast<size_t>(n)] = std::log(static_cast<double>(n));
        cplx fn = ev.ct->coeffs[static_cast<size_t>(n)];
        base[static_cast<size_t>(n)] = fn * std::pow(static_cast<double>(n), -c);
        M += std::abs(base[static_cast<size_t>(n)]);
    }

    // |kernel(c+it)| <= ((e^{lc}+1)/(l|s|))^K, so the tail above T is below
    //   (M x^c / pi) ((e^{lc}+1)/l)^K / (K T^K).
    const double kfac = (std::exp(ks.lambda * c) + 1.0) / ks.lambda;
    const double xc = std::pow(x, c);
    auto tail_above = [&](double T) {
        return M * xc / PI * std::pow(kfac / T, ks.K) * kfac / (ks.K * T);
    };
    double T = 10.0;
    while (tail_above(T) > 0.25 * li.tolerance && T < li.height_cut) T *= 1.25;
    if (tail_above(T) > 0.25 * li.tolerance)
        throw numeric_error("smoothed_perron_sum: height cut too low for tolerance");

    // dominant oscillation x^{it} n^{-it}: frequencies up to log x; the
    // coarse/fine comparison below drives further refinement
    double h = 2.0 * PI / (10.0 * std::max(std::log(x), 1.0));

    auto integrate = [&](double step) {
        int64_t half = static_cast<int64_t>(std::ceil(T / step));
        int64_t count = 2 * half + 1;
        const double t0 = -static_cast<double>(half) * step;
        std::vector<cplx> vals(static_cast<size_t>(count), cplx(0.0));
        const int64_t block = 4096;
        const int64_t nblocks = (count + block - 1) / block;
        parallel_chunks(nblocks, static_cast<int>(std::min<int64_t>(nblocks, 256)),
                        [&](int, int64_t cb, int64_t ce) {
            for (int64_t bi = cb; bi < ce; ++bi) {
                const int64_t jb = bi * block, je = std::min(count, jb + block);
                const double tb = t0 + step * static_cast<double>(jb);
                for (int64_t n = 1; n <= N; ++n) {
                    if (base[static_cast<size_t>(n)] == cplx(0.0)) continue;
                    cplx z = base[static_cast<size_t>(n)] *
                             std::polar(1.0, -tb * ln[static_cast<size_t>(n)]);
                    const cplx rot = std::polar(1.0, -step * ln[static_cast<size_t>(n)]);
                    for (int64_t j = jb; j < je; ++j) {
                        vals[static_cast<size_t>(j)] += z;
                        z *= rot;
                    }
                }
                // kernel * x^s / s factors
                for (int64_t j = jb; j < je; ++j) {
                    const cplx s(c, t0 + step * static_cast<double>(j));
                    const cplx ls = ks.lambda * s;
                    cplx kpow = (std::exp(ls) - 1.0) / ls;
                    cplx kern = 1.0;
                    for (int i = 0; i < ks.K; ++i) kern *= kpow;
                    vals[static_cast<size_t>(j)] *= std::exp(s * std::log(x)) / s * kern;
                }
            }
        });
        detail::dump_trace(li, vals, t0, step);
        return detail::simpson(vals, step) / (2.0 * PI);
    };

    cplx coarse = integrate(h);
    cplx fine = integrate(0.5 * h);
    int refine = 1;
    while (std::abs(fine - coarse) > 0.25 * li.tolerance && refine < li.max_refine) {
        h *= 0.5;
        coarse = fine;
        fine = integrate(0.5 * h);
        ++refine;
    }
    if (std::abs(fine - coarse) > 0.25 * li.tolerance)
        throw numeric_error("smoothed_perron_sum: Simpson refinement stalled above tolerance");
    return fine;
}

// Direct side of the Perron identity: sum f(n) kernel_weight(x/n).
inline cplx perron_direct_sum(const CoeffTable& ct, double x, const KernelSpec& ks) {
    cplx acc(0.0);
    const int64_t N = std::min<int64_t>(ct.limit,
                                        static_cast<int64_t>(std::ceil(x * std::exp(ks.lambda * ks.K))) + 1);
    for (int64_t n = 1; n <= N; ++n) {
        double y = x / static_cast<double>(n);
        if (y <= 0.0) continue;
        double wgt = kernel_weight(y, ks);
        if (wgt != 0.0) acc += ct.coeffs[static_cast<size_t>(n)] * wgt;
    }
    return acc;
}

namespace detail {

struct ZetaProductParams {
    std::vector<double> taus;
    std::vector<int> ks;
    double w = 1.0, x = 0.0, xe = 0.0;
    int ktot = 0;
};

inline ZetaProductParams zeta_product_check(const std::vector<double>& taus,
                                       const std::vector<int>& ks_list, double w, double x) {
    if (taus.size() != ks_list.size())
        throw precondition_error("zeta_product_line_integral: taus/k size mismatch");
    if (w < 1.0) throw precondition_error("zeta_product_line_integral: w < 1");
    ZetaProductParams P;
    for (int k : ks_list) {
        if (k < 1) throw precondition_error("zeta_product_line_integral: k < 1");
        P.ktot += k;
    }
    if (std::pow(w, 2.0 * P.ktot) > x * (1.0 + 1e-9))
        throw precondition_error("zeta_product_line_integral: w outside regime w <= x^{1/(2 sum k)}");
    P.taus = taus;
    P.ks = ks_list;
    P.w = w;
    P.x = x;
    P.xe = std::floor(x) + 0.5;  // half-shift: sharp weights hit no integer
    return P;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// zeta_product_line_integral: (1/2 pi i) int prod_j zeta(s - i tau_j)^{k_j}
// (1 - w^{1+i tau_j - s})^{k_j} x^{s-1} ds/s on Re s = c (default 1+1/log x).
// The damping zeros cancel the zeta poles, so the value equals the
// oscillation functional O_l(x,w)/x.
//
// On Re s > 1 the integrand is the sharp Perron transform of the divisor
// modes n <= x twisted over the damping lattice. Truncating the line at any
// feasible height leaves Theta(d(x)/T)-size near-resonant tails (n w^j ~ x),
// so instead each mode's |t| > T tail is added back in closed form:
//   (1/2 pi) int_{|t|>T} r^{c+it}/(c+it) dt = Im E1(-omega (c+iT)) / pi,
// omega = log r. The quadrature then only has to resolve [-T, T].
// ---------------------------------------------------------------------------
inline cplx zeta_product_line_integral(const std::vector<double>& taus, const std::vector<int>& ks_list,
                               double w, double x, const LineIntegrator& li) {
    auto P = detail::zeta_product_check(taus, ks_list, w, x);
    const double c = li.abscissa != 0.0 ? li.abscissa : 1.0 + 1.0 / std::log(std::max(x, 2.0));
    if (c <= 1.0 || c > 2.0)
        throw precondition_error("zeta_product_line_integral: abscissa outside (1, 2]");
    if (w == 1.0) return cplx(0.0);  // damping factor vanishes identically
    const double logw = std::log(P.w);
    const int64_t N = static_cast<int64_t>(std::floor(P.xe));

    // d-coefficients of prod_j zeta(s - i tau_j)^{k_j} up to N
    SpfSieve sieve(N);
    LambdaTable lt = LambdaTable::from_generator(N, sieve, [&](int64_t p, int k, int64_t) {
        cplx acc(0.0);
        double lp = std::log(static_cast<double>(p));
        for (size_t j = 0; j < P.taus.size(); ++j)
            acc += static_cast<double>(P.ks[j]) * std::polar(1.0, k * P.taus[j] * lp);
        return acc;
    });
    CoeffTable ct = build_coefficients(lt, N, sieve);

    const double T = std::min(li.height_cut, 300.0);
    double omega_max = std::log(P.xe) + P.ktot * logw + 2.0;
    double h = 2.0 * PI / (24.0 * omega_max);
    const int64_t half0 = static_cast<int64_t>(std::ceil(T / h));
    const double Tq = static_cast<double>(half0) * h;  // shared grid edge

    auto integrate = [&](double step) -> cplx {
        const int64_t half = static_cast<int64_t>(std::llround(Tq / step));
        const int64_t count = 2 * half + 1;
        const double t0 = -static_cast<double>(half) * step;
        std::vector<cplx> vals(static_cast<size_t>(count), cplx(0.0));
        std::vector<double> ln(static_cast<size_t>(N) + 1, 0.0);
        std::vector<cplx> base(static_cast<size_t>(N) + 1, cplx(0.0));
        for (int64_t n = 1; n <= N; ++n) {
            ln[static_cast<size_t>(n)] = std::log(static_cast<double>(n));
            base[static_cast<size_t>(n)] =
                ct.coeffs[static_cast<size_t>(n)] * std::pow(static_cast<double>(n), -c);
        }
        const int64_t block = 4096;
        const int64_t nblocks = (count + block - 1) / block;
        parallel_chunks(nblocks, static_cast<int>(std::min<int64_t>(nblocks, 256)),
                        [&](int, int64_t cb, int64_t ce) {
            for (int64_t bi = cb; bi < ce; ++bi) {
                const int64_t jb = bi * block, je = std::min(count, jb + block);
                const double tb = t0 + step * static_cast<double>(jb);
                for (int64_t n = 1; n <= N; ++n) {
                    if (base[static_cast<size_t>(n)] == cplx(0.0)) continue;
                    cplx z = base[static_cast<size_t>(n)] *
                             std::polar(1.0, -tb * ln[static_cast<size_t>(n)]);
                    const cplx rot = std::polar(1.0, -step * ln[static_cast<size_t>(n)]);
                    for (int64_t j = jb; j < je; ++j) {
                        vals[static_cast<size_t>(j)] += z;
                        z *= rot;
                    }
                }
                for (int64_t j = jb; j < je; ++j) {
                    const cplx s(c, t0 + step * static_cast<double>(j));
                    cplx factor = std::exp((s - 1.0) * std::log(P.xe)) / s;
                    for (size_t r = 0; r < P.taus.size(); ++r) {
                        cplx damp = 1.0 - std::exp((cplx(1.0, P.taus[r]) - s) * logw);
                        for (int i = 0; i < P.ks[r]; ++i) factor *= damp;
                    }
                    vals[static_cast<size_t>(j)] *= factor;
                }
            }
        });
        detail::dump_trace(li, vals, t0, step);
        return detail::simpson(vals, step) / (2.0 * PI);
    };

    cplx coarse = integrate(h);
    cplx fine = integrate(0.5 * h);
    int refine = 1;
    while (std::abs(fine - coarse) > 0.2 * li.tolerance && refine < li.max_refine) {
        h *= 0.5;
        coarse = fine;
        fine = integrate(0.5 * h);
        ++refine;
    }
    if (std::abs(fine - coarse) > 0.2 * li.tolerance)
        throw numeric_error("zeta_product_line_integral: Simpson refinement stalled above tolerance");

    // closed-form |t| > Tq tails, mode by mode over the damping lattice
    cplx tails(0.0);
    std::vector<int> jv(P.taus.size(), 0);
    for (;;) {
        int total = 0;
        double bin = 1.0;
        cplx expo(0.0);
        for (size_t r = 0; r < P.taus.size(); ++r) {
            total += jv[r];
            bin *= binomial(P.ks[r], jv[r]);
            expo += static_cast<double>(jv[r]) * cplx(1.0, P.taus[r]);
        }
        double sign = (total % 2 == 0) ? 1.0 : -1.0;
        cplx cj = sign * bin * std::exp(expo * logw);
        double wpow = 1.0;
        for (int i = 0; i < total; ++i) wpow *= P.w;
        for (int64_t n = 1; n <= N; ++n) {
            cplx an = ct.coeffs[static_cast<size_t>(n)];
            if (an == cplx(0.0)) continue;
            double omega = std::log(P.xe / (static_cast<double>(n) * wpow));
            cplx e1 = exp_integral_e1(-omega * cplx(c, Tq));
            tails += cj * an * (e1.imag() / PI);
        }
        size_t r = 0;
        while (r < P.taus.size() && jv[r] == P.ks[r]) { jv[r] = 0; ++r; }
        if (r == P.taus.size()) break;
        ++jv[r];
    }
    tails /= P.xe;

    // the Mellin ordinate ran at xe; rescale to the stated x
    return (fine + tails) * (P.xe / x);
}

// Same integral through the Euler-Maclaurin zeta continuation on a left
// abscissa with a cosine taper. Converges only at the Theta(d(x)/T) rate of
// the sharp tail, so tolerances are coarse; kept as an independent route that
// exercises the zeta evaluator on the line.
inline cplx zeta_product_line_integral_em_route(const std::vector<double>& taus,
                                          const std::vector<int>& ks_list, double w, double x,
                                          const LineIntegrator& li) {
    auto P = detail::zeta_product_check(taus, ks_list, w, x);
    if (w == 1.0) return cplx(0.0);
    const double c = li.abscissa > 0.0 ? li.abscissa : 0.75;
    if (c <= 0.0 || std::abs(c - 1.0) < 0.05 || c > 2.0)
        throw precondition_error("zeta_product_line_integral_em_route: abscissa near 1 or outside (0,2]");
    const double logw = std::log(P.w);
    const double T = std::min(li.height_cut * 0.5, 5000.0);
    const double omega = std::log(P.xe) + 0.5 * std::log(2.0 * T) + P.ktot * logw + 4.0;

    auto integrate = [&](double step) -> cplx {
        const int64_t half = static_cast<int64_t>(std::ceil(2.0 * T / step));
        const int64_t count = 2 * half + 1;
        const double t0 = -static_cast<double>(half) * step;
        std::vector<std::vector<cplx>> zgrids;
        zgrids.reserve(P.taus.size());
        for (double tau : P.taus) zgrids.push_back(zeta_grid(c, t0 - tau, step, count));
        std::vector<cplx> vals(static_cast<size_t>(count));
        parallel_chunks(count, 64, [&](int, int64_t jb, int64_t je) {
            for (int64_t j = jb; j < je; ++j) {
                const double t = t0 + step * static_cast<double>(j);
                const cplx s(c, t);
                cplx integrand = std::exp((s - 1.0) * std::log(P.xe)) / s;
                for (size_t r = 0; r < P.taus.size(); ++r) {
                    cplx zv = zgrids[r][static_cast<size_t>(j)];
                    cplx damp = 1.0 - std::exp((cplx(1.0, P.taus[r]) - s) * logw);
                    for (int i = 0; i < P.ks[r]; ++i) integrand *= zv * damp;
                }
                double at = std::abs(t);
                if (at > T) integrand *= 0.5 * (1.0 + std::cos(PI * (at - T) / T));
                vals[static_cast<size_t>(j)] = integrand;
            }
        });
        detail::dump_trace(li, vals, t0, step);
        return detail::simpson(vals, step) / (2.0 * PI);
    };

    double h = 2.0 * PI / (10.0 * omega);
    cplx coarse = integrate(h);
    cplx fine = integrate(0.5 * h);
    int refine = 1;
    while (std::abs(fine - coarse) > 0.2 * li.tolerance && refine < li.max_refine) {
        h *= 0.5;
        coarse = fine;
        fine = integrate(0.5 * h);
        ++refine;
    }
    return fine * (P.xe / x);
}

}  // namespace weaksub
