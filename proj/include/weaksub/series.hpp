#pragma once

// Dirichlet-series evaluation for Re(s) > 1 with certified truncation tails,
// the Riemann zeta function by Euler-Maclaurin summation (valid into the
// critical strip), the archimedean factor Gamma_R(s) = pi^{-s/2} Gamma(s/2)
// via a Lanczos approximation, and gamma/conductor data.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "weaksub/coeffs.hpp"
#include "weaksub/common.hpp"

namespace weaksub {

// ---------------------------------------------------------------------------
// Riemann zeta, Euler-Maclaurin:
//   zeta(s) = sum_{n<=M} n^-s + M^{1-s}/(s-1) - M^-s/2
//           + sum_k B_{2k}/(2k)! * s(s+1)...(s+2k-2) * M^{-s-2k+1}.
// M scales with |Im s| so the Bernoulli tail stays convergent; 12 correction
// terms give ~1e-13 relative error for M >= 0.55|Im s|.
// ---------------------------------------------------------------------------
namespace detail {

inline const std::array<double, 12>& bernoulli_over_fact() {
    static const std::array<double, 12> c = [] {
        const double B[12] = {1.0 / 6,    -1.0 / 30,     1.0 / 42,      -1.0 / 30,
                              5.0 / 66,   -691.0 / 2730, 7.0 / 6,       -3617.0 / 510,
                              43867.0 / 798, -174611.0 / 330, 854513.0 / 138,
                              -236364091.0 / 2730};
        std::array<double, 12> out{};
        double fact = 1.0;
        for (int k = 1; k <= 12; ++k) {
            fact *= (2.0 * k - 1.0) * (2.0 * k);
            out[static_cast<size_t>(k - 1)] = B[k - 1] / fact;
        }
        return out;
    }();
    return c;
}

inline int zeta_direct_terms(double abs_t) {
    return std::max(24, static_cast<int>(std::ceil(0.55 * abs_t)) + 2);
}

// Correction terms beyond the direct sum, for a given cutoff M.
inline cplx zeta_em_correction(cplx s, int M) {
    const double Md = static_cast<double>(M);
    cplx m_pow_ms = std::exp(-s * std::log(Md));  // M^-s
    cplx out = m_pow_ms * Md / (s - 1.0) - 0.5 * m_pow_ms;
    cplx poch = s;                 // s(s+1)...(s+2k-2)
    cplx mscale = m_pow_ms / Md;   // M^{-s-2k+1}
    const auto& coef = bernoulli_over_fact();
    for (int k = 1; k <= 12; ++k) {
        out += coef[static_cast<size_t>(k - 1)] * poch * mscale;
        poch *= (s + cplx(2.0 * k - 1.0)) * (s + cplx(2.0 * k));
        mscale /= Md * Md;
    }
    return out;
}

}  // namespace detail

inline cplx zeta(cplx s) {
    if (s.real() <= 0.0) throw precondition_error("zeta: Re(s) <= 0");
    if (std::abs(s - cplx(1.0)) < 1e-14) throw precondition_error("zeta: pole at s = 1");
    const int M = detail::zeta_direct_terms(std::abs(s.imag()));
    cplx direct(0.0);
    for (int n = 1; n <= M; ++n)
        direct += std::exp(-s * std::log(static_cast<double>(n)));
    return direct + detail::zeta_em_correction(s, M);
}

// zeta(sigma + i(t0 + j h)) for j = 0..count-1. The direct sums are shared
// across a block of nodes through one complex rotation per n, which is what
// makes long vertical-line scans affordable.
inline std::vector<cplx> zeta_grid(double sigma, double t0, double h, int64_t count) {
    std::vector<cplx> out(static_cast<size_t>(count), cplx(0.0));
    if (count <= 0) return out;
    const int64_t block = 2048;
    const int64_t nblocks = (count + block - 1) / block;
    parallel_chunks(nblocks, static_cast<int>(std::min<int64_t>(nblocks, 64)),
                    [&](int, int64_t cb, int64_t ce) {
        for (int64_t bi = cb; bi < ce; ++bi) {
            const int64_t jb = bi * block, je = std::min(count, jb + block);
            double tmax = std::max(std::abs(t0 + h * static_cast<double>(jb)),
                                   std::abs(t0 + h * static_cast<double>(je - 1)));
            const int M = detail::zeta_direct_terms(tmax);
            const double tb = t0 + h * static_cast<double>(jb);
            for (int n = 1; n <= M; ++n) {
                const double ln = std::log(static_cast<double>(n));
                cplx z = std::exp(cplx(-sigma * ln, -tb * ln));
                const cplx rot = std::polar(1.0, -h * ln);
                for (int64_t j = jb; j < je; ++j) {
                    out[static_cast<size_t>(j)] += z;
                    z *= rot;
                }
            }
            for (int64_t j = jb; j < je; ++j) {
                cplx s(sigma, t0 + h * static_cast<double>(j));
                out[static_cast<size_t>(j)] += detail::zeta_em_correction(s, M);
            }
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// Complex gamma, 15-term Lanczos (g = 607/128), reflection for Re z < 1/2.
// ---------------------------------------------------------------------------
inline cplx gamma_complex(cplx z) {
    static const double g = 607.0 / 128.0;
    static const double c[15] = {
        0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
        14.136097974741747174,      -0.49191381609762019978,   0.33994649984811888699e-4,
        0.46523628927048575665e-4,  -0.98374475304879564677e-4, 0.15808870322491248884e-3,
        -0.21026444172410488319e-3, 0.21743961811521264320e-3, -0.16431810653676389022e-3,
        0.84418223983852743293e-4,  -0.26190838401581408670e-4, 0.36899182659531622704e-5};
    if (z.real() < 0.5) {
        // poles at non-positive integers
        double zr = std::round(z.real());
        if (std::abs(z.imag()) < 1e-13 && std::abs(z.real() - zr) < 1e-13 && zr <= 0.0)
            throw precondition_error("gamma: pole at non-positive integer");
        return PI / (std::sin(PI * z) * gamma_complex(1.0 - z));
    }
    cplx acc = c[0];
    for (int k = 1; k < 15; ++k) acc += c[k] / (z - 1.0 + static_cast<double>(k));
    cplx t = z + (g - 0.5);
    return std::sqrt(2.0 * PI) * std::exp((z - 0.5) * std::log(t) - t) * acc;
}

// Gamma_R(s) = pi^{-s/2} Gamma(s/2).
inline cplx gamma_R(cplx s) {
    return std::exp(-0.5 * s * std::log(PI)) * gamma_complex(0.5 * s);
}

// ---------------------------------------------------------------------------
// Archimedean data: conductor N, degree m, shifts mu_j with
// Re(mu_j) >= -1 + delta_margin.
// ---------------------------------------------------------------------------
struct GammaData {
    int64_t conductor = 1;
    int degree = 1;
    std::vector<cplx> mu;
    double delta_margin = 1.0;
    bool applicable = true;  // false for instances without a functional equation

    void validate() const {
        if (!applicable) return;
        if (conductor < 1) throw precondition_error("GammaData: conductor < 1");
        if (degree < 1 || static_cast<size_t>(degree) != mu.size())
            throw precondition_error("GammaData: degree/mu mismatch");
        if (delta_margin <= 0.0) throw precondition_error("GammaData: delta_margin <= 0");
        for (cplx m : mu)
            if (m.real() < -1.0 + delta_margin - 1e-12)
                throw precondition_error("GammaData: Re(mu) < -1 + delta");
    }
};

inline double analytic_conductor(const GammaData& gd) {
    gd.validate();
    double c = static_cast<double>(gd.conductor);
    for (cplx m : gd.mu) c *= 1.0 + std::abs(m);
    return c;
}

// ---------------------------------------------------------------------------
// SeriesEvaluator: F, F', F'/F from a truncated coefficient table, with an
// absolute-majorant tail certificate. The certificate assumes |f(n)| is
// dominated by the divisor function of the declared order, so
//   |sum_{n>N} f(n) n^-s| <= sigma * int_N^inf t^-sigma (1+log t)^{A'-1} dt,
// evaluated in closed form by repeated integration by parts.
// ---------------------------------------------------------------------------
struct TailPolicy {
    enum class Mode { none, majorant } mode = Mode::majorant;
    int majorant_order = 1;  // A': |f(n)| <= d_{A'}(n)
};

class SeriesEvaluator {
  public:
    const CoeffTable* ct = nullptr;
    const LambdaTable* lt = nullptr;
    const VonMangoldtTable* vt = nullptr;
    double eta = 0.05;  // accepts Re(s) >= 1 + eta
    TailPolicy tail;

    SeriesEvaluator(const CoeffTable& c, const LambdaTable& l, const VonMangoldtTable& v,
                    double eta_, TailPolicy tp = {})
        : ct(&c), lt(&l), vt(&v), eta(eta_), tail(tp) {
        if (eta <= 0.0) throw precondition_error("SeriesEvaluator: eta <= 0");
    }

    double tail_bound(double sigma) const {
        if (tail.mode == TailPolicy::Mode::none) return std::numeric_limits<double>::quiet_NaN();
        if (sigma <= 1.0) throw numeric_error("tail bound not certifiable at Re(s) <= 1");
        const double N = static_cast<double>(ct->limit);
        const double a = sigma - 1.0;
        const double L = 1.0 + std::log(N);
        // I_j = int_N^inf t^-sigma (1+log t)^j dt, I_0 = N^{1-sigma}/a.
        double I = std::pow(N, -a) / a;
        double Lpow = 1.0;
        for (int j = 1; j <= tail.majorant_order - 1; ++j) {
            Lpow *= L;
            I = std::pow(N, -a) * Lpow / a + static_cast<double>(j) / a * I;
        }
        return sigma * I;
    }

    void check_domain(cplx s) const {
        if (s.real() < 1.0 + eta - 1e-15)
            throw precondition_error("SeriesEvaluator: Re(s) below 1 + eta");
    }

    std::pair<cplx, double> evaluate_F(cplx s) const {
        check_domain(s);
        cplx acc(0.0);
        for (int64_t n = 1; n <= ct->limit; ++n) {
            if (ct->coeffs[static_cast<size_t>(n)] == cplx(0.0)) continue;
            acc += ct->coeffs[static_cast<size_t>(n)] *
                   std::exp(-s * std::log(static_cast<double>(n)));
        }
        return {acc, tail_bound(s.real())};
    }

    // F'(s) of the truncated series.
    cplx evaluate_Fprime(cplx s) const {
        check_domain(s);
        cplx acc(0.0);
        for (int64_t n = 2; n <= ct->limit; ++n) {
            if (ct->coeffs[static_cast<size_t>(n)] == cplx(0.0)) continue;
            double ln = std::log(static_cast<double>(n));
            acc -= ct->coeffs[static_cast<size_t>(n)] * ln * std::exp(-s * ln);
        }
        return acc;
    }

    // F'/F(s) = -sum lambda_f(n) Lambda(n) n^-s over stored prime powers.
    cplx evaluate_logderiv(cplx s) const {
        check_domain(s);
        cplx acc(0.0);
        for (const auto& [q, lam] : lt->entries()) {
            acc += lam * vt->values[static_cast<size_t>(q)] *
                   std::exp(-s * std::log(static_cast<double>(q)));
        }
        return -acc;
    }

    // F(sigma + i(t0 + j h)) for j = 0..count-1, shared-rotation evaluation.
    // Deterministic for any thread count (chunks are fixed t-blocks).
    std::vector<cplx> grid_values(double sigma, double t0, double h, int64_t count) const {
        if (sigma < 1.0 + eta - 1e-15)
            throw precondition_error("SeriesEvaluator: Re(s) below 1 + eta");
        std::vector<cplx> out(static_cast<size_t>(count), cplx(0.0));
        if (count <= 0) return out;
        const int64_t N = ct->limit;
        std::vector<double> w(static_cast<size_t>(N) + 1, 0.0);  // |n^-sigma| scale
        std::vector<double> ln(static_cast<size_t>(N) + 1, 0.0);
        for (int64_t n = 1; n <= N; ++n) {
            ln[static_cast<size_t>(n)] = std::log(static_cast<double>(n));
            w[static_cast<size_t>(n)] = std::pow(static_cast<double>(n), -sigma);
        }
        const int64_t block = 4096;
        const int64_t nblocks = (count + block - 1) / block;
        parallel_chunks(nblocks, static_cast<int>(std::min<int64_t>(nblocks, 256)),
                        [&](int, int64_t cb, int64_t ce) {
            for (int64_t bi = cb; bi < ce; ++bi) {
                const int64_t jb = bi * block, je = std::min(count, jb + block);
                const double tb = t0 + h * static_cast<double>(jb);
                for (int64_t n = 1; n <= N; ++n) {
                    const cplx fn = ct->coeffs[static_cast<size_t>(n)];
                    if (fn == cplx(0.0)) continue;
                    cplx z = fn * w[static_cast<size_t>(n)] *
                             std::polar(1.0, -tb * ln[static_cast<size_t>(n)]);
                    const cplx rot = std::polar(1.0, -h * ln[static_cast<size_t>(n)]);
                    for (int64_t j = jb; j < je; ++j) {
                        out[static_cast<size_t>(j)] += z;
                        z *= rot;
                    }
                }
            }
        });
        return out;
    }
};

}  // namespace weaksub
