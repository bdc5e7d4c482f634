#pragma once

// Concrete L-function instances (zeta-shift products, primitive Dirichlet
// characters, the symmetric square of the discriminant form), the windowed
// weak-Ramanujan verifier, the convexity-shape bound, central values through
// the mirrored smoothed-sum representation, and the family ratio report.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "weaksub/characters.hpp"
#include "weaksub/coeffs.hpp"
#include "weaksub/contour.hpp"
#include "weaksub/series.hpp"

namespace weaksub {

// ---------------------------------------------------------------------------
// Satake parameters per prime; lambda(p^k) must equal sum_j alpha_j^k.
// ---------------------------------------------------------------------------
struct LocalRoots {
    std::vector<int64_t> primes;
    std::vector<std::vector<cplx>> roots;  // one vector of m roots per prime

    // max over stored prime powers of |sum_j alpha_j^k - lambda(p^k)|
    double max_deviation(const LambdaTable& lt) const {
        double worst = 0.0;
        for (size_t i = 0; i < primes.size(); ++i) {
            int64_t q = primes[i];
            std::vector<cplx> pw(roots[i].size(), cplx(1.0));
            for (int k = 1; q <= lt.max_index; ++k) {
                cplx sum(0.0);
                for (size_t j = 0; j < pw.size(); ++j) {
                    pw[j] *= roots[i][j];
                    sum += pw[j];
                }
                worst = std::max(worst, std::abs(sum - lt.lookup(q)));
                if (q > lt.max_index / primes[i]) break;
                q *= primes[i];
            }
        }
        return worst;
    }
};

struct LInstance {
    std::string label;
    LambdaTable lambda_table;
    CoeffTable coeffs;
    GammaData gamma;
    cplx root_number = 1.0;
    bool dual_is_self = true;
    LocalRoots local_roots;

    // Completely multiplicative periodic instances carry their full coefficient
    // sequence as one period; smoothed sums can then run past coeffs.limit.
    std::vector<cplx> periodic;
    int64_t period = 0;

    cplx coefficient(int64_t n) const {
        if (period > 0) return periodic[static_cast<size_t>(n % period)];
        return coeffs.f(n);
    }
    int64_t coefficient_limit() const {
        return period > 0 ? std::numeric_limits<int64_t>::max() : coeffs.limit;
    }

    void validate() const {
        if (gamma.applicable) {
            gamma.validate();
            if (std::abs(std::abs(root_number) - 1.0) > 1e-9)
                throw precondition_error("LInstance: |root number| != 1");
        }
    }
};

// ---------------------------------------------------------------------------
// F(s) = prod_j zeta(s - i tau_j)^{k_j}: lambda(p^k) = sum_j k_j p^{i k tau_j}.
// No functional equation; central-value operations reject these.
// ---------------------------------------------------------------------------
inline LInstance make_zeta_shift_product(const std::vector<double>& taus,
                                         const std::vector<int>& ks, int64_t N,
                                         const SpfSieve& sieve) {
    if (taus.size() != ks.size())
        throw precondition_error("make_zeta_shift_product: taus/k mismatch");
    int ktot = 0;
    for (int k : ks) {
        if (k < 1) throw precondition_error("make_zeta_shift_product: k < 1");
        ktot += k;
    }
    if (ktot > 8) throw precondition_error("make_zeta_shift_product: sum k > 8");
    if (N < 1000) throw precondition_error("make_zeta_shift_product: N < 1000");

    LInstance li;
    li.label = "zeta_shift";
    li.lambda_table = LambdaTable::from_generator(N, sieve, [&](int64_t p, int k, int64_t) {
        cplx acc(0.0);
        double lp = std::log(static_cast<double>(p));
        for (size_t j = 0; j < taus.size(); ++j)
            acc += static_cast<double>(ks[j]) * std::polar(1.0, k * taus[j] * lp);
        return acc;
    });
    li.coeffs = build_coefficients(li.lambda_table, N, sieve);
    li.gamma.applicable = false;
    li.dual_is_self = false;
    for (int64_t p : sieve.primes) {
        if (p > std::min<int64_t>(N, 100000)) break;
        std::vector<cplx> r;
        double lp = std::log(static_cast<double>(p));
        for (size_t j = 0; j < taus.size(); ++j)
            for (int i = 0; i < ks[j]; ++i) r.push_back(std::polar(1.0, taus[j] * lp));
        li.local_roots.primes.push_back(p);
        li.local_roots.roots.push_back(std::move(r));
    }
    return li;
}

// ---------------------------------------------------------------------------
// Primitive Dirichlet character instance: a(n) = chi(n), kappa from the Gauss
// sum g(chi) / (i^a sqrt(q)).
// ---------------------------------------------------------------------------
inline LInstance make_dirichlet(int64_t q, int64_t index, int64_t N, const SpfSieve& sieve) {
    if (q < 3 || q > 10000) throw precondition_error("make_dirichlet: q outside [3, 10^4]");
    DirichletGroup G(q);
    if (!G.is_primitive(index))
        throw precondition_error("make_dirichlet: character index is not primitive");
    std::vector<cplx> chi = G.character_table(index);

    LInstance li;
    li.label = "dirichlet_q" + std::to_string(q) + "_i" + std::to_string(index);
    li.lambda_table = LambdaTable::from_generator(N, sieve, [&](int64_t p, int k, int64_t) {
        cplx v = chi[static_cast<size_t>(p % q)];
        cplx out(1.0);
        for (int i = 0; i < k; ++i) out *= v;
        return out;
    });
    li.coeffs = build_coefficients(li.lambda_table, N, sieve);

    int a = (std::abs(chi[static_cast<size_t>(q - 1)] - cplx(1.0)) < 1e-9) ? 0 : 1;  // parity
    li.gamma.conductor = q;
    li.gamma.degree = 1;
    li.gamma.mu = {cplx(static_cast<double>(a), 0.0)};
    li.gamma.delta_margin = 1.0;
    cplx g = gauss_sum(chi);
    li.root_number = g / (std::pow(cplx(0.0, 1.0), a) * std::sqrt(static_cast<double>(q)));

    bool real_chi = true;
    for (cplx v : chi)
        if (std::abs(v.imag()) > 1e-12) { real_chi = false; break; }
    li.dual_is_self = real_chi;

    for (int64_t p : sieve.primes) {
        if (p > N) break;
        li.local_roots.primes.push_back(p);
        li.local_roots.roots.push_back({chi[static_cast<size_t>(p % q)]});
    }
    li.periodic = std::move(chi);
    li.period = q;
    li.validate();
    return li;
}

// ---------------------------------------------------------------------------
// Ramanujan tau by eta-product series multiplication in 128-bit integers:
// prod (1-q^n)^24 = (E3)^8 with E3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2} kept
// sparse, so each stage is one dense-by-sparse convolution. Exact through
// N = 10^6 (|tau(n)| <= d(n) n^{11/2} < 2^127 there).
// ---------------------------------------------------------------------------
inline std::vector<__int128> ramanujan_tau_table(int64_t N) {
    if (N < 1 || N > 1000000) throw precondition_error("ramanujan_tau_table: N outside [1, 10^6]");
    const int64_t L = N;  // tau(n) = c[n-1]
    std::vector<std::pair<int64_t, __int128>> e3;
    for (int64_t k = 0;; ++k) {
        int64_t idx = k * (k + 1) / 2;
        if (idx >= L) break;
        __int128 coef = 2 * k + 1;
        if (k & 1) coef = -coef;
        e3.emplace_back(idx, coef);
    }
    std::vector<__int128> acc(static_cast<size_t>(L), 0);
    for (const auto& [i, cv] : e3) acc[static_cast<size_t>(i)] = cv;
    std::vector<__int128> next(static_cast<size_t>(L));
    for (int rep = 1; rep < 8; ++rep) {
        std::fill(next.begin(), next.end(), static_cast<__int128>(0));
        for (const auto& [off, cv] : e3)
            for (int64_t i = 0; i + off < L; ++i)
                next[static_cast<size_t>(i + off)] += cv * acc[static_cast<size_t>(i)];
        acc.swap(next);
    }
    return acc;
}

namespace detail {

struct u256 {
    uint64_t w[4] = {0, 0, 0, 0};
};

inline u256 mul_u128(unsigned __int128 a, unsigned __int128 b) {
    uint64_t a0 = static_cast<uint64_t>(a), a1 = static_cast<uint64_t>(a >> 64);
    uint64_t b0 = static_cast<uint64_t>(b), b1 = static_cast<uint64_t>(b >> 64);
    auto mul64 = [](uint64_t x, uint64_t y) { return static_cast<unsigned __int128>(x) * y; };
    unsigned __int128 p00 = mul64(a0, b0);
    unsigned __int128 p01 = mul64(a0, b1);
    unsigned __int128 p10 = mul64(a1, b0);
    unsigned __int128 p11 = mul64(a1, b1);
    u256 r;
    unsigned __int128 carry = (p00 >> 64) + static_cast<uint64_t>(p01) + static_cast<uint64_t>(p10);
    r.w[0] = static_cast<uint64_t>(p00);
    r.w[1] = static_cast<uint64_t>(carry);
    carry = (carry >> 64) + (p01 >> 64) + (p10 >> 64) + static_cast<uint64_t>(p11);
    r.w[2] = static_cast<uint64_t>(carry);
    r.w[3] = static_cast<uint64_t>((carry >> 64) + (p11 >> 64));
    return r;
}

inline int cmp_u256(const u256& a, const u256& b) {
    for (int i = 3; i >= 0; --i) {
        if (a.w[i] < b.w[i]) return -1;
        if (a.w[i] > b.w[i]) return 1;
    }
    return 0;
}

}  // namespace detail

// Exact |tau(p)| <= 2 p^{11/2}, i.e. tau(p)^2 <= 4 p^11, in 256-bit integers.
inline bool deligne_bound_holds(int64_t p, __int128 tau_p) {
    unsigned __int128 a = tau_p < 0 ? static_cast<unsigned __int128>(-tau_p)
                                    : static_cast<unsigned __int128>(tau_p);
    unsigned __int128 p5 = 1, p6 = 1;
    for (int i = 0; i < 5; ++i) p5 *= static_cast<unsigned>(p);
    for (int i = 0; i < 6; ++i) p6 *= static_cast<unsigned>(p);
    detail::u256 lhs = detail::mul_u128(a, a);
    detail::u256 rhs = detail::mul_u128(4 * p5, p6);
    return detail::cmp_u256(lhs, rhs) <= 0;
}

// ---------------------------------------------------------------------------
// sym^2 of the weight-12 level-1 form: local roots {alpha_p^2, 1, beta_p^2}
// with alpha_p + beta_p = tau(p) / p^{11/2}, alpha_p beta_p = 1. The prime-power
// values lambda(p^k) = alpha^{2k} + 1 + beta^{2k} come from the Chebyshev-type
// recursion u_{k+1} = (lam^2 - 2) u_k - u_{k-1}.
// ---------------------------------------------------------------------------
inline LInstance make_sym2_delta(int64_t N, const SpfSieve& sieve) {
    if (N > 1000000) throw precondition_error("make_sym2_delta: N > 10^6");
    std::vector<__int128> tau = ramanujan_tau_table(N);

    auto hecke_lambda = [&](int64_t p) {
        return static_cast<double>(tau[static_cast<size_t>(p - 1)]) /
               std::pow(static_cast<double>(p), 5.5);
    };

    LInstance li;
    li.label = "sym2_delta";
    li.lambda_table = LambdaTable::from_generator(N, sieve, [&](int64_t p, int k, int64_t) {
        double lam = hecke_lambda(p);
        double a2b2 = lam * lam - 2.0;  // alpha^2 + beta^2
        double um = 2.0, u = a2b2;      // u_k = alpha^{2k} + beta^{2k}
        for (int i = 1; i < k; ++i) {
            double un = a2b2 * u - um;
            um = u;
            u = un;
        }
        return cplx(u + 1.0, 0.0);
    });
    li.coeffs = build_coefficients(li.lambda_table, N, sieve);
    li.gamma.conductor = 1;
    li.gamma.degree = 3;
    li.gamma.mu = {cplx(1.0), cplx(11.0), cplx(12.0)};
    li.gamma.delta_margin = 2.0;
    li.root_number = 1.0;
    li.dual_is_self = true;
    for (int64_t p : sieve.primes) {
        if (p > N) break;
        double lam = hecke_lambda(p);
        double theta = std::acos(std::clamp(0.5 * lam, -1.0, 1.0));
        li.local_roots.primes.push_back(p);
        li.local_roots.roots.push_back(
            {std::polar(1.0, 2.0 * theta), cplx(1.0), std::polar(1.0, -2.0 * theta)});
    }
    li.validate();
    return li;
}

// ---------------------------------------------------------------------------
// Weak-Ramanujan verifier: exact window sums sum_{x<n<=ex} |lambda(n)|^2
// Lambda(n)/n on a geometric grid, the minimal A^2 compatible with a capped
// A0, and violations of a user-asserted pair.
// ---------------------------------------------------------------------------
struct WRWindow {
    double x = 0.0;
    double sum = 0.0;
};

struct WRReport {
    std::vector<WRWindow> windows;
    double fitted_A2 = 0.0;
    double fitted_A0 = 0.0;
    double ceiling = 0.0;
    double max_violation = 0.0;  // for the user-asserted pair, 0 when none given
};

inline std::vector<double> eadic_grid(int64_t N) {
    std::vector<double> xs;
    int jmax = static_cast<int>(std::floor(std::log(static_cast<double>(N)))) - 1;
    for (int j = 2; j <= jmax; ++j) xs.push_back(std::exp(static_cast<double>(j)));
    return xs;
}

inline WRReport weak_ramanujan_verify(const LambdaTable& lt, const VonMangoldtTable& vt,
                                      const std::vector<double>& x_grid, double ceiling = 2.0,
                                      std::optional<std::pair<double, double>> user_assert =
                                          std::nullopt) {
    WRReport rep;
    rep.ceiling = ceiling;
    const double E = std::exp(1.0);
    for (double x : x_grid) {
        if (x * E > static_cast<double>(lt.max_index) + 0.5)
            throw precondition_error("weak_ramanujan_verify: grid exceeds table range");
        double sum = 0.0;
        for (const auto& [q, lam] : lt.entries()) {
            double qd = static_cast<double>(q);
            if (qd <= x) continue;
            if (qd > E * x) break;
            sum += std::norm(lam) * vt.values[static_cast<size_t>(q)] / qd;
        }
        rep.windows.push_back({x, sum});
    }
    double a2 = 0.0;
    for (const auto& w : rep.windows)
        a2 = std::max(a2, w.sum - ceiling / std::log(E * w.x));
    rep.fitted_A2 = a2;
    double a0 = 0.0;
    for (const auto& w : rep.windows)
        a0 = std::max(a0, (w.sum - a2) * std::log(E * w.x));
    rep.fitted_A0 = std::max(0.0, a0);
    if (user_assert) {
        auto [A, A0] = *user_assert;
        double v = 0.0;
        for (const auto& w : rep.windows)
            v = std::max(v, w.sum - A * A - A0 / std::log(E * w.x));
        rep.max_violation = std::max(0.0, v);
    }
    return rep;
}

// C^{1/4} (1+|t|)^{m/4+1} (log C)^A, implied constant 1 — a shape function.
inline double convexity_bound(const GammaData& gd, double t, double A) {
    double C = analytic_conductor(gd);
    return std::pow(C, 0.25) * std::pow(1.0 + std::abs(t), gd.degree / 4.0 + 1.0) *
           std::pow(std::log(C), A);
}

// ---------------------------------------------------------------------------
// Central values: L(1/2) = sum_n a(n) V(n) + kappa sum_n conj(a(n)) V~(n),
// V(n) = n^{-1/2} W(n/sqrt(N)), with
//   W(y) = (1/2 pi i) int gammaratio(s) G(s) y^{-s} ds/s
// on Re s = c. Past the bulk (log y > 2c + 2) the line is moved to the per-y
// saddle Re s = log(y)/2 — an exact deformation (no poles crossed) that kills
// the e^{c log y - (log y)^2/4} cancellation a fixed line would suffer.
// ---------------------------------------------------------------------------
struct AfeKernel {
    enum class Type { gaussian, perron } type = Type::gaussian;
    double lambda = 0.0;
    int K = 0;

    cplx value(cplx s) const {
        if (type == Type::gaussian) return std::exp(s * s);
        cplx ls = lambda * s;
        cplx base = (std::exp(ls) - 1.0) / ls;
        cplx out = 1.0;
        for (int i = 0; i < K; ++i) out *= base;
        return out;
    }
    // G(-s) = mirror_scale^{-s} G(s): the dual sum reuses W at y * mirror_scale.
    double mirror_scale() const {
        return type == Type::gaussian ? 1.0 : std::exp(lambda * static_cast<double>(K));
    }
};

namespace detail {

// One weight quadrature at a fixed y, uniform trapezoid rule. The integrand
// is analytic in a t-strip and decays like e^{-t^2} (Gaussian kernel) or
// e^{-m pi |t|/4} (gamma decay), so the trapezoid sum converges geometrically
// once the node frequency clears the integrand's spectrum.
inline cplx afe_weight_at(double y, const std::vector<cplx>& mu, double c, const AfeKernel& kern,
                          cplx denom) {
    const double ly = std::log(y);
    const double ce = std::clamp(0.5 * ly, c, 30.0);
    const double m = static_cast<double>(mu.size());
    double Y;
    if (kern.type == AfeKernel::Type::gaussian) {
        Y = std::sqrt(ce * ce + 44.0) + 1.0;
    } else {
        Y = 175.0 / (m * PI) + ce;
    }
    const double omega = std::abs(ly - 2.0 * ce) + 2.0 * ce + 2.0 * m + 3.0;
    const double h = 2.0 * PI / (omega + 34.0);
    const int64_t half = static_cast<int64_t>(std::ceil(Y / h));
    cplx acc(0.0);
    for (int64_t j = -half; j <= half; ++j) {
        cplx s(ce, h * static_cast<double>(j));
        cplx g = kern.value(s);
        for (cplx mj : mu) g *= gamma_R(s + 0.5 + mj);
        acc += g / denom * std::exp(-s * ly) / s;
    }
    return acc * h / (2.0 * PI);
}

}  // namespace detail

// Weight table on a uniform log-y grid with quintic interpolation; shared per
// (mu multiset, line, kernel) across a family sweep.
class AfeWeights {
  public:
    AfeWeights(std::vector<cplx> mu, double c, AfeKernel kern, double ly_min, double ly_max,
               double step = 2e-3)
        : mu_(std::move(mu)), c_(c), kern_(kern), step_(step) {
        denom_ = 1.0;
        for (cplx m : mu_) denom_ *= gamma_R(cplx(0.5) + m);
        lo_ = ly_min - 4.0 * step_;
        int64_t count = static_cast<int64_t>(std::ceil((ly_max - lo_) / step_)) + 8;
        vals_.resize(static_cast<size_t>(count));
        parallel_chunks(count, 64, [&](int, int64_t b, int64_t e) {
            for (int64_t i = b; i < e; ++i)
                vals_[static_cast<size_t>(i)] = detail::afe_weight_at(
                    std::exp(lo_ + step_ * static_cast<double>(i)), mu_, c_, kern_, denom_);
        });
    }

    // Direct quadrature, bypassing the table (cross-check path).
    cplx direct(double y) const { return detail::afe_weight_at(y, mu_, c_, kern_, denom_); }

    cplx operator()(double y) const {
        double u = (std::log(y) - lo_) / step_;
        int64_t i = static_cast<int64_t>(std::floor(u));
        if (i < 2 || i + 3 >= static_cast<int64_t>(vals_.size()))
            throw numeric_error("AfeWeights: y outside tabulated range");
        double f = u - static_cast<double>(i);
        // 6-point Lagrange on nodes -2..3 relative to the cell
        cplx acc(0.0);
        for (int k = -2; k <= 3; ++k) {
            double basis = 1.0;
            for (int l = -2; l <= 3; ++l)
                if (l != k) basis *= (f - static_cast<double>(l)) / static_cast<double>(k - l);
            acc += basis * vals_[static_cast<size_t>(i + k)];
        }
        return acc;
    }

    double max_abs_from(double y) const {
        double u = (std::log(y) - lo_) / step_;
        int64_t i = std::max<int64_t>(0, static_cast<int64_t>(std::floor(u)));
        double m = 0.0;
        for (size_t k = static_cast<size_t>(i); k < vals_.size(); ++k)
            m = std::max(m, std::abs(vals_[k]));
        return m;
    }

    double ly_max_usable() const {
        return lo_ + step_ * (static_cast<double>(vals_.size()) - 4.0);
    }

  private:
    std::vector<cplx> mu_;
    double c_ = 1.0;
    AfeKernel kern_;
    double step_ = 2e-3, lo_ = 0.0;
    cplx denom_ = 1.0;
    std::vector<cplx> vals_;
};

struct AfeOptions {
    AfeKernel kernel;
    double tolerance = 1e-9;   // absolute truncation target for the n-sums
    double ly_max = 10.0;      // weight table reach in log y
    const AfeWeights* shared = nullptr;        // optional prebuilt weight tables
    const AfeWeights* shared_dual = nullptr;
};

inline cplx afe_central_value(const LInstance& li, double c, const AfeOptions& opt = {}) {
    if (!li.gamma.applicable)
        throw precondition_error("afe_central_value: instance has no functional equation");
    li.validate();
    if (c <= 0.5 || c > 2.0) throw precondition_error("afe_central_value: c outside (1/2, 2]");

    const double scale = std::sqrt(static_cast<double>(li.gamma.conductor));
    const double mirror = opt.kernel.mirror_scale();
    const double ly_min = std::log(1.0 / scale) - 0.05;

    std::optional<AfeWeights> own, own_dual;
    const AfeWeights* W = opt.shared;
    if (!W) {
        own.emplace(li.gamma.mu, c, opt.kernel, ly_min, opt.ly_max);
        W = &*own;
    }
    bool mu_real = true;
    for (cplx m : li.gamma.mu)
        if (std::abs(m.imag()) > 1e-14) mu_real = false;
    const AfeWeights* Wd = opt.shared_dual;
    if (!Wd) {
        if (mu_real && mirror == 1.0) {
            Wd = W;
        } else {
            std::vector<cplx> mu_conj;
            for (cplx m : li.gamma.mu) mu_conj.push_back(std::conj(m));
            own_dual.emplace(std::move(mu_conj), c, opt.kernel, ly_min + std::log(mirror),
                             opt.ly_max + std::log(mirror));
            Wd = &*own_dual;
        }
    }

    // Truncation: past y_cut the weight envelope times the majorant density
    // (1+log n)^{m-1} n^{-1/2} integrates below tolerance.
    double ly_cut = opt.ly_max - 0.02;
    {
        double best = ly_cut;
        for (double ly = 2.0; ly < opt.ly_max - 0.02; ly += 0.1) {
            double n_here = scale * std::exp(ly);
            double density = std::pow(1.0 + std::log(std::max(2.0, n_here)),
                                      static_cast<double>(li.gamma.degree - 1));
            double tail = 3.0 * W->max_abs_from(std::exp(ly)) * density * 2.0 *
                          std::sqrt(scale * std::exp(opt.ly_max));
            if (tail < opt.tolerance) { best = ly; break; }
        }
        ly_cut = best;
    }
    int64_t n_max = static_cast<int64_t>(std::floor(scale * std::exp(ly_cut)));
    if (n_max > li.coefficient_limit())
        throw numeric_error("afe_central_value: coefficient table too short for tolerance");

    const cplx kappa = li.root_number;
    const int n_chunks = 64;
    std::vector<cplx> partial(static_cast<size_t>(n_chunks), cplx(0.0));
    parallel_chunks(n_max, n_chunks, [&](int ci, int64_t b, int64_t e) {
        cplx acc(0.0);
        for (int64_t n = std::max<int64_t>(1, b + 1); n <= e; ++n) {
            cplx an = li.coefficient(n);
            if (an == cplx(0.0)) continue;
            double rsqrt = 1.0 / std::sqrt(static_cast<double>(n));
            double y = static_cast<double>(n) / scale;
            acc += an * rsqrt * (*W)(y);
            acc += kappa * std::conj(an) * rsqrt * (*Wd)(y * mirror);
        }
        partial[static_cast<size_t>(ci)] = acc;
    });
    cplx out(0.0);
    for (cplx p : partial) out += p;
    return out;
}

// ---------------------------------------------------------------------------
// Family report: per instance C, |L(1/2)|, rho = |L| (log C)^{1-eps} / C^{1/4}.
// ---------------------------------------------------------------------------
struct SubconvexityRow {
    std::string label;
    double C = 0.0;
    cplx L_half;
    double convexity_value = 0.0;  // |L| / C^{1/4}
    double rho = 0.0;
};

struct SubconvexityReport {
    std::vector<SubconvexityRow> rows;
    double sup_rho = 0.0;
    std::string argmax_label;
};

inline SubconvexityReport weak_subconvexity_report(const std::vector<const LInstance*>& family,
                                                   double eps, double c = 1.0,
                                                   const AfeOptions& base_opt = {}) {
    SubconvexityReport rep;
    // Weight tables keyed by the mu multiset; Dirichlet families share one per
    // parity. The log-y range must span every conductor in the family.
    double ly_min = 0.0;
    for (const LInstance* li : family)
        ly_min = std::min(ly_min,
                          std::log(1.0 / std::sqrt(static_cast<double>(li->gamma.conductor))));
    ly_min -= 0.05;
    std::vector<std::pair<std::vector<cplx>, AfeWeights>> cache;
    for (const LInstance* li : family) {
        AfeOptions opt = base_opt;
        const AfeWeights* shared = nullptr;
        for (auto& [mu, w] : cache)
            if (mu == li->gamma.mu) { shared = &w; break; }
        if (!shared) {
            cache.emplace_back(li->gamma.mu,
                               AfeWeights(li->gamma.mu, c, opt.kernel, ly_min, opt.ly_max));
            shared = &cache.back().second;
        }
        opt.shared = shared;
        SubconvexityRow row;
        row.label = li->label;
        row.C = analytic_conductor(li->gamma);
        row.L_half = afe_central_value(*li, c, opt);
        double absL = std::abs(row.L_half);
        row.convexity_value = absL / std::pow(row.C, 0.25);
        row.rho = row.convexity_value * std::pow(std::log(row.C), 1.0 - eps);
        rep.rows.push_back(row);
        if (row.rho >= rep.sup_rho) {
            rep.sup_rho = row.rho;
            rep.argmax_label = row.label;
        }
    }
    return rep;
}

}  // namespace weaksub
