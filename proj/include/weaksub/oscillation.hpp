#pragma once

// Oscillation functionals over the j-lattice:
//   O_l(x,w)  = sum_{j<=l} (-1)^{|j|} binom(l,j) w^{j.(1+i tau)} S(x / w^{|j|}),
// the log-weighted variant with S~ in place of S, the damped series
//   F_l(s) = F(s) prod_j (1 - w^{1+i tau_j - s})^{l_j},
// and the exact recursion / decomposition residuals that the alternating sums
// satisfy before any asymptotic bounding.

#include <algorithm>
#include <cmath>
#include <vector>

#include "weaksub/series.hpp"
#include "weaksub/tauselect.hpp"

namespace weaksub {

struct OscillationSpec {
    std::vector<int> ell;        // exponent vector, size R
    double w = 1.0;              // ratio, >= 1
    std::vector<double> taus;    // frequencies, size R
    const CoeffTable* ct = nullptr;

    OscillationSpec(std::vector<int> l, double w_, std::vector<double> t, const CoeffTable& c)
        : ell(std::move(l)), w(w_), taus(std::move(t)), ct(&c) {
        if (ell.size() != taus.size())
            throw precondition_error("OscillationSpec: ell/taus size mismatch");
        if (w < 1.0) throw precondition_error("OscillationSpec: w < 1");
        for (int l_ : ell)
            if (l_ < 0) throw precondition_error("OscillationSpec: negative exponent");
    }
    OscillationSpec(std::vector<int> l, double w_, const TauSet& ts, const CoeffTable& c)
        : OscillationSpec(std::move(l), w_, ts.taus, c) {
        if (static_cast<int>(ell.size()) != ts.R)
            throw precondition_error("OscillationSpec: R mismatch with TauSet");
    }
};

inline int64_t binom_vector(const std::vector<int>& ell, const std::vector<int>& j) {
    if (ell.size() != j.size()) throw precondition_error("binom_vector: size mismatch");
    double prod = 1.0;
    for (size_t i = 0; i < ell.size(); ++i) {
        if (j[i] < 0 || j[i] > ell[i])
            throw precondition_error("binom_vector: component out of range");
        prod *= binomial(ell[i], j[i]);
    }
    if (prod > 9.0e18) throw precondition_error("binom_vector: overflow");
    return static_cast<int64_t>(std::llround(prod));
}

namespace detail {

// Odometer walk over 0 <= j <= ell, calling body(j, sign, binom, wsum_exponent)
// where wsum_exponent = sum_r j_r (1 + i tau_r) and |j| = sum j_r.
template <typename Body>
inline void for_each_lattice(const std::vector<int>& ell, const std::vector<double>& taus,
                             Body&& body) {
    const size_t R = ell.size();
    std::vector<int> j(R, 0);
    for (;;) {
        int total = 0;
        double sign = 1.0;
        double bin = 1.0;
        cplx expo(0.0);
        for (size_t r = 0; r < R; ++r) {
            total += j[r];
            bin *= binomial(ell[r], j[r]);
            expo += static_cast<double>(j[r]) * cplx(1.0, taus[r]);
        }
        sign = (total % 2 == 0) ? 1.0 : -1.0;
        body(j, total, sign * bin, expo);
        // advance odometer
        size_t r = 0;
        while (r < R && j[r] == ell[r]) { j[r] = 0; ++r; }
        if (r == R) break;
        ++j[r];
    }
}

}  // namespace detail

// Generic lattice sum with a per-scale evaluator: term(y, weight) where
// y = x / w^{|j|} and weight = (-1)^{|j|} binom(l,j) w^{j.(1+i tau)}.
template <typename Scale>
inline cplx lattice_sum(const OscillationSpec& spec, double x, Scale&& scale) {
    if (spec.ell.empty()) return scale(x);  // empty product: single term S(x)
    cplx acc(0.0);
    const double logw = std::log(spec.w);
    // exact repeated-multiplication powers keep x / w^{|j|} stable at integer
    // boundaries (floor feeds the prefix lookup)
    int lsum = 0;
    for (int l : spec.ell) lsum += l;
    std::vector<double> wpow(static_cast<size_t>(lsum) + 1, 1.0);
    for (int i = 1; i <= lsum; ++i) wpow[static_cast<size_t>(i)] = wpow[static_cast<size_t>(i - 1)] * spec.w;
    detail::for_each_lattice(spec.ell, spec.taus,
                             [&](const std::vector<int>&, int total, double signed_binom,
                                 cplx expo) {
        double y = x / wpow[static_cast<size_t>(total)];
        cplx weight = signed_binom * std::exp(expo * logw);
        acc += weight * scale(y);
    });
    return acc;
}

inline cplx oscillation(const OscillationSpec& spec, double x) {
    if (x > static_cast<double>(spec.ct->limit) + 0.5)
        throw precondition_error("oscillation: coefficient table too short");
    return lattice_sum(spec, x, [&](double y) { return spec.ct->partial_sum(std::max(y, 0.0)); });
}

inline cplx oscillation_tilde(const OscillationSpec& spec, double x) {
    if (x > static_cast<double>(spec.ct->limit) + 0.5)
        throw precondition_error("oscillation_tilde: coefficient table too short");
    return lattice_sum(spec, x,
                       [&](double y) { return spec.ct->log_weighted_sum(std::max(y, 0.0)); });
}

// int_1^x O_l(t,w) dt/t in closed form: per scale y, the integral of S(t)/t is
// (log y) S(y) - S~(y) exactly.
inline cplx oscillation_log_integral(const OscillationSpec& spec, double x) {
    return lattice_sum(spec, x, [&](double y) {
        return y < 1.0 ? cplx(0.0) : spec.ct->log_ratio_sum(y);
    });
}

// F_l(s) = F(s) prod_j (1 - w^{1 + i tau_j - s})^{l_j}.
inline cplx damped_series_Fell(const SeriesEvaluator& ev, const OscillationSpec& spec, cplx s) {
    cplx F = ev.evaluate_F(s).first;
    const double logw = std::log(spec.w);
    for (size_t r = 0; r < spec.ell.size(); ++r) {
        cplx factor = 1.0 - std::exp((cplx(1.0, spec.taus[r]) - s) * logw);
        for (int i = 0; i < spec.ell[r]; ++i) F *= factor;
    }
    return F;
}

namespace detail {

// sum_k l_k w^{1+i tau_k} (log w) O_{l - e_k}(x/w, w); the term produced by
// pulling |j| log w out of log x.
inline cplx lowered_correction(const OscillationSpec& spec, double x) {
    cplx acc(0.0);
    const double logw = std::log(spec.w);
    for (size_t k = 0; k < spec.ell.size(); ++k) {
        if (spec.ell[k] == 0) continue;
        std::vector<int> lowered = spec.ell;
        lowered[k] -= 1;
        OscillationSpec sub(lowered, spec.w, spec.taus, *spec.ct);
        acc += static_cast<double>(spec.ell[k]) * std::exp(cplx(1.0, spec.taus[k]) * logw) *
               logw * oscillation(sub, x / spec.w);
    }
    return acc;
}

}  // namespace detail

// |(log x) O_l(x,w) - sum_{d<=x} Lambda_f(d) O_l(x/d,w) - I(x)
//  + sum_k l_k w^{1+i tau_k} (log w) O_{l-e_k}(x/w,w)|, I(x) the closed-form
// log integral. Exact identity; the residual is pure rounding.
inline double logx_recursion_residual(const OscillationSpec& spec, const LambdaTable& lt,
                               const VonMangoldtTable& vt, double x) {
    if (x < 2.0) throw precondition_error("logx_recursion_residual: x < 2");
    cplx lhs = std::log(x) * oscillation(spec, x);
    cplx dsum(0.0);
    for (const auto& [q, lam] : lt.entries()) {
        if (static_cast<double>(q) > x) break;
        dsum += lam * vt.values[static_cast<size_t>(q)] *
                oscillation(spec, x / static_cast<double>(q));
    }
    cplx rhs = dsum + oscillation_log_integral(spec, x) - detail::lowered_correction(spec, x);
    return std::abs(lhs - rhs);
}

// |(log t) O_l(t,w) - O~_l(t,w) - I(t) + sum_k l_k w^{1+i tau_k}(log w)
//  O_{l-e_k}(t/w,w)|: the (log z) S(z) = S~(z) + int S dy/y decomposition
// pushed through the lattice.
inline double log_decomposition_residual(const OscillationSpec& spec, double t) {
    if (t < 2.0) throw precondition_error("log_decomposition_residual: t < 2");
    cplx lhs = std::log(t) * oscillation(spec, t);
    cplx rhs = oscillation_tilde(spec, t) + oscillation_log_integral(spec, t) -
               detail::lowered_correction(spec, t);
    return std::abs(lhs - rhs);
}

// Example combination for f = d_k: sum_{j=0}^k (-1)^j binom(k,j) S(x/w^j)/(x/w^j).
// The mean values are polynomial of degree k-1 in log, so the k-th difference
// collapses to the error terms.
inline cplx divisor_mean_combination(const CoeffTable& dk_table, int k, double x, double w) {
    if (k < 2 || k > 4) throw precondition_error("divisor_mean_combination: k outside [2,4]");
    if (w < 1.0 || std::pow(w, k) > std::sqrt(x))
        throw precondition_error("divisor_mean_combination: w outside regime w^k <= sqrt(x)");
    if (x > static_cast<double>(dk_table.limit))
        throw precondition_error("divisor_mean_combination: table too short");
    cplx acc(0.0);
    for (int j = 0; j <= k; ++j) {
        double y = x / std::pow(w, j);
        double sign = (j % 2 == 0) ? 1.0 : -1.0;
        acc += sign * binomial(k, j) * dk_table.partial_sum(y) / y;
    }
    return acc;
}

}  // namespace weaksub
