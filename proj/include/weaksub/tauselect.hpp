#pragma once

// Successive-maxima frequency selection: scan |F(sigma0 + it)| on [-T, T],
// take the argmax, excise an exclusion interval of radius (log X)^{-1/R},
// repeat R times. Selected maxima are refined by parabolic interpolation
// inside their grid cell.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "weaksub/series.hpp"

namespace weaksub {

struct TauSet {
    std::vector<double> taus;    // refined maxima, selection order
    int R = 0;
    double T = 0.0;              // search half-width
    double exclusion_radius = 0.0;  // delta = (log X)^{-1/R}
    double X = 0.0;
    double sigma0 = 0.0;         // 1 + 1/log X
    std::vector<double> level_max;        // M_j = |F(sigma0 + i tau_j)|
    std::vector<double> level_exponent;   // log M_j / log log X
    std::vector<bool> at_endpoint;        // argmax landed on +-T
    double grid_step = 0.0;

    void validate() const {
        if (R < 1 || static_cast<int>(taus.size()) != R)
            throw precondition_error("TauSet: R mismatch");
        for (double t : taus)
            if (std::abs(t) > T + 1e-12) throw precondition_error("TauSet: |tau| > T");
        for (int j = 0; j < R; ++j)
            for (int k = j + 1; k < R; ++k)
                if (std::abs(taus[j] - taus[k]) < exclusion_radius - 1e-12)
                    throw precondition_error("TauSet: spacing below exclusion radius");
        for (int j = 1; j < R; ++j)
            if (level_max[j] > level_max[j - 1] * (1.0 + 1e-12))
                throw precondition_error("TauSet: level maxima not non-increasing");
    }
};

// One scan-profile row, for the select-tau CSV.
struct ScanSample {
    double t = 0.0;
    double absF = 0.0;
    bool excluded = false;
    int round = 0;  // 0 = never selected-excluded; else round that excised it
};

struct SuccessiveMaximaResult {
    TauSet taus;
    std::vector<ScanSample> profile;
};

// grid_step must be <= delta/10; T defaults to exp((log log X)^2).
// With a certifying evaluator the scan aborts when the truncation certificate
// exceeds 1% of the selected maximum.
inline SuccessiveMaximaResult successive_maxima(const SeriesEvaluator& ev, double X, int R,
                                                double grid_step,
                                                std::optional<double> T_override = std::nullopt,
                                                bool require_certified = false) {
    if (X < 10.0) throw precondition_error("successive_maxima: X < 10");
    if (R < 1) throw precondition_error("successive_maxima: R < 1");
    const double logX = std::log(X);
    const double delta = std::pow(logX, -1.0 / static_cast<double>(R));
    if (grid_step > delta / 10.0 + 1e-15)
        throw precondition_error("successive_maxima: grid_step > delta/10");
    const double llX = std::log(logX);
    double T = T_override ? *T_override : std::exp(llX * llX);
    const double sigma0 = 1.0 + 1.0 / logX;

    // Symmetric grid t_i = i * h, i in [-K, K]; keeps conjugate symmetry exact
    // for real coefficient tables.
    const double h = grid_step;
    const int64_t K = static_cast<int64_t>(std::floor(T / h + 1e-9));
    const int64_t count = 2 * K + 1;
    std::vector<cplx> vals = ev.grid_values(sigma0, -static_cast<double>(K) * h, h, count);
    std::vector<double> absv(vals.size());
    for (size_t i = 0; i < vals.size(); ++i) absv[i] = std::abs(vals[i]);

    double tail = ev.tail_bound(sigma0);  // NaN when uncertified

    std::vector<bool> excluded(vals.size(), false);
    std::vector<int> round_of(vals.size(), 0);

    TauSet out;
    out.R = R;
    out.T = T;
    out.exclusion_radius = delta;
    out.X = X;
    out.sigma0 = sigma0;
    out.grid_step = h;

    auto t_of = [&](int64_t i) { return (static_cast<double>(i) - static_cast<double>(K)) * h; };

    for (int r = 1; r <= R; ++r) {
        int64_t best = -1;
        for (int64_t i = 0; i < count; ++i) {
            if (excluded[static_cast<size_t>(i)]) continue;
            if (best < 0) { best = i; continue; }
            double a = absv[static_cast<size_t>(i)], b = absv[static_cast<size_t>(best)];
            if (a > b) { best = i; continue; }
            if (a == b) {
                // ties: smallest |t|, then positive t
                double ti = std::abs(t_of(i)), tb = std::abs(t_of(best));
                if (ti < tb || (ti == tb && t_of(i) > t_of(best))) best = i;
            }
        }
        if (best < 0)
            throw numeric_error("successive_maxima: exclusions exhausted the grid");

        double m = absv[static_cast<size_t>(best)];
        if (require_certified) {
            if (!(tail >= 0.0))
                throw numeric_error("successive_maxima: no tail certificate available");
            if (tail > 0.01 * m)
                throw numeric_error("successive_maxima: tail certificate exceeds 1% of |F|");
        }

        // Parabolic refinement inside the winning cell, clamped to half a step.
        double tau = t_of(best);
        if (best > 0 && best < count - 1) {
            double vm = absv[static_cast<size_t>(best - 1)];
            double v0 = m;
            double vp = absv[static_cast<size_t>(best + 1)];
            double den = vm - 2.0 * v0 + vp;
            if (den < 0.0) {
                double off = 0.5 * h * (vm - vp) / den;
                tau += std::clamp(off, -0.5 * h, 0.5 * h);
            }
        }
        out.taus.push_back(tau);
        out.level_max.push_back(m);
        out.level_exponent.push_back(std::log(std::max(m, 1e-300)) / llX);
        out.at_endpoint.push_back(best == 0 || best == count - 1);

        // Excise the open delta-interval; the extra half step absorbs the
        // refinement drift so pairwise spacing stays >= delta.
        double lo = tau - delta - 0.5 * h, hi = tau + delta + 0.5 * h;
        for (int64_t i = 0; i < count; ++i) {
            double t = t_of(i);
            if (t > lo && t < hi && !excluded[static_cast<size_t>(i)]) {
                excluded[static_cast<size_t>(i)] = true;
                round_of[static_cast<size_t>(i)] = r;
            }
        }
    }

    out.validate();

    SuccessiveMaximaResult res;
    res.taus = std::move(out);
    res.profile.reserve(vals.size());
    for (int64_t i = 0; i < count; ++i)
        res.profile.push_back({t_of(i), absv[static_cast<size_t>(i)],
                               excluded[static_cast<size_t>(i)], round_of[static_cast<size_t>(i)]});
    return res;
}

}  // namespace weaksub
