#pragma once

// Experiment runner: flat key=value configs, named experiments binding the
// numerical modules, CSV/JSON artifacts plus a run manifest. Outputs are
// deterministic for a fixed config and seed; the manifest's wall_time_ms is
// the one exempt field.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "weaksub/contour.hpp"
#include "weaksub/lfun.hpp"
#include "weaksub/oscillation.hpp"
#include "weaksub/tauselect.hpp"

namespace weaksub::experiment {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> n = {"sieve",    "oscillate",     "select-tau",
                                               "verify-wr", "perron",       "example22",
                                               "central-value", "report"};
    return n;
}

// ---------------------------------------------------------------------------
// Flat config file: `key = value` lines, '#' comments, blank lines ignored.
// ---------------------------------------------------------------------------
class Config {
  public:
    static Config from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw config_error("cannot read config file: " + path);
        Config cfg;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto trim = [](std::string s) {
                size_t b = s.find_first_not_of(" \t\r");
                size_t e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            if (trim(line).empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
            std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
            if (k.empty()) throw config_error("config line " + std::to_string(lineno) + ": empty key");
            cfg.kv_.emplace_back(k, v);
        }
        return cfg;
    }

    bool has(const std::string& k) const { return find(k) != nullptr; }

    std::string str(const std::string& k, const std::string& dflt = "") const {
        const std::string* v = find(k);
        return v ? *v : dflt;
    }
    double num(const std::string& k, double dflt) const {
        const std::string* v = find(k);
        if (!v) return dflt;
        try {
            size_t pos = 0;
            double x = std::stod(*v, &pos);
            if (pos != v->size()) throw config_error("");
            return x;
        } catch (...) {
            throw config_error("config key '" + k + "': not a number: " + *v);
        }
    }
    int64_t integer(const std::string& k, int64_t dflt) const {
        double x = num(k, static_cast<double>(dflt));
        if (x != std::floor(x)) throw config_error("config key '" + k + "': not an integer");
        return static_cast<int64_t>(x);
    }
    std::vector<double> num_list(const std::string& k) const {
        std::vector<double> out;
        const std::string* v = find(k);
        if (!v) return out;
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                out.push_back(std::stod(item));
            } catch (...) {
                throw config_error("config key '" + k + "': bad list element: " + item);
            }
        }
        return out;
    }
    std::vector<int> int_list(const std::string& k) const {
        std::vector<int> out;
        for (double x : num_list(k)) {
            if (x != std::floor(x)) throw config_error("config key '" + k + "': non-integer element");
            out.push_back(static_cast<int>(x));
        }
        return out;
    }

    const std::vector<std::pair<std::string, std::string>>& items() const { return kv_; }

  private:
    const std::string* find(const std::string& k) const {
        for (const auto& [key, val] : kv_)
            if (key == k) return &val;
        return nullptr;
    }
    std::vector<std::pair<std::string, std::string>> kv_;
};

// ---------------------------------------------------------------------------
// Output helpers: RFC-4180-style CSV (header row, CRLF, quoting when needed),
// floats at 17 significant digits.
// ---------------------------------------------------------------------------
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
        : out_(path, std::ios::binary) {
        if (!out_) throw config_error("cannot open output file: " + path.string());
        row(header);
    }
    void row(const std::vector<std::string>& fields) {
        for (size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << quoted(fields[i]);
        }
        out_ << "\r\n";
    }

  private:
    static std::string quoted(const std::string& s) {
        if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + "\"";
    }
    std::ofstream out_;
};

struct RunContext {
    std::filesystem::path out_dir = ".";
    uint64_t seed = 1;
    bool validate_only = false;
    std::vector<std::string> outputs;  // file names written, for the manifest
};

// ---------------------------------------------------------------------------
// Family tables: the coefficient sources experiments operate on.
// families: zeta | dk | zeta-shift | dirichlet | sym2 | random
// ---------------------------------------------------------------------------
struct FamilyData {
    std::shared_ptr<SpfSieve> sieve;
    std::shared_ptr<VonMangoldtTable> vt;
    LambdaTable lambda;
    CoeffTable coeffs;
    std::optional<LInstance> instance;
    std::string label;
};

inline FamilyData build_family(const Config& cfg, int64_t N, uint64_t seed) {
    std::string fam = cfg.str("family", "zeta");
    FamilyData fd;
    fd.sieve = std::make_shared<SpfSieve>(N);
    fd.vt = std::make_shared<VonMangoldtTable>(*fd.sieve);
    fd.label = fam;
    if (fam == "zeta") {
        fd.lambda = lambda_zeta(N, *fd.sieve);
        fd.coeffs = build_coefficients(fd.lambda, N, *fd.sieve);
    } else if (fam == "dk") {
        int k = static_cast<int>(cfg.integer("k", 2));
        if (k < 1 || k > 8) throw config_error("family dk: k outside [1, 8]");
        fd.lambda = lambda_dk(N, k, *fd.sieve);
        fd.coeffs = build_coefficients(fd.lambda, N, *fd.sieve);
        fd.label = "d" + std::to_string(k);
    } else if (fam == "random") {
        double bound = cfg.num("bound", 3.0);
        fd.lambda = lambda_random(N, bound, seed, *fd.sieve);
        fd.coeffs = build_coefficients(fd.lambda, N, *fd.sieve);
    } else if (fam == "zeta-shift") {
        auto taus = cfg.num_list("taus");
        auto ks = cfg.int_list("k_list");
        LInstance li = make_zeta_shift_product(taus, ks, N, *fd.sieve);
        fd.lambda = li.lambda_table;
        fd.coeffs = li.coeffs;
        fd.instance = std::move(li);
    } else if (fam == "dirichlet") {
        LInstance li = make_dirichlet(cfg.integer("q", 3), cfg.integer("index", 1), N, *fd.sieve);
        fd.lambda = li.lambda_table;
        fd.coeffs = li.coeffs;
        fd.label = li.label;
        fd.instance = std::move(li);
    } else if (fam == "sym2") {
        LInstance li = make_sym2_delta(N, *fd.sieve);
        fd.lambda = li.lambda_table;
        fd.coeffs = li.coeffs;
        fd.label = li.label;
        fd.instance = std::move(li);
    } else {
        throw config_error("unknown family: " + fam);
    }
    return fd;
}

// ---------------------------------------------------------------------------
// Per-experiment precondition diagnostics; empty list iff run would start.
// ---------------------------------------------------------------------------
inline std::vector<std::string> validate(const std::string& exp, const Config& cfg) {
    std::vector<std::string> diag;
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok) diag.push_back(msg);
    };
    bool known = false;
    for (const auto& n : experiment_names()) known |= (n == exp);
    if (!known) {
        diag.push_back("unknown experiment: " + exp);
        return diag;
    }
    int64_t N = cfg.integer("N", 10000);
    require(N >= 1, "N must be >= 1 (coeffs.build_coefficients rejects N < 1)");
    std::string fam = cfg.str("family", "zeta");
    if (fam == "dirichlet") {
        int64_t q = cfg.integer("q", 3);
        require(q >= 3 && q <= 10000, "dirichlet: q outside [3, 10^4]");
    }
    if (fam == "sym2") require(N <= 1000000, "sym2: N > 10^6");
    if (fam == "zeta-shift") {
        auto ks = cfg.int_list("k_list");
        int tot = 0;
        for (int k : ks) tot += k;
        require(!ks.empty() && tot <= 8, "zeta-shift: need k_list with sum k <= 8");
        require(cfg.num_list("taus").size() == ks.size(), "zeta-shift: taus/k_list length mismatch");
        require(N >= 1000, "zeta-shift: N >= 10^3");
    }
    if (exp == "oscillate") {
        double w = cfg.num("w", 2.0);
        require(w >= 1.0, "oscillation: w >= 1 required");
        auto ell = cfg.int_list("ell");
        auto taus = cfg.num_list("taus");
        require(ell.size() == taus.size(),
                "oscillation: R mismatch between taus and ell");
        for (int l : ell) require(l >= 0, "oscillation: ell components must be >= 0");
    }
    if (exp == "select-tau") {
        double X = cfg.num("X", 1e6);
        int64_t R = cfg.integer("R", 1);
        require(X >= 10.0, "successive_maxima: X >= 10 required");
        require(R >= 1, "successive_maxima: R >= 1 required");
        if (X >= 10.0 && R >= 1) {
            double delta = std::pow(std::log(X), -1.0 / static_cast<double>(R));
            require(cfg.num("grid_step", delta / 10.0) <= delta / 10.0 + 1e-15,
                    "successive_maxima: grid_step must be <= delta/10");
        }
    }
    if (exp == "perron") {
        double lambda = cfg.num("lambda", 1e-3);
        int64_t K = cfg.integer("K", 3);
        require(lambda > 0.0 && K >= 1, "kernel: lambda > 0 and K >= 1 required");
        require(lambda * static_cast<double>(K) < 1.0, "kernel: lambda*K < 1 (desk regime)");
        require(cfg.num("x", 100.0) > 0.0, "perron: x > 0");
    }
    if (exp == "example22") {
        auto ks = cfg.int_list("k_list");
        auto taus = cfg.num_list("taus");
        require(!ks.empty() && ks.size() == taus.size(), "example22: need matching taus/k_list");
        int tot = 0;
        for (int k : ks) tot += k;
        double w = cfg.num("w", 3.0), x = cfg.num("x", 1e4);
        require(w >= 1.0, "example22: w >= 1");
        if (tot > 0)
            require(std::pow(w, 2.0 * tot) <= x * (1 + 1e-9),
                    "example22: w outside regime w <= x^{1/(2 sum k)}");
    }
    if (exp == "central-value" || exp == "report") {
        require(fam == "dirichlet" || fam == "sym2" || exp == "report",
                "central-value: family must have a functional equation");
        double c = cfg.num("c", 1.0);
        require(c > 0.5 && c <= 2.0, "afe: c outside (1/2, 2]");
    }
    if (exp == "report") {
        require(cfg.integer("q_max", 200) >= 3, "report: q_max >= 3");
        require(cfg.num("eps", 0.5) > 0.0 && cfg.num("eps", 0.5) <= 1.0,
                "report: eps in (0, 1]");
    }
    return diag;
}

// ---------------------------------------------------------------------------
// Experiments. Each returns the ordered_json "result" block for the manifest.
// ---------------------------------------------------------------------------
namespace detail {

using njson = nlohmann::ordered_json;

inline std::filesystem::path out_file(RunContext& ctx, const std::string& name) {
    std::filesystem::create_directories(ctx.out_dir);
    ctx.outputs.push_back(name);
    return ctx.out_dir / name;
}

inline njson run_sieve(const Config& cfg, RunContext& ctx) {
    int64_t N = cfg.integer("N", 1000);
    FamilyData fd = build_family(cfg, N, ctx.seed);
    CsvWriter csv(out_file(ctx, "sieve.csv"), {"n", "f_re", "f_im", "S_re", "S_im"});
    for (int64_t n = 1; n <= N; ++n) {
        csv.row({std::to_string(n), fmt17(fd.coeffs.f(n).real()), fmt17(fd.coeffs.f(n).imag()),
                 fmt17(fd.coeffs.prefix[static_cast<size_t>(n)].real()),
                 fmt17(fd.coeffs.prefix[static_cast<size_t>(n)].imag())});
    }
    njson res;
    res["family"] = fd.label;
    res["N"] = N;
    res["S_N_re"] = fd.coeffs.prefix[static_cast<size_t>(N)].real();
    res["S_N_im"] = fd.coeffs.prefix[static_cast<size_t>(N)].imag();
    return res;
}

inline njson run_oscillate(const Config& cfg, RunContext& ctx) {
    int64_t N = cfg.integer("N", 100000);
    FamilyData fd = build_family(cfg, N, ctx.seed);
    auto ell = cfg.int_list("ell");
    auto taus = cfg.num_list("taus");
    double w = cfg.num("w", 2.0);
    OscillationSpec spec(ell, w, taus, fd.coeffs);
    auto grid = cfg.num_list("x_grid");  // min,max,factor
    double x0 = grid.size() > 0 ? grid[0] : 1000.0;
    double x1 = grid.size() > 1 ? grid[1] : static_cast<double>(N);
    double fac = grid.size() > 2 ? grid[2] : 2.0;
    std::string ellstr;
    for (size_t i = 0; i < ell.size(); ++i) ellstr += (i ? ";" : "") + std::to_string(ell[i]);
    CsvWriter csv(out_file(ctx, "oscillation.csv"),
                  {"x", "w", "ell", "O_re", "O_im", "abs_over_x"});
    njson res;
    double worst = 0.0;
    for (double x = x0; x <= x1 * (1 + 1e-12); x *= fac) {
        cplx O = oscillation(spec, x);
        csv.row({fmt17(x), fmt17(w), ellstr, fmt17(O.real()), fmt17(O.imag()),
                 fmt17(std::abs(O) / x)});
        worst = std::max(worst, std::abs(O) / x);
    }
    res["max_abs_over_x"] = worst;
    return res;
}

inline njson run_select_tau(const Config& cfg, RunContext& ctx) {
    int64_t N = cfg.integer("N", 100000);
    FamilyData fd = build_family(cfg, N, ctx.seed);
    double X = cfg.num("X", 1e6);
    int R = static_cast<int>(cfg.integer("R", 1));
    double delta = std::pow(std::log(X), -1.0 / R);
    double step = cfg.num("grid_step", delta / 10.0);
    std::optional<double> T_over;
    if (cfg.has("T_override")) T_over = cfg.num("T_override", 0.0);
    bool certified = cfg.integer("certified", 0) != 0;
    TailPolicy tp;
    tp.majorant_order = static_cast<int>(cfg.integer("majorant_order", 1));
    SeriesEvaluator ev(fd.coeffs, fd.lambda, *fd.vt, 0.5 / std::log(X), tp);
    auto result = successive_maxima(ev, X, R, step, T_over, certified);
    CsvWriter csv(out_file(ctx, "scan.csv"), {"t", "absF", "excluded_flag", "round"});
    for (const auto& s : result.profile)
        csv.row({fmt17(s.t), fmt17(s.absF), s.excluded ? "1" : "0", std::to_string(s.round)});
    njson res;
    res["sigma0"] = result.taus.sigma0;
    res["T"] = result.taus.T;
    res["exclusion_radius"] = result.taus.exclusion_radius;
    res["taus"] = result.taus.taus;
    res["level_max"] = result.taus.level_max;
    res["level_exponent"] = result.taus.level_exponent;
    // reference decay shape sqrt(1/j + (j-1)/(jR)); the prefactor A is the
    // family's window constant and is reported, not asserted
    std::vector<double> shape;
    for (int j = 1; j <= R; ++j)
        shape.push_back(std::sqrt(1.0 / j + static_cast<double>(j - 1) / (static_cast<double>(j) * R)));
    res["level_exponent_shape"] = shape;
    njson endpoints = njson::array();
    for (bool b : result.taus.at_endpoint) endpoints.push_back(b);
    res["at_endpoint"] = endpoints;
    return res;
}

inline njson run_verify_wr(const Config& cfg, RunContext& ctx) {
    int64_t N = cfg.integer("N", 100000);
    FamilyData fd = build_family(cfg, N, ctx.seed);
    double ceiling = cfg.num("ceiling", 2.0);
    std::optional<std::pair<double, double>> user;
    if (cfg.has("assert_A")) user = {{cfg.num("assert_A", 0.0), cfg.num("assert_A0", 0.0)}};
    WRReport rep = weak_ramanujan_verify(fd.lambda, *fd.vt, eadic_grid(N), ceiling, user);
    CsvWriter csv(out_file(ctx, "wr_windows.csv"), {"x", "window_sum"});
    for (const auto& w : rep.windows) csv.row({fmt17(w.x), fmt17(w.sum)});
    njson res;
    res["family"] = fd.label;
    res["fitted_A2"] = rep.fitted_A2;
    res["fitted_A0"] = rep.fitted_A0;
    res["ceiling"] = rep.ceiling;
    res["max_violation"] = rep.max_violation;
    std::ofstream js(out_file(ctx, "wr_report.json"), std::ios::binary);
    njson full = res;
    njson windows = njson::array();
    for (const auto& w : rep.windows) windows.push_back({{"x", w.x}, {"window_sum", w.sum}});
    full["windows"] = windows;
    js << full.dump(2) << "\n";
    return res;
}

inline njson run_perron(const Config& cfg, RunContext& ctx) {
    int64_t N = cfg.integer("N", 0);
    double x = cfg.num("x", 100.5);
    KernelSpec ks;
    if (cfg.str("preset", "") == "standard") {
        ks = kernel_preset(static_cast<int>(cfg.integer("m", 1)), x, cfg.num("A", 1.0));
    } else {
        ks.lambda = cfg.num("lambda", 1e-3);
        ks.K = static_cast<int>(cfg.integer("K", 3));
    }
    if (N == 0) N = static_cast<int64_t>(std::ceil(x * std::exp(ks.lambda * ks.K))) + 2;
    FamilyData fd = build_family(cfg, N, ctx.seed);
    SeriesEvaluator ev(fd.coeffs, fd.lambda, *fd.vt, 1.0 / std::log(std::max(x, 3.0)) * 0.99);
    LineIntegrator li;
    li.abscissa = cfg.num("c", 0.0);
    li.height_cut = cfg.num("height_cut", 2e5);
    li.tolerance = cfg.num("tolerance", 1e-4 * x);
    std::vector<std::pair<double, double>> trace;
    li.trace = &trace;
    cplx integral = smoothed_perron_sum(ev, x, ks, li);
    cplx direct = perron_direct_sum(fd.coeffs, x, ks);
    CsvWriter csv(out_file(ctx, "perron_trace.csv"), {"im_s", "abs_integrand"});
    for (auto& [t, v] : trace) csv.row({fmt17(t), fmt17(v)});
    njson res;
    res["lambda"] = ks.lambda;
    res["K"] = ks.K;
    res["integral_re"] = integral.real();
    res["integral_im"] = integral.imag();
    res["direct_re"] = direct.real();
    res["direct_im"] = direct.imag();
    res["abs_diff"] = std::abs(integral - direct);
    if (std::abs(integral - direct) > li.tolerance)
        throw numeric_error("perron: oracle mismatch above tolerance");
    return res;
}

inline njson run_example22(const Config& cfg, RunContext& ctx) {
    auto taus = cfg.num_list("taus");
    auto ks = cfg.int_list("k_list");
    double w = cfg.num("w", 3.0), x = cfg.num("x", 1e4);
    LineIntegrator li;
    li.abscissa = cfg.num("c", 0.0);  // 0 = default line 1 + 1/log x
    li.height_cut = cfg.num("height_cut", 300.0);
    li.tolerance = cfg.num("tolerance", 2e-6);
    std::vector<std::pair<double, double>> trace;
    li.trace = &trace;
    cplx integral = zeta_product_line_integral(taus, ks, w, x, li);
    njson res;
    res["integral_re"] = integral.real();
    res["integral_im"] = integral.imag();
    // cross-module oracle when a table is affordable
    if (cfg.integer("with_oracle", 1) != 0) {
        int64_t N = cfg.integer("N", static_cast<int64_t>(x));
        SpfSieve sieve(N);
        LInstance li_inst = make_zeta_shift_product(taus, ks, N, sieve);
        OscillationSpec spec(ks, w, taus, li_inst.coeffs);
        cplx o = oscillation(spec, x) / x;
        res["oscillation_over_x_re"] = o.real();
        res["oscillation_over_x_im"] = o.imag();
        res["abs_diff"] = std::abs(integral - o);
    }
    CsvWriter csv(out_file(ctx, "example22_trace.csv"), {"im_s", "abs_integrand"});
    for (auto& [t, v] : trace) csv.row({fmt17(t), fmt17(v)});
    return res;
}

inline njson instance_manifest(const LInstance& li) {
    njson m;
    m["label"] = li.label;
    m["degree"] = li.gamma.degree;
    m["conductor"] = li.gamma.conductor;
    njson mu = njson::array();
    for (cplx v : li.gamma.mu) mu.push_back({{"re", v.real()}, {"im", v.imag()}});
    m["mu"] = mu;
    m["kappa_re"] = li.root_number.real();
    m["kappa_im"] = li.root_number.imag();
    m["coeff_limit"] = li.coeffs.limit;
    return m;
}

inline njson run_central_value(const Config& cfg, RunContext& ctx) {
    int64_t N = cfg.integer("N", 30000);
    FamilyData fd = build_family(cfg, N, ctx.seed);
    if (!fd.instance) throw config_error("central-value: family has no L-instance");
    double c = cfg.num("c", 1.0);
    AfeOptions opt;
    opt.tolerance = cfg.num("tolerance", 1e-9);
    cplx L = afe_central_value(*fd.instance, c, opt);
    njson res = instance_manifest(*fd.instance);
    res["c"] = c;
    res["L_half_re"] = L.real();
    res["L_half_im"] = L.imag();
    std::ofstream js(out_file(ctx, "instance.json"), std::ios::binary);
    js << res.dump(2) << "\n";
    return res;
}

inline njson run_report(const Config& cfg, RunContext& ctx) {
    int64_t q_max = cfg.integer("q_max", 200);
    int64_t N = cfg.integer("N", 2000);
    double eps = cfg.num("eps", 0.5);
    double c = cfg.num("c", 1.0);
    SpfSieve sieve(std::max<int64_t>(N, q_max));
    std::vector<LInstance> family;
    for (int64_t q = 3; q <= q_max; ++q) {
        if (q % 4 == 2) continue;  // no primitive characters
        DirichletGroup G(q);
        for (int64_t idx : primitive_indices(G)) family.push_back(make_dirichlet(q, idx, N, sieve));
    }
    std::vector<const LInstance*> ptrs;
    for (const auto& li : family) ptrs.push_back(&li);
    AfeOptions opt;
    opt.tolerance = cfg.num("tolerance", 1e-8);
    SubconvexityReport rep = weak_subconvexity_report(ptrs, eps, c, opt);
    CsvWriter csv(out_file(ctx, "report.csv"),
                  {"label", "C", "L_half_re", "L_half_im", "abs", "convexity_value", "rho"});
    for (const auto& r : rep.rows)
        csv.row({r.label, fmt17(r.C), fmt17(r.L_half.real()), fmt17(r.L_half.imag()),
                 fmt17(std::abs(r.L_half)), fmt17(r.convexity_value), fmt17(r.rho)});
    njson res;
    res["family_size"] = rep.rows.size();
    res["eps"] = eps;
    res["sup_rho"] = rep.sup_rho;
    res["argmax_label"] = rep.argmax_label;
    return res;
}

}  // namespace detail

// Exit statuses: 0 ok, 2 config error, 3 precondition violation, 4 numeric
// failure, 1 unexpected.
enum ExitCode { exit_ok = 0, exit_unexpected = 1, exit_config = 2, exit_precondition = 3,
                exit_numeric = 4 };

inline int run(const std::string& exp, const Config& cfg, RunContext& ctx) {
    using namespace detail;
    auto t0 = std::chrono::steady_clock::now();
    auto diags = validate(exp, cfg);
    if (ctx.validate_only || !diags.empty()) {
        for (const auto& d : diags) std::fprintf(stderr, "precondition: %s\n", d.c_str());
        if (ctx.validate_only && diags.empty()) std::fprintf(stderr, "config ok\n");
        return diags.empty() ? exit_ok : exit_precondition;
    }
    njson result;
    try {
        if (exp == "sieve") result = run_sieve(cfg, ctx);
        else if (exp == "oscillate") result = run_oscillate(cfg, ctx);
        else if (exp == "select-tau") result = run_select_tau(cfg, ctx);
        else if (exp == "verify-wr") result = run_verify_wr(cfg, ctx);
        else if (exp == "perron") result = run_perron(cfg, ctx);
        else if (exp == "example22") result = run_example22(cfg, ctx);
        else if (exp == "central-value") result = run_central_value(cfg, ctx);
        else if (exp == "report") result = run_report(cfg, ctx);
        else return exit_config;
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config;
    } catch (const precondition_error& e) {
        std::fprintf(stderr, "precondition violation: %s\n", e.what());
        return exit_precondition;
    } catch (const numeric_error& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return exit_numeric;
    }
    auto t1 = std::chrono::steady_clock::now();

    njson manifest;
    manifest["experiment"] = exp;
    njson echo;
    for (const auto& [k, v] : cfg.items()) echo[k] = v;
    manifest["config"] = echo;
    manifest["version"] = "weaksub 0.1.0";
    manifest["seed"] = ctx.seed;
    manifest["threads"] = thread_count();
    manifest["outputs"] = ctx.outputs;
    manifest["result"] = result;
    manifest["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    std::ofstream mf(ctx.out_dir / "manifest.json", std::ios::binary);
    mf << manifest.dump(2) << "\n";
    return exit_ok;
}

}  // namespace weaksub::experiment
