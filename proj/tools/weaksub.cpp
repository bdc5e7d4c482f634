// weaksub: reproducible experiment runner for the multiplicative-function /
// L-function laboratory. See README.md for config keys and experiment list.

#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "weaksub/experiment.hpp"

int main(int argc, char** argv) {
    namespace we = weaksub::experiment;
    CLI::App app{"weaksub - oscillation, successive-maxima, Perron and central-value experiments"};
    app.set_help_all_flag("--help-all");

    std::string experiment, config_path, out_dir = ".";
    unsigned threads = 0;
    uint64_t seed = 1;
    bool validate_only = false;

    std::string exp_list;
    for (const auto& n : we::experiment_names()) exp_list += (exp_list.empty() ? "" : "|") + n;
    app.add_option("experiment", experiment, "one of " + exp_list)->required();
    app.add_option("--config", config_path, "flat key=value config file")->required();
    app.add_option("--out", out_dir, "output directory (default .)");
    app.add_option("--threads", threads, "worker cap (default: hardware)");
    app.add_option("--seed", seed, "rng seed for randomized families (default 1)");
    app.add_flag("--validate-only", validate_only, "list violated preconditions and exit");

    app.footer(
        "Outputs per experiment (CSV columns fixed, header row mandatory):\n"
        "  sieve:         sieve.csv (n, f_re, f_im, S_re, S_im)\n"
        "  oscillate:     oscillation.csv (x, w, ell, O_re, O_im, abs_over_x)\n"
        "  select-tau:    scan.csv (t, absF, excluded_flag, round)\n"
        "  verify-wr:     wr_windows.csv (x, window_sum), wr_report.json\n"
        "  perron:        perron_trace.csv (im_s, abs_integrand)\n"
        "  example22:     example22_trace.csv (im_s, abs_integrand)\n"
        "  central-value: instance.json (label, degree, conductor, mu, kappa, coeff_limit)\n"
        "  report:        report.csv (label, C, L_half_re, L_half_im, abs, convexity_value, rho)\n"
        "Every run writes manifest.json (config echo, version, outputs, wall time).\n"
        "WEAKSUB_OUT overrides the output directory. Exit codes: 0 ok, 2 config\n"
        "error, 3 precondition violation, 4 numeric failure.");

    CLI11_PARSE(app, argc, argv);

    if (threads > 0) weaksub::set_thread_count(threads);

    we::RunContext ctx;
    ctx.out_dir = out_dir;
    if (const char* env = std::getenv("WEAKSUB_OUT")) ctx.out_dir = env;
    ctx.seed = seed;
    ctx.validate_only = validate_only;

    try {
        we::Config cfg = we::Config::from_file(config_path);
        return we::run(experiment, cfg, ctx);
    } catch (const we::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return we::exit_config;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return we::exit_unexpected;
    }
}
