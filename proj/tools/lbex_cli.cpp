// lbex command line: simulate | lbe | horizon | verify | bench over
// experiment spec files. Thin front end; everything runs through the C API.

#include <lbex/lbex.h>

#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Options {
    std::vector<std::string> specs;
    std::optional<double> epsilon;
    std::optional<long> iters;
    std::optional<int> ref_bits;
    std::optional<int> reps;
    std::optional<std::string> out;
};

void add_common_options(CLI::App* cmd, Options& opts, bool multiple_specs) {
    auto* spec = cmd->add_option("--spec", opts.specs, "experiment spec file")->required();
    if (!multiple_specs) spec->expected(1);
    cmd->add_option("--epsilon", opts.epsilon, "stop-criterion threshold (default 0.001)");
    cmd->add_option("--iters", opts.iters, "iterations to simulate");
    cmd->add_option("--ref-bits", opts.ref_bits, "reference precision in bits (default 256)");
    cmd->add_option("--reps", opts.reps, "benchmark repetitions (default 100)");
    cmd->add_option("--out", opts.out, "output directory");
}

int status_exit_code(lbex_status status) {
    if (status == LBEX_OK) return 0;
    if (status == LBEX_E_OVERFLOW || status == LBEX_E_INTERNAL) return 1;
    return 2;  // spec/usage problems
}

int fail_with(lbex_status status) {
    std::fprintf(stderr, "lbex: error: %s\n", lbex_last_error());
    return status_exit_code(status);
}

lbex_status open_experiment(const std::string& path, const Options& opts,
                            lbex_experiment** out) {
    lbex_status status = lbex_experiment_open(path.c_str(), out);
    if (status != LBEX_OK) return status;
    if (opts.epsilon) lbex_experiment_set_epsilon(*out, *opts.epsilon);
    if (opts.iters) lbex_experiment_set_iterations(*out, *opts.iters);
    if (opts.ref_bits) lbex_experiment_set_ref_bits(*out, *opts.ref_bits);
    if (opts.reps) lbex_experiment_set_reps(*out, *opts.reps);
    if (opts.out) lbex_experiment_set_output_dir(*out, opts.out->c_str());
    return LBEX_OK;
}

void print_outputs(const lbex_experiment* experiment) {
    const int count = lbex_experiment_output_count(experiment);
    for (int i = 0; i < count; ++i) {
        std::printf("wrote %s\n", lbex_experiment_output_path(experiment, i));
    }
}

const char* trigger_name(int trigger) {
    switch (trigger) {
        case LBEX_TRIGGER_CRITERION: return "criterion";
        case LBEX_TRIGGER_DENOMINATOR_GUARD: return "denominator-guard";
        case LBEX_TRIGGER_ORBIT_END: return "orbit-end";
    }
    return "?";
}

int run_one(const std::string& command, const Options& opts) {
    lbex_experiment* experiment = nullptr;
    lbex_status status = open_experiment(opts.specs.front(), opts, &experiment);
    if (status != LBEX_OK) return fail_with(status);

    if (command == "simulate") {
        status = lbex_run_simulate(experiment);
        if (status == LBEX_OK) print_outputs(experiment);
    } else if (command == "lbe") {
        double growth = 0.0;
        status = lbex_run_lbe(experiment, &growth);
        if (status == LBEX_OK) {
            print_outputs(experiment);
            std::printf("%s: lbe growth rate %.4f bits/iteration (pre-horizon window)\n",
                        lbex_experiment_name(experiment), growth);
        }
    } else if (command == "horizon") {
        lbex_horizon_summary summary{};
        status = lbex_run_horizon(experiment, &summary);
        if (status == LBEX_OK) {
            print_outputs(experiment);
            if (summary.horizon >= 0) {
                std::printf("%s: horizon n=%ld trigger=%s epsilon=%g\n",
                            lbex_experiment_name(experiment), summary.horizon,
                            trigger_name(summary.trigger), summary.epsilon);
            } else {
                std::printf("%s: horizon none (criterion never fired, epsilon=%g)\n",
                            lbex_experiment_name(experiment), summary.epsilon);
            }
        }
    } else {  // verify
        lbex_verify_summary summary{};
        status = lbex_run_verify(experiment, &summary);
        if (status == LBEX_OK) {
            print_outputs(experiment);
            std::printf("%s: verified %ld iterations (trusted prefix %ld): %ld violations, "
                        "min margin %.3e\n",
                        lbex_experiment_name(experiment), summary.window, summary.trusted,
                        summary.violations, summary.min_margin);
        }
    }

    const int code = status == LBEX_OK ? 0 : fail_with(status);
    lbex_experiment_free(experiment);
    return code;
}

int run_bench(const Options& opts) {
    std::vector<lbex_timing_summary> summaries;
    std::vector<std::string> names;

    for (const std::string& path : opts.specs) {
        lbex_experiment* experiment = nullptr;
        lbex_status status = open_experiment(path, opts, &experiment);
        if (status != LBEX_OK) return fail_with(status);
        lbex_timing_summary summary{};
        status = lbex_run_bench(experiment, &summary);
        if (status != LBEX_OK) {
            const int code = fail_with(status);
            lbex_experiment_free(experiment);
            return code;
        }
        print_outputs(experiment);
        std::printf("%s: %d reps, mean %.6f s, std %.6f s\n",
                    lbex_experiment_name(experiment), summary.reps, summary.mean_s,
                    summary.std_s);
        summaries.push_back(summary);
        names.push_back(lbex_experiment_name(experiment));
        lbex_experiment_free(experiment);
    }

    if (summaries.size() >= 2) {
        std::vector<lbex_ratio_row> rows(summaries.size());
        lbex_status status =
            lbex_compare(summaries.data(), static_cast<int>(summaries.size()), rows.data());
        if (status != LBEX_OK) return fail_with(status);
        std::printf("\n%-24s %10s %18s\n", "task", "ratio", "[min, max]");
        for (size_t i = 0; i < rows.size(); ++i) {
            std::printf("%-24s %9.2fx [%6.2fx, %6.2fx]\n", names[i].c_str(), rows[i].mean_ratio,
                        rows[i].min_ratio, rows[i].max_ratio);
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lower-bound-error reliability analysis for polynomial NARMAX simulations"};
    app.set_version_flag("--version", lbex_version());
    app.require_subcommand(1);

    Options simulate_opts, lbe_opts, horizon_opts, verify_opts, bench_opts;
    CLI::App* simulate = app.add_subcommand("simulate", "free-run every extension, dump orbit CSVs");
    add_common_options(simulate, simulate_opts, false);
    CLI::App* lbe = app.add_subcommand("lbe", "compute the lower bound error series");
    add_common_options(lbe, lbe_opts, false);
    CLI::App* horizon = app.add_subcommand("horizon", "find the reliability horizon");
    add_common_options(horizon, horizon_opts, false);
    CLI::App* verify =
        app.add_subcommand("verify", "check the LBE theorem against a high-precision reference");
    add_common_options(verify, verify_opts, false);
    CLI::App* bench = app.add_subcommand("bench", "time the simulate+LBE pipeline");
    add_common_options(bench, bench_opts, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return 2;
    }

    if (simulate->parsed()) return run_one("simulate", simulate_opts);
    if (lbe->parsed()) return run_one("lbe", lbe_opts);
    if (horizon->parsed()) return run_one("horizon", horizon_opts);
    if (verify->parsed()) return run_one("verify", verify_opts);
    return run_bench(bench_opts);
}
