#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/bench.hpp"
#include "core/lbe.hpp"
#include "core/plan.hpp"
#include "core/simulate.hpp"

namespace lbex {

/// A fully resolved experiment: model, >= 2 mutually equivalent but
/// structurally distinct evaluation plans, initial conditions, and run
/// parameters. Loading validates everything up front so runs cannot fail on
/// spec problems half-way through.
struct ExperimentSpec {
    std::string name;
    std::string source_path;
    std::string source_text;  // verbatim snapshot for the manifest

    std::string model_path;
    std::shared_ptr<const PolynomialModel> model;
    std::vector<std::pair<std::string, std::string>> plan_specs;  // (label, spec text)
    std::vector<EvaluationPlan> plans;

    std::vector<double> seed;
    InputSignal input;

    long iterations = 0;  // must be set here or by an override before running
    double epsilon = 1e-3;
    int ref_bits = 256;
    int reps = 100;
    bool warmup = true;
    std::string output_dir;  // empty selects out/<name>

    std::string effective_output_dir() const;
};

ExperimentSpec load_experiment_file(const std::string& path);
ExperimentSpec load_experiment_text(const std::string& text, const std::string& base_dir,
                                    const std::string& source_label);

enum class RunKind { Simulate, Lbe, Horizon, Verify, Bench };

const char* run_kind_name(RunKind kind);

struct OutputRecord {
    std::string path;
    uint64_t fnv1a64 = 0;
    size_t bytes = 0;
};

struct ExperimentResult {
    std::vector<OutputRecord> outputs;
    std::string manifest_path;
    std::optional<HorizonReport> horizon;
    std::optional<double> growth_rate;  // bits/iteration over positive LBE entries
    std::optional<VerificationReport> verification;
    long trusted = 0;  // reference trust window (Verify runs)
    std::vector<TimingStats> timings;
};

/// Execute one subcommand pipeline: simulate the plans (concurrently, except
/// under Bench), derive the requested analyses, write CSVs and the run
/// manifest into the output directory. Throws Error(Overflow) after writing
/// partial outputs if an orbit left the finite range.
ExperimentResult run_experiment(const ExperimentSpec& spec, RunKind kind);

}  // namespace lbex
