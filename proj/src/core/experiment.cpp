#include "core/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include "core/canonical.hpp"
#include "core/csvio.hpp"
#include "core/error.hpp"
#include "core/numeric.hpp"
#include "core/reference.hpp"

namespace fs = std::filesystem;

namespace lbex {

namespace {

constexpr const char* kToolName = "lbex";
constexpr const char* kToolVersion = "0.1.0";

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void spec_error(const std::string& source, int line, const std::string& what) {
    fail(ErrorKind::Syntax, source + ":" + std::to_string(line) + ": " + what);
}

InputSignal parse_experiment_input(std::istringstream& in, const ExperimentSpec& spec,
                                   const std::string& source, int line) {
    std::string kind;
    in >> kind;
    if (kind == "none") return InputSignal::none();
    if (kind == "model") {
        if (!spec.model) spec_error(source, line, "'input model' must come after the model line");
        if (spec.model->input.kind == InputSignal::Kind::None) {
            spec_error(source, line, "'input model' but the model declares no input signal");
        }
        return spec.model->input;
    }
    if (kind == "cosine") {
        std::string tok;
        Decimal amplitude;
        AngleStep step;
        bool have_a = false, have_ts = false;
        while (in >> tok) {
            if (tok.rfind("A=", 0) == 0) {
                amplitude = Decimal::parse(tok.substr(2));
                have_a = true;
            } else if (tok.rfind("Ts=", 0) == 0) {
                const std::string expr = tok.substr(3);
                if (expr.rfind("pi/", 0) == 0) {
                    step.pi_divisor = std::stoi(expr.substr(3));
                } else {
                    step.literal = Decimal::parse(expr);
                }
                have_ts = true;
            } else {
                spec_error(source, line, "unexpected token '" + tok + "' in cosine input");
            }
        }
        if (!have_a || !have_ts) {
            spec_error(source, line, "cosine input needs A=<dec> and Ts=<expr>");
        }
        return InputSignal::cosine(amplitude, step);
    }
    if (kind == "samples") {
        std::vector<double> values;
        std::string tok;
        while (in >> tok) values.push_back(parse_double(tok));
        if (values.empty()) spec_error(source, line, "samples input needs at least one value");
        return InputSignal::from_samples(std::move(values));
    }
    spec_error(source, line, "input must be none|model|cosine|samples, got '" + kind + "'");
}

void build_and_check_plans(ExperimentSpec& spec) {
    if (spec.plan_specs.size() < 2) {
        fail(ErrorKind::Validation, "experiment '" + spec.name +
                                        "' needs at least 2 extensions, has " +
                                        std::to_string(spec.plan_specs.size()));
    }
    spec.plans.clear();
    for (const auto& [label, text] : spec.plan_specs) {
        spec.plans.push_back(parse_plan_spec(spec.model, text, label));
    }
    for (size_t i = 0; i < spec.plans.size(); ++i) {
        for (size_t j = i + 1; j < spec.plans.size(); ++j) {
            if (structurally_equal(spec.plans[i], spec.plans[j])) {
                fail(ErrorKind::Validation,
                     "extensions '" + spec.plans[i].label + "' and '" + spec.plans[j].label +
                         "' are structurally identical; their pseudo-orbits would coincide and "
                         "the lower bound error would be trivially zero");
            }
            if (!equivalent(spec.plans[i], spec.plans[j])) {
                fail(ErrorKind::Validation, "extensions '" + spec.plans[i].label + "' and '" +
                                                spec.plans[j].label +
                                                "' are not algebraically equivalent");
            }
        }
    }
}

void check_run_parameters(const ExperimentSpec& spec) {
    if (!spec.model) fail(ErrorKind::Validation, "experiment has no model");
    if (spec.iterations < 1) {
        fail(ErrorKind::Validation,
             "iterations not set; add 'iterations <N>' to the experiment file or pass --iters");
    }
    if (!(spec.epsilon > 0.0)) fail(ErrorKind::Validation, "epsilon must be > 0");
    if (spec.ref_bits < 128) fail(ErrorKind::Validation, "ref_bits must be >= 128");
    if (spec.reps < 2) fail(ErrorKind::Validation, "reps must be >= 2");
    if (static_cast<int>(spec.seed.size()) != spec.model->seed_length()) {
        fail(ErrorKind::Validation, "model '" + spec.model->name + "' needs " +
                                        std::to_string(spec.model->seed_length()) +
                                        " seed values, experiment provides " +
                                        std::to_string(spec.seed.size()));
    }
    if (spec.model->has_input_terms() && spec.input.kind == InputSignal::Kind::None) {
        fail(ErrorKind::Validation,
             "model '" + spec.model->name +
                 "' has input terms; declare 'input ...' in the experiment file "
                 "(use 'input model' to adopt the model's declared signal)");
    }
}

std::string iso_utc_now() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string hex64(uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string input_to_text(const InputSignal& input) {
    switch (input.kind) {
        case InputSignal::Kind::None:
            return "none";
        case InputSignal::Kind::Cosine:
            return "cosine A=" + input.amplitude.text + " Ts=" + input.step.text();
        case InputSignal::Kind::Samples:
            return "samples[" + std::to_string(input.samples.size()) + "]";
    }
    return "?";
}

struct RunContext {
    const ExperimentSpec& spec;
    RunKind kind;
    fs::path out_dir;
    ExperimentResult result;

    void emit(const std::string& filename, const std::string& content) {
        const fs::path path = out_dir / filename;
        write_text_atomic(path.string(), content);
        result.outputs.push_back({path.string(), fnv1a64(content), content.size()});
    }
};

std::vector<PseudoOrbit> simulate_plans(const ExperimentSpec& spec, bool concurrent) {
    InitialConditions init{spec.seed, spec.input};
    std::vector<PseudoOrbit> orbits(spec.plans.size());
    if (concurrent && spec.plans.size() > 1) {
        std::vector<std::future<PseudoOrbit>> futures;
        futures.reserve(spec.plans.size());
        for (size_t i = 0; i < spec.plans.size(); ++i) {
            const EvaluationPlan* plan = &spec.plans[i];
            futures.push_back(std::async(std::launch::async, [&spec, plan, &init] {
                return simulate(*spec.model, *plan, init, spec.iterations);
            }));
        }
        for (size_t i = 0; i < futures.size(); ++i) orbits[i] = futures[i].get();
    } else {
        for (size_t i = 0; i < spec.plans.size(); ++i) {
            orbits[i] = simulate(*spec.model, spec.plans[i], init, spec.iterations);
        }
    }
    return orbits;
}

void write_manifest(RunContext& ctx) {
    nlohmann::json j;
    j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    j["command"] = run_kind_name(ctx.kind);
    j["created_utc"] = iso_utc_now();
    j["experiment"] = {{"name", ctx.spec.name},
                       {"path", ctx.spec.source_path},
                       {"snapshot", ctx.spec.source_text}};

    nlohmann::json plans = nlohmann::json::object();
    for (const EvaluationPlan& p : ctx.spec.plans) plans[p.label] = plan_signature(p);
    nlohmann::json seeds = nlohmann::json::array();
    for (double s : ctx.spec.seed) seeds.push_back(format_double(s));
    j["resolved"] = {{"model", ctx.spec.model->name},
                     {"model_path", ctx.spec.model_path},
                     {"plans", plans},
                     {"seed", seeds},
                     {"input", input_to_text(ctx.spec.input)},
                     {"iterations", ctx.spec.iterations},
                     {"epsilon", ctx.spec.epsilon},
                     {"ref_bits", ctx.spec.ref_bits},
                     {"reps", ctx.spec.reps},
                     {"warmup", ctx.spec.warmup}};
    j["fp_contract"] = {{"format", "IEEE-754 binary64"},
                        {"rounding", "round-to-nearest-even"},
                        {"fma_contraction", "disabled"},
                        {"evaluation_order", "plan tape, strictly sequenced"}};

    nlohmann::json outputs = nlohmann::json::array();
    for (const OutputRecord& rec : ctx.result.outputs) {
        outputs.push_back({{"path", fs::path(rec.path).filename().string()},
                           {"fnv1a64", hex64(rec.fnv1a64)},
                           {"bytes", rec.bytes}});
    }
    j["outputs"] = outputs;

    if (ctx.result.horizon) {
        const HorizonReport& h = *ctx.result.horizon;
        j["horizon"] = {{"n", h.horizon ? nlohmann::json(*h.horizon) : nlohmann::json()},
                        {"trigger", horizon_trigger_name(h.triggered_by)},
                        {"epsilon", h.epsilon}};
    }
    if (ctx.result.growth_rate) j["lbe_growth_rate_bits_per_iter"] = *ctx.result.growth_rate;
    if (ctx.result.verification) {
        const VerificationReport& v = *ctx.result.verification;
        j["verification"] = {{"window", v.window},
                             {"trusted", ctx.result.trusted},
                             {"violations", v.violations},
                             {"min_margin", v.min_margin}};
    }
    if (!ctx.result.timings.empty()) {
        nlohmann::json timing = nlohmann::json::array();
        for (const TimingStats& t : ctx.result.timings) {
            timing.push_back({{"task", t.task_id},
                              {"reps", t.repetitions},
                              {"mean_s", t.mean_s},
                              {"std_s", t.std_s}});
        }
        j["timing"] = timing;
    }

    const fs::path path = ctx.out_dir / "manifest.json";
    write_text_atomic(path.string(), j.dump(2) + "\n");
    ctx.result.manifest_path = path.string();
}

[[noreturn]] void throw_overflow(RunContext& ctx, const std::vector<PseudoOrbit>& orbits) {
    write_manifest(ctx);
    for (const PseudoOrbit& o : orbits) {
        if (o.overflow) fail(ErrorKind::Overflow, o.overflow->message);
    }
    fail(ErrorKind::Internal, "overflow flagged but no diagnostic found");
}

// Growth rate over the positive LBE entries before the horizon (or the whole
// series when the criterion never fires). Absent when nothing can be fitted.
std::optional<double> fit_growth_rate(const LbeSeries& lbe, const HorizonReport& horizon) {
    long hi = horizon.horizon ? *horizon.horizon : static_cast<long>(lbe.values.size());
    if (hi < 2) return std::nullopt;
    long positives = 0;
    for (long i = 0; i < hi; ++i) {
        if (lbe.values[static_cast<size_t>(i)] > 0.0) ++positives;
    }
    if (positives == 0) return 0.0;  // flat-zero series
    if (positives == 1) return std::nullopt;
    return lbe_growth_rate(lbe, 0, hi);
}

}  // namespace

std::string ExperimentSpec::effective_output_dir() const {
    if (!output_dir.empty()) return output_dir;
    return (fs::path("out") / name).string();
}

const char* run_kind_name(RunKind kind) {
    switch (kind) {
        case RunKind::Simulate: return "simulate";
        case RunKind::Lbe: return "lbe";
        case RunKind::Horizon: return "horizon";
        case RunKind::Verify: return "verify";
        case RunKind::Bench: return "bench";
    }
    return "?";
}

ExperimentSpec load_experiment_text(const std::string& text, const std::string& base_dir,
                                    const std::string& source_label) {
    ExperimentSpec spec;
    spec.source_path = source_label;
    spec.source_text = text;

    std::istringstream stream(text);
    std::string raw;
    int line = 0;
    bool saw_input = false;
    std::set<std::string> seen;
    while (std::getline(stream, raw)) {
        ++line;
        const size_t hash = raw.find('#');
        std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (content.empty()) continue;
        std::istringstream in(content);
        std::string key;
        in >> key;
        if (key != "extension" && !seen.insert(key).second) {
            spec_error(source_label, line, "duplicate key '" + key + "'");
        }

        if (key == "name") {
            std::string rest;
            std::getline(in, rest);
            spec.name = trim(rest);
        } else if (key == "model") {
            std::string rest;
            std::getline(in, rest);
            rest = trim(rest);
            if (rest.empty()) spec_error(source_label, line, "missing model path");
            fs::path p(rest);
            if (p.is_relative()) p = fs::path(base_dir) / p;
            spec.model_path = p.string();
            spec.model = std::make_shared<PolynomialModel>(parse_model_file(spec.model_path));
        } else if (key == "extension") {
            std::string rest;
            std::getline(in, rest);
            rest = trim(rest);
            const size_t eq = rest.find('=');
            if (eq == std::string::npos) {
                spec_error(source_label, line, "expected 'extension <Name> = <plan spec>'");
            }
            const std::string label = trim(rest.substr(0, eq));
            const std::string plan_text = trim(rest.substr(eq + 1));
            if (label.empty() || plan_text.empty()) {
                spec_error(source_label, line, "expected 'extension <Name> = <plan spec>'");
            }
            for (const auto& [existing, unused] : spec.plan_specs) {
                if (existing == label) {
                    spec_error(source_label, line, "duplicate extension name '" + label + "'");
                }
            }
            spec.plan_specs.emplace_back(label, plan_text);
        } else if (key == "seed") {
            std::string tok;
            while (in >> tok) spec.seed.push_back(parse_double(tok));
            if (spec.seed.empty()) spec_error(source_label, line, "seed needs at least one value");
        } else if (key == "input") {
            spec.input = parse_experiment_input(in, spec, source_label, line);
            saw_input = true;
        } else if (key == "iterations") {
            long n = 0;
            if (!(in >> n)) spec_error(source_label, line, "iterations needs an integer");
            spec.iterations = n;
        } else if (key == "epsilon") {
            std::string tok;
            in >> tok;
            spec.epsilon = parse_double(tok);
        } else if (key == "ref_bits") {
            if (!(in >> spec.ref_bits)) spec_error(source_label, line, "ref_bits needs an integer");
        } else if (key == "reps") {
            if (!(in >> spec.reps)) spec_error(source_label, line, "reps needs an integer");
        } else if (key == "warmup") {
            std::string v;
            in >> v;
            if (v == "on") spec.warmup = true;
            else if (v == "off") spec.warmup = false;
            else spec_error(source_label, line, "warmup must be on|off");
        } else if (key == "output") {
            std::string rest;
            std::getline(in, rest);
            spec.output_dir = trim(rest);
        } else {
            spec_error(source_label, line, "unknown key '" + key + "'");
        }
    }

    if (!spec.model) fail(ErrorKind::Validation, source_label + ": experiment declares no model");
    if (spec.name.empty()) spec.name = spec.model->name;
    if (!saw_input) spec.input = InputSignal::none();
    if (spec.seed.empty()) {
        fail(ErrorKind::Validation,
             source_label + ": experiment must declare initial conditions ('seed ...')");
    }
    build_and_check_plans(spec);
    return spec;
}

ExperimentSpec load_experiment_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open experiment file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_experiment_text(buf.str(), fs::path(path).parent_path().string(), path);
}

ExperimentResult run_experiment(const ExperimentSpec& spec, RunKind kind) {
    check_run_parameters(spec);
    RunContext ctx{spec, kind, fs::path(spec.effective_output_dir()), {}};
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec) fail(ErrorKind::Io, "cannot create output directory " + ctx.out_dir.string());

    if (kind == RunKind::Bench) {
        // Timing runs are strictly serialized and do no file IO inside the
        // timed region; the pipeline is simulate-all + LBE + horizon scan.
        volatile double sink = 0.0;
        auto pipeline = [&] {
            std::vector<PseudoOrbit> orbits = simulate_plans(spec, /*concurrent=*/false);
            for (const PseudoOrbit& o : orbits) {
                if (o.overflow) fail(ErrorKind::Overflow, o.overflow->message);
            }
            std::vector<const PseudoOrbit*> ptrs;
            ptrs.reserve(orbits.size());
            for (const PseudoOrbit& o : orbits) ptrs.push_back(&o);
            LbeSeries lbe = orbits.size() == 2 ? lower_bound_error(orbits[0], orbits[1])
                                               : lbe_multi(ptrs);
            HorizonReport horizon = reliability_horizon(orbits[0], orbits[1], spec.epsilon);
            sink = sink + lbe.values.back() +
                   static_cast<double>(horizon.horizon.value_or(-1));
        };
        TimingStats stats = time_task(spec.name, pipeline, spec.reps, spec.warmup);
        ctx.result.timings.push_back(stats);

        std::ostringstream samples;
        samples << "task,rep,seconds\n";
        for (size_t r = 0; r < stats.samples.size(); ++r) {
            samples << stats.task_id << "," << r << "," << format_double(stats.samples[r]) << "\n";
        }
        ctx.emit("bench_samples.csv", samples.str());
        std::ostringstream summary;
        summary << "task,reps,mean_s,std_s\n";
        summary << stats.task_id << "," << stats.repetitions << "," << format_double(stats.mean_s)
                << "," << format_double(stats.std_s) << "\n";
        ctx.emit("bench_summary.csv", summary.str());
        write_manifest(ctx);
        return ctx.result;
    }

    std::vector<PseudoOrbit> orbits = simulate_plans(spec, /*concurrent=*/true);
    bool overflowed = false;
    for (const PseudoOrbit& o : orbits) overflowed = overflowed || o.overflow.has_value();

    if (kind == RunKind::Simulate || overflowed) {
        for (size_t i = 0; i < orbits.size(); ++i) {
            ctx.emit("orbit_" + spec.plans[i].label + ".csv", orbit_csv(orbits[i]));
        }
        if (overflowed) throw_overflow(ctx, orbits);
        write_manifest(ctx);
        return ctx.result;
    }

    if (kind == RunKind::Lbe || kind == RunKind::Horizon) {
        for (size_t i = 0; i < orbits.size(); ++i) {
            ctx.emit("orbit_" + spec.plans[i].label + ".csv", orbit_csv(orbits[i]));
        }
        std::vector<const PseudoOrbit*> ptrs;
        ptrs.reserve(orbits.size());
        for (const PseudoOrbit& o : orbits) ptrs.push_back(&o);
        LbeSeries lbe = orbits.size() == 2 ? lower_bound_error(orbits[0], orbits[1])
                                           : lbe_multi(ptrs);
        // Relative precision and the stop criterion are defined on a pair;
        // with more than two extensions the first two are used.
        PrecisionSeries precision = relative_precision(orbits[0], orbits[1]);
        HorizonReport horizon = reliability_horizon(orbits[0], orbits[1], spec.epsilon);
        ctx.emit("lbe.csv", lbe_csv(lbe, precision));
        ctx.result.horizon = horizon;
        ctx.result.growth_rate = fit_growth_rate(lbe, horizon);
        write_manifest(ctx);
        return ctx.result;
    }

    // Verify
    InitialConditions init{spec.seed, spec.input};
    ReferenceOrbit reference = simulate_reference(*spec.model, init, spec.iterations, spec.ref_bits);
    ctx.result.trusted = trusted_prefix(*spec.model, init, spec.iterations, spec.ref_bits);
    const long window =
        std::min<long>(static_cast<long>(orbits[0].values.size()), spec.iterations);
    VerificationReport report =
        verify_theorem(reference, ctx.result.trusted, orbits[0], orbits[1], window);
    ctx.emit("verify.csv", verify_csv(reference, orbits[0], orbits[1], report));
    ctx.result.verification = report;
    write_manifest(ctx);
    return ctx.result;
}

}  // namespace lbex
