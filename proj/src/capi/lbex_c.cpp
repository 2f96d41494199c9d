#include "lbex/lbex.h"

#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "core/bench.hpp"
#include "core/canonical.hpp"
#include "core/error.hpp"
#include "core/experiment.hpp"
#include "core/lbe.hpp"
#include "core/model.hpp"
#include "core/plan.hpp"
#include "core/reference.hpp"
#include "core/simulate.hpp"

namespace {

thread_local std::string g_last_error;

lbex_status kind_to_status(lbex::ErrorKind kind) {
    switch (kind) {
        case lbex::ErrorKind::Io: return LBEX_E_IO;
        case lbex::ErrorKind::Syntax: return LBEX_E_SYNTAX;
        case lbex::ErrorKind::Validation: return LBEX_E_VALIDATION;
        case lbex::ErrorKind::Mismatch: return LBEX_E_MISMATCH;
        case lbex::ErrorKind::Overflow: return LBEX_E_OVERFLOW;
        case lbex::ErrorKind::Range: return LBEX_E_RANGE;
        case lbex::ErrorKind::Internal: return LBEX_E_INTERNAL;
    }
    return LBEX_E_INTERNAL;
}

template <typename Fn>
lbex_status guarded(Fn&& fn) noexcept {
    try {
        fn();
        g_last_error.clear();
        return LBEX_OK;
    } catch (const lbex::Error& e) {
        g_last_error = e.what();
        return kind_to_status(e.kind());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return LBEX_E_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return LBEX_E_INTERNAL;
    }
}

lbex_status require(bool ok, const char* message) noexcept {
    if (ok) return LBEX_OK;
    g_last_error = message;
    return LBEX_E_RANGE;
}

lbex_status copy_out(const std::string& text, char* buf, size_t cap) noexcept {
    if (buf == nullptr || cap == 0) {
        g_last_error = "output buffer is null/empty";
        return LBEX_E_RANGE;
    }
    if (text.size() + 1 > cap) {
        g_last_error = "output buffer too small: need " + std::to_string(text.size() + 1) +
                       " bytes, have " + std::to_string(cap);
        return LBEX_E_RANGE;
    }
    std::memcpy(buf, text.c_str(), text.size() + 1);
    return LBEX_OK;
}

}  // namespace

struct lbex_model {
    std::shared_ptr<const lbex::PolynomialModel> model;
};

struct lbex_plan {
    lbex::EvaluationPlan plan;
};

struct lbex_orbit {
    lbex::PseudoOrbit orbit;
    int reference_bits = 0;  // > 0 when this is a rounded high-precision orbit
};

struct lbex_series {
    lbex::LbeSeries lbe;
    lbex::PrecisionSeries precision;
};

struct lbex_experiment {
    lbex::ExperimentSpec spec;
    std::vector<std::string> outputs;
};

namespace {

thread_local std::string g_output_dir_scratch;

void record_outputs(lbex_experiment* experiment, const lbex::ExperimentResult& result) {
    experiment->outputs.clear();
    for (const lbex::OutputRecord& rec : result.outputs) experiment->outputs.push_back(rec.path);
    if (!result.manifest_path.empty()) experiment->outputs.push_back(result.manifest_path);
}

}  // namespace

extern "C" {

const char* lbex_version(void) { return "0.1.0"; }

const char* lbex_last_error(void) { return g_last_error.c_str(); }

/* ---------------- models ---------------- */

lbex_status lbex_model_parse_file(const char* path, lbex_model** out) {
    if (lbex_status s = require(path && out, "null argument"); s) return s;
    return guarded([&] {
        *out = new lbex_model{
            std::make_shared<const lbex::PolynomialModel>(lbex::parse_model_file(path))};
    });
}

lbex_status lbex_model_parse_text(const char* text, lbex_model** out) {
    if (lbex_status s = require(text && out, "null argument"); s) return s;
    return guarded([&] {
        *out = new lbex_model{
            std::make_shared<const lbex::PolynomialModel>(lbex::parse_model(text))};
    });
}

void lbex_model_free(lbex_model* model) { delete model; }

const char* lbex_model_name(const lbex_model* model) {
    return model ? model->model->name.c_str() : "";
}
int lbex_model_term_count(const lbex_model* model) {
    return model ? static_cast<int>(model->model->terms.size()) : 0;
}
int lbex_model_seed_length(const lbex_model* model) {
    return model ? model->model->seed_length() : 0;
}
int lbex_model_max_output_lag(const lbex_model* model) {
    return model ? model->model->max_output_lag : -1;
}
int lbex_model_max_input_lag(const lbex_model* model) {
    return model ? model->model->max_input_lag : -1;
}
int lbex_model_degree(const lbex_model* model) { return model ? model->model->degree : 0; }

lbex_status lbex_model_serialize(const lbex_model* model, char* buf, size_t cap) {
    if (lbex_status s = require(model != nullptr, "null model"); s) return s;
    std::string text;
    if (lbex_status s = guarded([&] { text = lbex::serialize_model(*model->model); }); s) return s;
    return copy_out(text, buf, cap);
}

lbex_status lbex_model_validate(const lbex_model* model, char* buf, size_t cap, int* count) {
    if (lbex_status s = require(model && count, "null argument"); s) return s;
    return guarded([&] {
        std::vector<std::string> diagnostics = lbex::validate(*model->model);
        *count = static_cast<int>(diagnostics.size());
        if (buf && cap > 0) {
            std::string joined;
            for (size_t i = 0; i < diagnostics.size(); ++i) {
                if (i) joined += '\n';
                joined += diagnostics[i];
            }
            if (copy_out(joined, buf, cap) != LBEX_OK) {
                lbex::fail(lbex::ErrorKind::Range, g_last_error);
            }
        }
    });
}

lbex_status lbex_model_input_value(const lbex_model* model, long n, double* out) {
    if (lbex_status s = require(model && out, "null argument"); s) return s;
    return guarded([&] { *out = lbex::input_value(model->model->input, n); });
}

/* ---------------- plans ---------------- */

lbex_status lbex_plan_canonical(const lbex_model* model, const char* label, lbex_plan** out) {
    if (lbex_status s = require(model && out, "null argument"); s) return s;
    return guarded([&] {
        *out = new lbex_plan{lbex::canonical_plan(model->model, label ? label : "canonical")};
    });
}

lbex_status lbex_plan_parse(const lbex_model* model, const char* spec, const char* label,
                            lbex_plan** out) {
    if (lbex_status s = require(model && spec && out, "null argument"); s) return s;
    return guarded([&] {
        *out = new lbex_plan{lbex::parse_plan_spec(model->model, spec, label ? label : spec)};
    });
}

void lbex_plan_free(lbex_plan* plan) { delete plan; }

const char* lbex_plan_label(const lbex_plan* plan) {
    return plan ? plan->plan.label.c_str() : "";
}

lbex_status lbex_plan_signature(const lbex_plan* plan, char* buf, size_t cap) {
    if (lbex_status s = require(plan != nullptr, "null plan"); s) return s;
    std::string text;
    if (lbex_status s = guarded([&] { text = lbex::plan_signature(plan->plan); }); s) return s;
    return copy_out(text, buf, cap);
}

lbex_status lbex_plan_equivalent(const lbex_plan* a, const lbex_plan* b, int* out) {
    if (lbex_status s = require(a && b && out, "null argument"); s) return s;
    return guarded([&] { *out = lbex::equivalent(a->plan, b->plan) ? 1 : 0; });
}

/* ---------------- simulation ---------------- */

lbex_status lbex_simulate(const lbex_model* model, const lbex_plan* plan, const double* seed,
                          size_t seed_len, long iterations, lbex_orbit** out) {
    if (lbex_status s = require(model && plan && out && (seed || seed_len == 0), "null argument"); s)
        return s;
    return guarded([&] {
        lbex::InitialConditions init;
        init.y_seed.assign(seed, seed + seed_len);
        init.input = model->model->input;
        *out = new lbex_orbit{lbex::simulate(*model->model, plan->plan, init, iterations), 0};
    });
}

lbex_status lbex_simulate_reference(const lbex_model* model, const double* seed, size_t seed_len,
                                    long iterations, int bits, lbex_orbit** out) {
    if (lbex_status s = require(model && out && (seed || seed_len == 0), "null argument"); s)
        return s;
    return guarded([&] {
        lbex::InitialConditions init;
        init.y_seed.assign(seed, seed + seed_len);
        init.input = model->model->input;
        lbex::ReferenceOrbit ref =
            lbex::simulate_reference(*model->model, init, iterations, bits);
        lbex::PseudoOrbit rounded;
        rounded.plan_id = ref.plan_id;
        rounded.overflow = ref.overflow;
        rounded.values.reserve(ref.values.size());
        for (const lbex::BigFloat& v : ref.values) rounded.values.push_back(v.to_double());
        *out = new lbex_orbit{std::move(rounded), bits};
    });
}

void lbex_orbit_free(lbex_orbit* orbit) { delete orbit; }

size_t lbex_orbit_length(const lbex_orbit* orbit) {
    return orbit ? orbit->orbit.values.size() : 0;
}

double lbex_orbit_value(const lbex_orbit* orbit, size_t n) {
    if (!orbit || n >= orbit->orbit.values.size()) return 0.0;
    return orbit->orbit.values[n];
}

const char* lbex_orbit_plan_id(const lbex_orbit* orbit) {
    return orbit ? orbit->orbit.plan_id.c_str() : "";
}

int lbex_orbit_overflowed(const lbex_orbit* orbit, long* iteration) {
    if (!orbit || !orbit->orbit.overflow) return 0;
    if (iteration) *iteration = orbit->orbit.overflow->iteration;
    return 1;
}

/* ---------------- lower bound error ---------------- */

lbex_status lbex_series_compute(const lbex_orbit* a, const lbex_orbit* b, lbex_series** out) {
    if (lbex_status s = require(a && b && out, "null argument"); s) return s;
    return guarded([&] {
        if (a->reference_bits != b->reference_bits) {
            lbex::fail(lbex::ErrorKind::Mismatch,
                       "orbits were computed in different precision modes");
        }
        *out = new lbex_series{lbex::lower_bound_error(a->orbit, b->orbit),
                               lbex::relative_precision(a->orbit, b->orbit)};
    });
}

void lbex_series_free(lbex_series* series) { delete series; }

size_t lbex_series_length(const lbex_series* series) {
    return series ? series->lbe.values.size() : 0;
}

double lbex_series_lbe(const lbex_series* series, size_t n) {
    if (!series || n >= series->lbe.values.size()) return 0.0;
    return series->lbe.values[n];
}

double lbex_series_relative_precision(const lbex_series* series, size_t n) {
    if (!series || n >= series->precision.values.size()) return 0.0;
    return series->precision.values[n];
}

int lbex_series_guard(const lbex_series* series, size_t n) {
    if (!series || n >= series->precision.guard.size()) return 0;
    return series->precision.guard[n];
}

lbex_status lbex_series_growth_rate(const lbex_series* series, long lo, long hi, double* out) {
    if (lbex_status s = require(series && out, "null argument"); s) return s;
    return guarded([&] { *out = lbex::lbe_growth_rate(series->lbe, lo, hi); });
}

lbex_status lbex_reliability_horizon(const lbex_orbit* a, const lbex_orbit* b, double epsilon,
                                     lbex_horizon_summary* out) {
    if (lbex_status s = require(a && b && out, "null argument"); s) return s;
    return guarded([&] {
        lbex::HorizonReport report = lbex::reliability_horizon(a->orbit, b->orbit, epsilon);
        out->horizon = report.horizon.value_or(-1);
        out->trigger = static_cast<int>(report.triggered_by);
        out->epsilon = report.epsilon;
    });
}

lbex_status lbex_verify_theorem(const lbex_model* model, const double* seed, size_t seed_len,
                                long window, int bits, const lbex_plan* a, const lbex_plan* b,
                                lbex_verify_summary* out) {
    if (lbex_status s = require(model && a && b && out && (seed || seed_len == 0), "null argument");
        s)
        return s;
    return guarded([&] {
        lbex::InitialConditions init;
        init.y_seed.assign(seed, seed + seed_len);
        init.input = model->model->input;
        const long iterations = window;  // orbit indices [0, window) need seed + window values
        lbex::PseudoOrbit orbit_a = lbex::simulate(*model->model, a->plan, init, iterations);
        lbex::PseudoOrbit orbit_b = lbex::simulate(*model->model, b->plan, init, iterations);
        lbex::ReferenceOrbit reference =
            lbex::simulate_reference(*model->model, init, iterations, bits);
        const long trusted = lbex::trusted_prefix(*model->model, init, iterations, bits);
        lbex::VerificationReport report =
            lbex::verify_theorem(reference, trusted, orbit_a, orbit_b, window);
        out->window = report.window;
        out->trusted = trusted;
        out->violations = report.violations;
        out->min_margin = report.min_margin;
    });
}

/* ---------------- experiments ---------------- */

lbex_status lbex_experiment_open(const char* path, lbex_experiment** out) {
    if (lbex_status s = require(path && out, "null argument"); s) return s;
    return guarded([&] { *out = new lbex_experiment{lbex::load_experiment_file(path), {}}; });
}

void lbex_experiment_free(lbex_experiment* experiment) { delete experiment; }

lbex_status lbex_experiment_set_iterations(lbex_experiment* experiment, long iterations) {
    if (lbex_status s = require(experiment != nullptr, "null experiment"); s) return s;
    experiment->spec.iterations = iterations;
    return LBEX_OK;
}

lbex_status lbex_experiment_set_epsilon(lbex_experiment* experiment, double epsilon) {
    if (lbex_status s = require(experiment != nullptr, "null experiment"); s) return s;
    experiment->spec.epsilon = epsilon;
    return LBEX_OK;
}

lbex_status lbex_experiment_set_ref_bits(lbex_experiment* experiment, int bits) {
    if (lbex_status s = require(experiment != nullptr, "null experiment"); s) return s;
    experiment->spec.ref_bits = bits;
    return LBEX_OK;
}

lbex_status lbex_experiment_set_reps(lbex_experiment* experiment, int reps) {
    if (lbex_status s = require(experiment != nullptr, "null experiment"); s) return s;
    experiment->spec.reps = reps;
    return LBEX_OK;
}

lbex_status lbex_experiment_set_output_dir(lbex_experiment* experiment, const char* dir) {
    if (lbex_status s = require(experiment && dir, "null argument"); s) return s;
    experiment->spec.output_dir = dir;
    return LBEX_OK;
}

const char* lbex_experiment_name(const lbex_experiment* experiment) {
    return experiment ? experiment->spec.name.c_str() : "";
}

const char* lbex_experiment_output_dir(const lbex_experiment* experiment) {
    if (!experiment) return "";
    g_output_dir_scratch = experiment->spec.effective_output_dir();
    return g_output_dir_scratch.c_str();
}

lbex_status lbex_run_simulate(lbex_experiment* experiment) {
    if (lbex_status s = require(experiment != nullptr, "null experiment"); s) return s;
    return guarded([&] {
        lbex::ExperimentResult result =
            lbex::run_experiment(experiment->spec, lbex::RunKind::Simulate);
        record_outputs(experiment, result);
    });
}

lbex_status lbex_run_lbe(lbex_experiment* experiment, double* growth_rate) {
    if (lbex_status s = require(experiment != nullptr, "null experiment"); s) return s;
    return guarded([&] {
        lbex::ExperimentResult result = lbex::run_experiment(experiment->spec, lbex::RunKind::Lbe);
        record_outputs(experiment, result);
        if (growth_rate) *growth_rate = result.growth_rate.value_or(0.0);
    });
}

lbex_status lbex_run_horizon(lbex_experiment* experiment, lbex_horizon_summary* out) {
    if (lbex_status s = require(experiment && out, "null argument"); s) return s;
    return guarded([&] {
        lbex::ExperimentResult result =
            lbex::run_experiment(experiment->spec, lbex::RunKind::Horizon);
        record_outputs(experiment, result);
        out->horizon = result.horizon && result.horizon->horizon ? *result.horizon->horizon : -1;
        out->trigger =
            result.horizon ? static_cast<int>(result.horizon->triggered_by) : LBEX_TRIGGER_ORBIT_END;
        out->epsilon = experiment->spec.epsilon;
    });
}

lbex_status lbex_run_verify(lbex_experiment* experiment, lbex_verify_summary* out) {
    if (lbex_status s = require(experiment && out, "null argument"); s) return s;
    return guarded([&] {
        lbex::ExperimentResult result =
            lbex::run_experiment(experiment->spec, lbex::RunKind::Verify);
        record_outputs(experiment, result);
        out->window = result.verification ? result.verification->window : 0;
        out->trusted = result.trusted;
        out->violations = result.verification ? result.verification->violations : 0;
        out->min_margin = result.verification ? result.verification->min_margin : 0.0;
    });
}

lbex_status lbex_run_bench(lbex_experiment* experiment, lbex_timing_summary* out) {
    if (lbex_status s = require(experiment && out, "null argument"); s) return s;
    return guarded([&] {
        lbex::ExperimentResult result =
            lbex::run_experiment(experiment->spec, lbex::RunKind::Bench);
        record_outputs(experiment, result);
        if (!result.timings.empty()) {
            out->reps = result.timings.front().repetitions;
            out->mean_s = result.timings.front().mean_s;
            out->std_s = result.timings.front().std_s;
        }
    });
}

int lbex_experiment_output_count(const lbex_experiment* experiment) {
    return experiment ? static_cast<int>(experiment->outputs.size()) : 0;
}

const char* lbex_experiment_output_path(const lbex_experiment* experiment, int index) {
    if (!experiment || index < 0 || static_cast<size_t>(index) >= experiment->outputs.size()) {
        return "";
    }
    return experiment->outputs[static_cast<size_t>(index)].c_str();
}

lbex_status lbex_compare(const lbex_timing_summary* stats, int count, lbex_ratio_row* rows) {
    if (lbex_status s = require(stats && rows && count >= 2, "need >= 2 timing entries"); s)
        return s;
    return guarded([&] {
        std::vector<lbex::TimingStats> list;
        list.reserve(static_cast<size_t>(count));
        for (int i = 0; i < count; ++i) {
            lbex::TimingStats t;
            t.task_id = "task" + std::to_string(i);
            t.repetitions = stats[i].reps;
            t.mean_s = stats[i].mean_s;
            t.std_s = stats[i].std_s;
            list.push_back(std::move(t));
        }
        std::vector<lbex::RatioRow> computed = lbex::compare_stats(list);
        for (int i = 0; i < count; ++i) {
            rows[i].mean_ratio = computed[static_cast<size_t>(i)].mean_ratio;
            rows[i].min_ratio = computed[static_cast<size_t>(i)].min_ratio;
            rows[i].max_ratio = computed[static_cast<size_t>(i)].max_ratio;
        }
    });
}

} /* extern "C" */
