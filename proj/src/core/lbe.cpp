#include "core/lbe.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace lbex {

namespace {

size_t shared_length(const PseudoOrbit& a, const PseudoOrbit& b, bool& mismatch) {
    mismatch = a.values.size() != b.values.size();
    return std::min(a.values.size(), b.values.size());
}

void require_distinct_ids(const PseudoOrbit& a, const PseudoOrbit& b) {
    if (a.plan_id == b.plan_id) {
        fail(ErrorKind::Validation,
             "lower bound error needs two distinct pseudo-orbits, both have plan id '" +
                 a.plan_id + "'");
    }
}

}  // namespace

const char* horizon_trigger_name(HorizonTrigger t) {
    switch (t) {
        case HorizonTrigger::Criterion: return "criterion";
        case HorizonTrigger::DenominatorGuard: return "denominator-guard";
        case HorizonTrigger::OrbitEnd: return "orbit-end";
    }
    return "?";
}

LbeSeries lower_bound_error(const PseudoOrbit& a, const PseudoOrbit& b) {
    require_distinct_ids(a, b);
    LbeSeries series;
    series.plan_ids = {a.plan_id, b.plan_id};
    const size_t n = shared_length(a, b, series.length_mismatch);
    series.values.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        series.values.push_back(std::fabs(a.values[i] - b.values[i]) / 2.0);
    }
    return series;
}

LbeSeries lbe_multi(const std::vector<const PseudoOrbit*>& orbits) {
    if (orbits.size() < 2) {
        fail(ErrorKind::Validation, "lbe_multi needs at least 2 orbits, got " +
                                        std::to_string(orbits.size()));
    }
    LbeSeries series;
    size_t n = orbits.front()->values.size();
    for (const PseudoOrbit* o : orbits) {
        series.plan_ids.push_back(o->plan_id);
        if (o->values.size() != n) series.length_mismatch = true;
        n = std::min(n, o->values.size());
    }
    series.values.assign(n, 0.0);
    for (size_t i = 0; i < orbits.size(); ++i) {
        for (size_t j = i + 1; j < orbits.size(); ++j) {
            const std::vector<double>& a = orbits[i]->values;
            const std::vector<double>& b = orbits[j]->values;
            for (size_t k = 0; k < n; ++k) {
                series.values[k] = std::max(series.values[k], std::fabs(a[k] - b[k]) / 2.0);
            }
        }
    }
    return series;
}

PrecisionSeries relative_precision(const PseudoOrbit& a, const PseudoOrbit& b) {
    require_distinct_ids(a, b);
    bool mismatch = false;
    const size_t n = shared_length(a, b, mismatch);
    PrecisionSeries series;
    series.values.reserve(n);
    series.guard.reserve(n);
    series.numerator.reserve(n);
    series.denominator.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        const double num = a.values[i] - b.values[i];
        const double den = a.values[i] + b.values[i];
        const bool guarded = den == 0.0 || std::fabs(den) < 4.0 * DBL_MIN;
        double value;
        if (den == 0.0) {
            value = std::numeric_limits<double>::infinity();
        } else {
            value = num / den;
        }
        series.values.push_back(value);
        series.guard.push_back(guarded ? 1 : 0);
        series.numerator.push_back(num);
        series.denominator.push_back(den);
    }
    return series;
}

HorizonReport reliability_horizon(const PseudoOrbit& a, const PseudoOrbit& b, double epsilon) {
    if (!(epsilon > 0.0)) fail(ErrorKind::Range, "epsilon must be > 0");
    require_distinct_ids(a, b);
    bool mismatch = false;
    const size_t n = shared_length(a, b, mismatch);

    HorizonReport report;
    report.epsilon = epsilon;
    for (size_t i = 0; i < n; ++i) {
        const double av = a.values[i];
        const double bv = b.values[i];
        const double num = av - bv;
        const double den = av + bv;
        if (den == 0.0 || std::fabs(den) < 4.0 * DBL_MIN) {
            // Near-zero crossing: only a genuine disagreement at the orbit's
            // magnitude scale counts, otherwise the entry is skipped.
            if (std::fabs(num) > epsilon * (std::fabs(av) + std::fabs(bv))) {
                report.horizon = static_cast<long>(i);
                report.triggered_by = HorizonTrigger::DenominatorGuard;
                return report;
            }
            continue;
        }
        if (std::fabs(num / den) > epsilon) {
            report.horizon = static_cast<long>(i);
            report.triggered_by = HorizonTrigger::Criterion;
            return report;
        }
    }
    report.triggered_by = HorizonTrigger::OrbitEnd;
    return report;
}

double lbe_growth_rate(const LbeSeries& series, long lo, long hi) {
    if (lo < 0 || hi <= lo || static_cast<size_t>(hi) > series.values.size()) {
        fail(ErrorKind::Range, "growth-rate window [" + std::to_string(lo) + ", " +
                                   std::to_string(hi) + ") out of series range");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    long count = 0;
    bool saw_zero = false;
    for (long i = lo; i < hi; ++i) {
        const double v = series.values[static_cast<size_t>(i)];
        if (v == 0.0) {
            saw_zero = true;
            continue;
        }
        const double x = static_cast<double>(i);
        const double y = std::log2(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count == 0) return 0.0;  // identically zero window: no divergence
    if (count == 1) {
        fail(ErrorKind::Range, "growth-rate window has a single positive entry; cannot fit a slope");
    }
    (void)saw_zero;
    const double denom = static_cast<double>(count) * sxx - sx * sx;
    if (denom == 0.0) fail(ErrorKind::Range, "degenerate growth-rate window");
    return (static_cast<double>(count) * sxy - sx * sy) / denom;
}

VerificationReport verify_theorem(const ReferenceOrbit& reference, long trusted,
                                  const PseudoOrbit& a, const PseudoOrbit& b, long window) {
    if (window < 1) fail(ErrorKind::Range, "verification window must be >= 1");
    if (window > trusted) {
        fail(ErrorKind::Range, "verification window " + std::to_string(window) +
                                   " exceeds the reference trust window of " +
                                   std::to_string(trusted) + " iterations");
    }
    const size_t shared =
        std::min({reference.values.size(), a.values.size(), b.values.size()});
    if (static_cast<size_t>(window) > shared) {
        fail(ErrorKind::Range, "verification window " + std::to_string(window) +
                                   " exceeds shared orbit length " + std::to_string(shared));
    }

    VerificationReport report;
    report.window = window;
    report.margins.reserve(static_cast<size_t>(window));
    const int bits = reference.bits;
    BigFloat deviation_a(bits), deviation_b(bits), value(bits);
    double min_margin = std::numeric_limits<double>::infinity();
    for (long i = 0; i < window; ++i) {
        const size_t n = static_cast<size_t>(i);
        value.set(a.values[n]);
        deviation_a.assign_sub(reference.values[n], value);
        deviation_a.assign_abs(deviation_a);
        value.set(b.values[n]);
        deviation_b.assign_sub(reference.values[n], value);
        deviation_b.assign_abs(deviation_b);
        if (deviation_a.less_than(deviation_b)) deviation_a.set(deviation_b);
        const double lbe = std::fabs(a.values[n] - b.values[n]) / 2.0;
        const double margin = deviation_a.to_double() - lbe;
        report.margins.push_back(margin);
        min_margin = std::min(min_margin, margin);
        if (margin < 0.0) ++report.violations;
    }
    report.min_margin = report.margins.empty() ? 0.0 : min_margin;
    return report;
}

}  // namespace lbex
