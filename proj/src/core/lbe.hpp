#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/reference.hpp"
#include "core/simulate.hpp"

namespace lbex {

/// Lower bound error series: values[n] = |a[n] - b[n]| / 2, a provable lower
/// bound on the larger of the two pseudo-orbits' true errors at step n.
struct LbeSeries {
    std::vector<double> values;
    std::vector<std::string> plan_ids;
    bool length_mismatch = false;  // inputs truncated to the shared prefix
};

/// Relative precision series eps[n] = (a[n]-b[n]) / (a[n]+b[n]). Entries with
/// a vanishing denominator are guard-flagged and keep the raw numerator and
/// denominator for audit.
struct PrecisionSeries {
    std::vector<double> values;      // +inf magnitude when the denominator is exactly 0
    std::vector<uint8_t> guard;      // 1 = near-zero denominator
    std::vector<double> numerator;   // a[n] - b[n]
    std::vector<double> denominator; // a[n] + b[n]
};

enum class HorizonTrigger { Criterion, DenominatorGuard, OrbitEnd };

const char* horizon_trigger_name(HorizonTrigger t);

/// First iteration at which the simulation stops being trustworthy under the
/// relative-precision stop criterion |eps[n]| > epsilon.
struct HorizonReport {
    std::optional<long> horizon;
    double epsilon = 0.0;
    HorizonTrigger triggered_by = HorizonTrigger::OrbitEnd;
};

/// Per-iteration slack of the lower-bound-error theorem against a reference:
/// margins[n] = max(|ref[n]-a[n]|, |ref[n]-b[n]|) - lbe[n], which is
/// non-negative for every real triple.
struct VerificationReport {
    long window = 0;
    std::vector<double> margins;
    long violations = 0;
    double min_margin = 0.0;
};

/// Orbits must carry distinct plan ids. A length mismatch truncates to the
/// shared prefix and sets the flag.
LbeSeries lower_bound_error(const PseudoOrbit& a, const PseudoOrbit& b);

/// Max pairwise gap over >= 2 orbits, halved: the tightest bound obtained by
/// applying the two-orbit theorem to every pair.
LbeSeries lbe_multi(const std::vector<const PseudoOrbit*>& orbits);

PrecisionSeries relative_precision(const PseudoOrbit& a, const PseudoOrbit& b);

/// Scan for the first n with |eps[n]| > epsilon. Guard-flagged entries are
/// excluded from the criterion unless the orbits genuinely disagree at the
/// magnitude scale (|a-b| > epsilon * (|a|+|b|)), which is reported as a
/// DenominatorGuard trigger.
HorizonReport reliability_horizon(const PseudoOrbit& a, const PseudoOrbit& b, double epsilon);

/// Least-squares slope of log2(series) over window [lo, hi), in bits per
/// iteration. Exact zeros are skipped; an all-zero window has slope 0 by
/// convention (no divergence); a single positive point is an error.
double lbe_growth_rate(const LbeSeries& series, long lo, long hi);

/// Check margins over the first `window` values against a reference orbit.
/// `trusted` is the reference's trust window (see trusted_prefix); a window
/// beyond it is an error naming the trusted length.
VerificationReport verify_theorem(const ReferenceOrbit& reference, long trusted,
                                  const PseudoOrbit& a, const PseudoOrbit& b, long window);

}  // namespace lbex
