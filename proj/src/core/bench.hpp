#pragma once

#include <functional>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace lbex {

/// Wall-clock samples for one repeatedly executed task, with sample
/// (n-1 denominator) standard deviation.
struct TimingStats {
    std::string task_id;
    int repetitions = 0;
    double mean_s = 0.0;
    double std_s = 0.0;
    std::vector<double> samples;
};

/// Thrown when the timed task fails mid-run; carries the completed samples.
class BenchAborted : public Error {
public:
    BenchAborted(std::string message, std::vector<double> partial)
        : Error(ErrorKind::Internal, std::move(message)), partial_samples(std::move(partial)) {}

    std::vector<double> partial_samples;
};

TimingStats stats_from_samples(std::string task_id, std::vector<double> samples);

/// Run `task` reps times (reps >= 2) on a monotonic clock, strictly
/// serialized, with an optional untimed warm-up run first.
TimingStats time_task(const std::string& task_id, const std::function<void()>& task, int reps,
                      bool warmup = true);

/// Mean ratio of each task against the fastest, with the one-sigma band
/// propagated to a [min, max] ratio range.
struct RatioRow {
    std::string task_id;
    double mean_ratio = 1.0;
    double min_ratio = 1.0;
    double max_ratio = 1.0;
};

std::vector<RatioRow> compare_stats(const std::vector<TimingStats>& stats);

}  // namespace lbex
