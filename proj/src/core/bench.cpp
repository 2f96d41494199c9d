#include "core/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace lbex {

TimingStats stats_from_samples(std::string task_id, std::vector<double> samples) {
    if (samples.size() < 2) {
        fail(ErrorKind::Range, "timing statistics need at least 2 samples, got " +
                                   std::to_string(samples.size()));
    }
    TimingStats stats;
    stats.task_id = std::move(task_id);
    stats.repetitions = static_cast<int>(samples.size());
    double sum = 0.0;
    for (double s : samples) sum += s;
    stats.mean_s = sum / static_cast<double>(samples.size());
    double ss = 0.0;
    for (double s : samples) {
        const double d = s - stats.mean_s;
        ss += d * d;
    }
    stats.std_s = std::sqrt(ss / static_cast<double>(samples.size() - 1));
    stats.samples = std::move(samples);
    return stats;
}

TimingStats time_task(const std::string& task_id, const std::function<void()>& task, int reps,
                      bool warmup) {
    if (reps < 2) fail(ErrorKind::Range, "benchmark repetitions must be >= 2, got " + std::to_string(reps));
    using clock = std::chrono::steady_clock;
    std::vector<double> samples;
    samples.reserve(static_cast<size_t>(reps));
    try {
        if (warmup) task();
        for (int r = 0; r < reps; ++r) {
            const auto start = clock::now();
            task();
            const auto stop = clock::now();
            samples.push_back(std::chrono::duration<double>(stop - start).count());
        }
    } catch (const std::exception& e) {
        std::string message = "task '" + task_id + "' failed after " +
                              std::to_string(samples.size()) + "/" + std::to_string(reps) +
                              " timed runs: " + e.what();
        throw BenchAborted(std::move(message), std::move(samples));
    }
    return stats_from_samples(task_id, std::move(samples));
}

std::vector<RatioRow> compare_stats(const std::vector<TimingStats>& stats) {
    if (stats.size() < 2) {
        fail(ErrorKind::Range, "ratio comparison needs at least 2 timing entries");
    }
    double fastest_mean = std::numeric_limits<double>::infinity();
    double fastest_std = 0.0;
    for (const TimingStats& s : stats) {
        if (s.mean_s < fastest_mean) {
            fastest_mean = s.mean_s;
            fastest_std = s.std_s;
        }
    }
    if (!(fastest_mean > 0.0)) fail(ErrorKind::Range, "ratio comparison needs positive means");

    std::vector<RatioRow> rows;
    rows.reserve(stats.size());
    for (const TimingStats& s : stats) {
        RatioRow row;
        row.task_id = s.task_id;
        row.mean_ratio = s.mean_s / fastest_mean;
        const double hi_den = fastest_mean - fastest_std;
        row.min_ratio = std::max(0.0, (s.mean_s - s.std_s) / (fastest_mean + fastest_std));
        row.max_ratio = hi_den > 0.0 ? (s.mean_s + s.std_s) / hi_den
                                     : std::numeric_limits<double>::infinity();
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace lbex
