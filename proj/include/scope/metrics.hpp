#pragma once

#include <vector>

#include "scope/trace.hpp"

namespace scope {

struct EpisodeOutcome {
    bool success = false;
    double agent_path_length = 0.0;    // l
    double optimal_path_length = 0.0;  // p, geodesic on ground truth
    int decisions = 0;
    double confidence = 0.0;  // attached to the final action
};

/// Outcomes of every subtask in a trace set, in trace order.
std::vector<EpisodeOutcome> collect_outcomes(const std::vector<EpisodeTrace>& traces);

/// Percentage of successful episodes.
double success_rate(const std::vector<EpisodeOutcome>& outcomes);

/// Standard success-weighted-by-path-length: 100/N * sum success_i * p_i / max(p_i, l_i).
double spl(const std::vector<EpisodeOutcome>& outcomes);

/// 100 * mean of p_i / max(p_i, l_i) over all episodes, success or not.
double efficiency(const std::vector<EpisodeOutcome>& outcomes);

struct CalibrationBin {
    double mean_confidence = 0.0;
    double accuracy = 0.0;
    int count = 0;
};

struct CalibrationReport {
    std::vector<CalibrationBin> bins;
    double ece = 0.0;  // in [0, 1]

    double ece_x100() const { return ece * 100.0; }
};

/// Expected calibration error over equal-width confidence bins
/// [0,0.1), ..., [0.9,1.0].
CalibrationReport ece(const std::vector<EpisodeOutcome>& outcomes, int bins = 10);

struct ReconsiderationStats {
    double confirm_precision = 0.0;          // confirmed-and-executed memory actions that were correct
    double forced_error_rate = 0.0;          // forced executions that were incorrect
    double memory_execution_precision = 0.0; // all executed memory actions that were correct
    int confirmed_executions = 0;
    int forced_executions = 0;
    int memory_executions = 0;
};

ReconsiderationStats reconsideration_stats(const std::vector<EpisodeTrace>& traces);

struct TTestResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
};

/// Unpaired two-tailed Welch t-test.
TTestResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b);

double mean(const std::vector<double>& xs);
double sample_stddev(const std::vector<double>& xs);

}  // namespace scope
