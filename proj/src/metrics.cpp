#include "scope/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scope/errors.hpp"

namespace scope {

std::vector<EpisodeOutcome> collect_outcomes(const std::vector<EpisodeTrace>& traces) {
    std::vector<EpisodeOutcome> outcomes;
    for (const auto& trace : traces) {
        for (const auto& st : trace.subtasks) {
            outcomes.push_back({st.success, st.agent_path_length, st.optimal_path_length, st.decisions,
                                st.confidence});
        }
    }
    return outcomes;
}

double success_rate(const std::vector<EpisodeOutcome>& outcomes) {
    if (outcomes.empty()) throw EmptyInput("success_rate over empty outcome set");
    int successes = 0;
    for (const auto& o : outcomes) successes += o.success ? 1 : 0;
    return 100.0 * successes / static_cast<double>(outcomes.size());
}

double spl(const std::vector<EpisodeOutcome>& outcomes) {
    if (outcomes.empty()) throw EmptyInput("spl over empty outcome set");
    double sum = 0.0;
    for (const auto& o : outcomes) {
        if (o.optimal_path_length <= 0.0) throw NonpositiveOptimal("spl requires positive optimal path length");
        if (o.success) sum += o.optimal_path_length / std::max(o.optimal_path_length, o.agent_path_length);
    }
    return 100.0 * sum / static_cast<double>(outcomes.size());
}

double efficiency(const std::vector<EpisodeOutcome>& outcomes) {
    if (outcomes.empty()) throw EmptyInput("efficiency over empty outcome set");
    double sum = 0.0;
    for (const auto& o : outcomes) {
        if (o.optimal_path_length <= 0.0)
            throw NonpositiveOptimal("efficiency requires positive optimal path length");
        sum += o.optimal_path_length / std::max(o.optimal_path_length, o.agent_path_length);
    }
    return 100.0 * sum / static_cast<double>(outcomes.size());
}

CalibrationReport ece(const std::vector<EpisodeOutcome>& outcomes, int bins) {
    if (outcomes.empty()) throw EmptyInput("ece over empty outcome set");
    CalibrationReport report;
    report.bins.resize(bins);
    std::vector<double> conf_sum(bins, 0.0);
    std::vector<int> correct(bins, 0);
    for (const auto& o : outcomes) {
        int b = static_cast<int>(o.confidence * bins);
        b = std::clamp(b, 0, bins - 1);  // confidence 1.0 lands in the last bin
        report.bins[b].count += 1;
        conf_sum[b] += o.confidence;
        correct[b] += o.success ? 1 : 0;
    }
    const double n = static_cast<double>(outcomes.size());
    for (int b = 0; b < bins; ++b) {
        if (report.bins[b].count == 0) continue;
        report.bins[b].mean_confidence = conf_sum[b] / report.bins[b].count;
        report.bins[b].accuracy = static_cast<double>(correct[b]) / report.bins[b].count;
        report.ece += (report.bins[b].count / n) *
                      std::abs(report.bins[b].accuracy - report.bins[b].mean_confidence);
    }
    return report;
}

ReconsiderationStats reconsideration_stats(const std::vector<EpisodeTrace>& traces) {
    ReconsiderationStats stats;
    int confirmed_correct = 0;
    int forced_wrong = 0;
    int memory_correct = 0;
    for (const auto& trace : traces) {
        for (const auto& ev : trace.decisions) {
            if (ev.record.final_action.kind != Action::Kind::Memory) continue;
            if (!ev.truth.has_value()) continue;  // only executed (terminal) memory actions
            const bool correct = *ev.truth;
            ++stats.memory_executions;
            memory_correct += correct ? 1 : 0;
            if (ev.record.forced) {
                ++stats.forced_executions;
                forced_wrong += correct ? 0 : 1;
            } else if (!ev.record.verdicts.empty() &&
                       ev.record.verdicts.back().kind == VerdictKind::Confirm) {
                ++stats.confirmed_executions;
                confirmed_correct += correct ? 1 : 0;
            }
        }
    }
    if (stats.memory_executions == 0) throw EmptyInput("no executed memory decisions in traces");
    stats.memory_execution_precision =
        static_cast<double>(memory_correct) / stats.memory_executions;
    stats.confirm_precision = stats.confirmed_executions > 0
                                  ? static_cast<double>(confirmed_correct) / stats.confirmed_executions
                                  : 0.0;
    stats.forced_error_rate =
        stats.forced_executions > 0 ? static_cast<double>(forced_wrong) / stats.forced_executions : 0.0;
    return stats;
}

double mean(const std::vector<double>& xs) {
    if (xs.empty()) throw EmptyInput("mean of empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_stddev(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

namespace {

// Regularized incomplete beta via Lentz's continued fraction.
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 200;
    constexpr double kEps = 3.0e-14;
    constexpr double kTiny = 1.0e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

double reg_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log(1.0 - x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

}  // namespace

TTestResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2) throw EmptyInput("welch_t_test needs at least two samples per group");
    const double ma = mean(a);
    const double mb = mean(b);
    const double sa = sample_stddev(a);
    const double sb = sample_stddev(b);
    const double va_n = sa * sa / static_cast<double>(a.size());
    const double vb_n = sb * sb / static_cast<double>(b.size());
    TTestResult out;
    const double denom = std::sqrt(va_n + vb_n);
    if (denom == 0.0) {
        out.t = ma == mb ? 0.0 : std::numeric_limits<double>::infinity();
        out.df = static_cast<double>(a.size() + b.size() - 2);
        out.p = ma == mb ? 1.0 : 0.0;
        return out;
    }
    out.t = (ma - mb) / denom;
    out.df = (va_n + vb_n) * (va_n + vb_n) /
             (va_n * va_n / (a.size() - 1) + vb_n * vb_n / (b.size() - 1));
    // Two-tailed p: P(|T| > t) = I_{df/(df+t^2)}(df/2, 1/2).
    out.p = reg_incomplete_beta(out.df / 2.0, 0.5, out.df / (out.df + out.t * out.t));
    return out;
}

}  // namespace scope
