#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sop {

/// Per-epoch validation metric series. Epochs are 1-based, strictly
/// increasing and contiguous from 1; element i holds the value of epoch i+1.
class MetricCurve {
public:
    MetricCurve() = default;
    explicit MetricCurve(std::vector<double> values) : values_(std::move(values)) {}

    /// Validates contiguity from epoch 1; throws std::invalid_argument.
    static MetricCurve from_points(const std::vector<std::pair<int, double>>& points);

    const std::vector<double>& values() const { return values_; }
    int epochs() const { return static_cast<int>(values_.size()); }
    bool empty() const { return values_.empty(); }
    double at_epoch(int epoch) const; // throws on out-of-range epoch

private:
    std::vector<double> values_;
};

/// Max value; earliest epoch on ties. Throws on an empty curve.
std::pair<int, double> best_point(const MetricCurve& curve);

/// Smallest epoch with value >= ratio * best (default: within 10% of best).
int first_epoch_within_relative(const MetricCurve& curve, double ratio = 0.9);

/// Smallest epoch with value >= best - margin (default: within 10 points).
int first_epoch_within_absolute(const MetricCurve& curve, double margin = 0.10);

/// 3-epoch centered average; the final epoch averages {E-1, E} and epoch 1
/// averages {1, 2}. Returns (smoothed, raw). Throws on out-of-range epoch.
std::pair<double, double> smoothed_snapshot(const MetricCurve& curve, int epoch);

/// For each threshold (ascending), the smallest epoch whose raw value
/// reaches it, or nullopt if never reached.
std::map<double, std::optional<int>> earliest_epoch_reaching(const MetricCurve& curve,
                                                             const std::vector<double>& thresholds);

struct RunCurve {
    std::string name;
    MetricCurve curve;
};

struct SnapshotCell {
    double smoothed = 0.0;
    double raw = 0.0;
    std::optional<double> delta; // vs the baseline's smoothed value
};

struct RunReportRow {
    std::string name;
    double best = 0.0;
    int best_epoch = 0;
    int rel10_epoch = 0;
    int abs10pp_epoch = 0;
    std::map<double, std::optional<int>> threshold_epochs;
    std::vector<std::optional<SnapshotCell>> snapshots; // parallel to snapshot_epochs
};

struct CompareReport {
    std::vector<int> snapshot_epochs;
    std::vector<double> thresholds;
    std::optional<std::string> baseline;
    std::vector<RunReportRow> rows;
};

/// Per-run best point, proximity epochs, threshold attainment, and smoothed
/// plus raw snapshots with deltas against the baseline's smoothed values.
/// Throws when the baseline curve lacks a requested snapshot epoch.
CompareReport compare_runs(const std::vector<RunCurve>& runs,
                           std::optional<std::size_t> baseline_index,
                           const std::vector<int>& snapshot_epochs,
                           const std::vector<double>& thresholds);

/// Stable-column-order delimiter-separated table:
/// model,best,best_epoch,rel10_epoch,abs10pp_epoch,thr_*,ep*_smoothed,ep*_raw,ep*_delta
std::string report_table_csv(const CompareReport& report);

/// Per-run plot series, one line per epoch: epoch,raw,smoothed.
std::string series_csv(const MetricCurve& curve);

} // namespace sop
