#include "sop/curves.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace sop {

MetricCurve MetricCurve::from_points(const std::vector<std::pair<int, double>>& points) {
    std::vector<double> values;
    values.reserve(points.size());
    int expected = 1;
    for (const auto& [epoch, value] : points) {
        if (epoch != expected) {
            throw std::invalid_argument("metric curve epochs must be contiguous from 1");
        }
        values.push_back(value);
        ++expected;
    }
    return MetricCurve(std::move(values));
}

double MetricCurve::at_epoch(int epoch) const {
    if (epoch < 1 || epoch > epochs()) {
        throw std::invalid_argument("epoch out of curve range");
    }
    return values_[static_cast<std::size_t>(epoch - 1)];
}

std::pair<int, double> best_point(const MetricCurve& curve) {
    if (curve.empty()) throw std::invalid_argument("best_point: empty curve");
    int best_epoch = 1;
    double best = curve.values()[0];
    for (int e = 2; e <= curve.epochs(); ++e) {
        const double v = curve.at_epoch(e);
        if (v > best) { // strictly greater keeps the earliest tie
            best = v;
            best_epoch = e;
        }
    }
    return {best_epoch, best};
}

namespace {

int first_epoch_reaching_value(const MetricCurve& curve, double threshold) {
    for (int e = 1; e <= curve.epochs(); ++e) {
        if (curve.at_epoch(e) >= threshold) return e;
    }
    return curve.epochs(); // unreachable when threshold <= best
}

} // namespace

int first_epoch_within_relative(const MetricCurve& curve, double ratio) {
    auto [epoch, best] = best_point(curve);
    (void)epoch;
    return first_epoch_reaching_value(curve, ratio * best);
}

int first_epoch_within_absolute(const MetricCurve& curve, double margin) {
    auto [epoch, best] = best_point(curve);
    (void)epoch;
    return first_epoch_reaching_value(curve, best - margin);
}

std::pair<double, double> smoothed_snapshot(const MetricCurve& curve, int epoch) {
    const double raw = curve.at_epoch(epoch); // throws when out of range
    const int lo = std::max(1, epoch - 1);
    const int hi = std::min(curve.epochs(), epoch + 1);
    double sum = 0.0;
    for (int e = lo; e <= hi; ++e) sum += curve.at_epoch(e);
    return {sum / static_cast<double>(hi - lo + 1), raw};
}

std::map<double, std::optional<int>> earliest_epoch_reaching(
    const MetricCurve& curve, const std::vector<double>& thresholds) {
    std::map<double, std::optional<int>> result;
    for (double t : thresholds) {
        std::optional<int> hit;
        for (int e = 1; e <= curve.epochs(); ++e) {
            if (curve.at_epoch(e) >= t) {
                hit = e;
                break;
            }
        }
        result[t] = hit;
    }
    return result;
}

CompareReport compare_runs(const std::vector<RunCurve>& runs,
                           std::optional<std::size_t> baseline_index,
                           const std::vector<int>& snapshot_epochs,
                           const std::vector<double>& thresholds) {
    CompareReport report;
    report.snapshot_epochs = snapshot_epochs;
    report.thresholds = thresholds;

    std::vector<std::optional<double>> baseline_smoothed(snapshot_epochs.size());
    if (baseline_index) {
        const auto& base = runs.at(*baseline_index);
        report.baseline = base.name;
        for (std::size_t i = 0; i < snapshot_epochs.size(); ++i) {
            if (snapshot_epochs[i] > base.curve.epochs()) {
                throw std::invalid_argument("baseline run is missing requested epoch " +
                                            std::to_string(snapshot_epochs[i]));
            }
            baseline_smoothed[i] = smoothed_snapshot(base.curve, snapshot_epochs[i]).first;
        }
    }

    for (const auto& run : runs) {
        RunReportRow row;
        row.name = run.name;
        auto [be, bv] = best_point(run.curve);
        row.best = bv;
        row.best_epoch = be;
        row.rel10_epoch = first_epoch_within_relative(run.curve);
        row.abs10pp_epoch = first_epoch_within_absolute(run.curve);
        row.threshold_epochs = earliest_epoch_reaching(run.curve, thresholds);
        row.snapshots.resize(snapshot_epochs.size());
        for (std::size_t i = 0; i < snapshot_epochs.size(); ++i) {
            if (snapshot_epochs[i] > run.curve.epochs()) continue;
            auto [smoothed, raw] = smoothed_snapshot(run.curve, snapshot_epochs[i]);
            SnapshotCell cell;
            cell.smoothed = smoothed;
            cell.raw = raw;
            if (baseline_smoothed[i]) cell.delta = smoothed - *baseline_smoothed[i];
            row.snapshots[i] = cell;
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

} // namespace

std::string report_table_csv(const CompareReport& report) {
    std::ostringstream os;
    os << "model,best,best_epoch,rel10_epoch,abs10pp_epoch";
    for (double t : report.thresholds) os << ",thr_" << fmt(t);
    for (int e : report.snapshot_epochs) {
        os << ",ep" << e << "_smoothed,ep" << e << "_raw,ep" << e << "_delta";
    }
    os << "\n";
    for (const auto& row : report.rows) {
        os << row.name << "," << fmt(row.best) << "," << row.best_epoch << ","
           << row.rel10_epoch << "," << row.abs10pp_epoch;
        for (double t : report.thresholds) {
            auto it = row.threshold_epochs.find(t);
            os << ",";
            if (it != row.threshold_epochs.end() && it->second) os << *it->second;
        }
        for (const auto& cell : row.snapshots) {
            if (!cell) {
                os << ",,,";
                continue;
            }
            os << "," << fmt(cell->smoothed) << "," << fmt(cell->raw) << ",";
            if (cell->delta) os << fmt(*cell->delta);
        }
        os << "\n";
    }
    return os.str();
}

std::string series_csv(const MetricCurve& curve) {
    std::ostringstream os;
    os << "epoch,raw,smoothed\n";
    for (int e = 1; e <= curve.epochs(); ++e) {
        auto [smoothed, raw] = smoothed_snapshot(curve, e);
        os << e << "," << fmt(raw) << "," << fmt(smoothed) << "\n";
    }
    return os.str();
}

} // namespace sop
