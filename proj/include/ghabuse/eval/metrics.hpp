#pragma once

// Confusion counts, derived metrics and report rendering.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ghabuse::eval {

struct Confusion {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + fp + tn + fn; }
    void add(bool predicted, bool actual);

    friend bool operator==(const Confusion&, const Confusion&) = default;
};

/// A metric is absent when its denominator is zero.
struct MetricsRow {
    std::string subcategory;
    Confusion counts;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    std::optional<double> accuracy;
};

MetricsRow metrics_from_confusion(std::string subcategory, const Confusion& c);

/// Throws InvalidInput when the spans differ in length.
MetricsRow compute_metrics(std::string subcategory, const std::vector<bool>& predicted, const std::vector<bool>& actual);

enum class ReportFormat { jsonl, csv, markdown };

/// Throws InvalidInput on an unknown name.
ReportFormat parse_report_format(std::string_view name);

/// Columns: subcategory, precision, recall, f1, accuracy, tp, fp, tn, fn.
/// Absent metrics are null (jsonl), empty (csv) or "n/a" (markdown).
std::string emit_report(std::span<const MetricsRow> rows, ReportFormat format);

/// Long-form CSV `subcategory,metric,value` for plotting; absent metrics are skipped.
std::string emit_plot_data(std::span<const MetricsRow> rows);

/// Shortest decimal text that round-trips.
std::string format_double(double v);

}  // namespace ghabuse::eval
