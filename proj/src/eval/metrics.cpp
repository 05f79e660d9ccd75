#include "ghabuse/eval/metrics.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "ghabuse/error.hpp"

namespace ghabuse::eval {
namespace {

std::optional<double> ratio(std::int64_t num, std::int64_t den) {
    if (den <= 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string fixed4(const std::optional<double>& v) {
    if (!v) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *v);
    return buf;
}

std::string markdown_cell(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

void Confusion::add(bool predicted, bool actual) {
    if (predicted && actual) ++tp;
    else if (predicted) ++fp;
    else if (actual) ++fn;
    else ++tn;
}

MetricsRow metrics_from_confusion(std::string subcategory, const Confusion& c) {
    MetricsRow r;
    r.subcategory = std::move(subcategory);
    r.counts = c;
    r.precision = ratio(c.tp, c.tp + c.fp);
    r.recall = ratio(c.tp, c.tp + c.fn);
    r.f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
    r.accuracy = ratio(c.tp + c.tn, c.total());
    return r;
}

MetricsRow compute_metrics(std::string subcategory, const std::vector<bool>& predicted, const std::vector<bool>& actual) {
    if (predicted.size() != actual.size()) throw InvalidInput("compute_metrics: prediction and label counts differ");
    Confusion c;
    for (std::size_t i = 0; i < predicted.size(); ++i) c.add(predicted[i], actual[i]);
    return metrics_from_confusion(std::move(subcategory), c);
}

ReportFormat parse_report_format(std::string_view name) {
    if (name == "jsonl") return ReportFormat::jsonl;
    if (name == "csv") return ReportFormat::csv;
    if (name == "markdown") return ReportFormat::markdown;
    throw InvalidInput("unknown report format '" + std::string(name) + "' (expected jsonl, csv or markdown)");
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string emit_report(std::span<const MetricsRow> rows, ReportFormat format) {
    std::ostringstream out;
    switch (format) {
        case ReportFormat::jsonl:
            for (const auto& r : rows) {
                nlohmann::ordered_json j;
                j["subcategory"] = r.subcategory;
                for (auto [key, v] : {std::pair{"precision", r.precision}, std::pair{"recall", r.recall},
                                      std::pair{"f1", r.f1}, std::pair{"accuracy", r.accuracy}})
                    j[key] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
                j["tp"] = r.counts.tp;
                j["fp"] = r.counts.fp;
                j["tn"] = r.counts.tn;
                j["fn"] = r.counts.fn;
                out << j.dump() << "\n";
            }
            break;
        case ReportFormat::csv: {
            out << "subcategory,precision,recall,f1,accuracy,tp,fp,tn,fn\r\n";
            auto cell = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
            for (const auto& r : rows)
                out << csv_field(r.subcategory) << ',' << cell(r.precision) << ',' << cell(r.recall) << ','
                    << cell(r.f1) << ',' << cell(r.accuracy) << ',' << r.counts.tp << ',' << r.counts.fp << ','
                    << r.counts.tn << ',' << r.counts.fn << "\r\n";
            break;
        }
        case ReportFormat::markdown:
            out << "| subcategory | precision | recall | f1 | accuracy | tp | fp | tn | fn |\n";
            out << "|---|---:|---:|---:|---:|---:|---:|---:|---:|\n";
            for (const auto& r : rows)
                out << "| " << markdown_cell(r.subcategory) << " | " << fixed4(r.precision) << " | "
                    << fixed4(r.recall) << " | " << fixed4(r.f1) << " | " << fixed4(r.accuracy) << " | "
                    << r.counts.tp << " | " << r.counts.fp << " | " << r.counts.tn << " | " << r.counts.fn
                    << " |\n";
            break;
    }
    return out.str();
}

std::string emit_plot_data(std::span<const MetricsRow> rows) {
    std::ostringstream out;
    out << "subcategory,metric,value\r\n";
    for (const auto& r : rows)
        for (auto [key, v] : {std::pair{"precision", r.precision}, std::pair{"recall", r.recall},
                              std::pair{"f1", r.f1}, std::pair{"accuracy", r.accuracy}})
            if (v) out << csv_field(r.subcategory) << ',' << key << ',' << format_double(*v) << "\r\n";
    return out.str();
}

}  // namespace ghabuse::eval
