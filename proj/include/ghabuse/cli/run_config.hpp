#pragma once

// Everything a CLI invocation needs, merged from the config file and flags.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ghabuse/eval/metrics.hpp"
#include "ghabuse/ingest/github.hpp"
#include "ghabuse/model.hpp"

namespace ghabuse::cli {

struct RunConfig {
    ThresholdConfig thresholds;
    ingest::ApiClientConfig client;
    /// Empty means every detector.
    std::vector<Detector> detectors;
    eval::ReportFormat format = eval::ReportFormat::jsonl;
    std::optional<std::filesystem::path> out;
    std::uint64_t seed = 0;
    std::string token_env = "GH_TOKEN";
    std::optional<std::filesystem::path> references;
    std::optional<std::filesystem::path> background;
    std::optional<std::filesystem::path> spam_model;
    double fake_stars_repo_fraction = 0.5;
};

/// Accepts a JSON object or key = value lines with optional [section]
/// headers; values are JSON literals or bare strings. Throws SchemaError.
nlohmann::json parse_config_text(std::string_view text);

/// Keys: thresholds (object), client (base_url, max_in_flight, retry_budget,
/// per_page), detectors, format, out, seed, token_env, references,
/// background, spam_model, fake_stars_repo_fraction. Relative paths resolve
/// against `base_dir`. Unknown keys raise SchemaError.
RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir, RunConfig base = {});

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {});

/// Comma-separated detector names; duplicates collapse. Throws InvalidInput
/// on an unknown name or an empty list.
std::vector<Detector> parse_detector_list(std::string_view csv);

}  // namespace ghabuse::cli
