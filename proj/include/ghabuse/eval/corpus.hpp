#pragma once

// Labeled corpus manifest and the synthetic fixture generator.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ghabuse/detectors.hpp"
#include "ghabuse/model.hpp"

namespace ghabuse::eval {

struct LabeledInstance {
    std::string instance_id;
    Detector subcategory = Detector::fake_stars;
    SubjectKind subject_kind = SubjectKind::repo;
    std::string snapshot_path;  // relative to the manifest directory
    bool label = false;
    /// Extra snapshots the detector needs: stargazers (fake_stars), the suspect
    /// (spoofed_contributor) or the interacted repositories (reputation_farming).
    std::vector<std::string> context_paths;
    /// For near-miss negatives, the evidence clause that fails.
    std::optional<std::string> near_miss_clause;

    friend bool operator==(const LabeledInstance&, const LabeledInstance&) = default;
};

SubjectKind subject_kind_of(Detector d);

nlohmann::ordered_json to_json(const LabeledInstance& inst);
/// Strict: unknown fields raise SchemaError.
LabeledInstance instance_from_json(const nlohmann::json& j);

/// Throws InvalidInput on duplicate ids.
std::vector<LabeledInstance> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const std::vector<LabeledInstance>& instances);

struct CategoryCounts {
    std::int64_t positives = 0;
    std::int64_t negatives = 0;
};

/// Indexed by Detector.
using CorpusCounts = std::array<CategoryCounts, 8>;

/// 310 repository and 82 user instances, 196 positive and 196 negative.
CorpusCounts default_counts();

struct GeneratedCorpus {
    std::vector<LabeledInstance> instances;
    std::size_t files_written = 0;
};

/// Writes manifest.jsonl, snapshots/, background_readmes.jsonl,
/// popular_references.jsonl and spam_train.jsonl under `out_dir`. Output is a
/// pure function of (seed, counts, cfg). Throws InvalidInput when a count is
/// below 1.
GeneratedCorpus generate_fixture_corpus(std::uint64_t seed, const CorpusCounts& counts, const ThresholdConfig& cfg,
                                        const std::filesystem::path& out_dir);

struct LabeledText {
    std::string text;
    int label = 0;
};

std::vector<LabeledText> read_labeled_texts(const std::filesystem::path& path);
std::vector<textkit::Corpus::Document> read_background(const std::filesystem::path& path);
std::vector<detectors::PopularReference> read_references(const std::filesystem::path& path);

}  // namespace ghabuse::eval
