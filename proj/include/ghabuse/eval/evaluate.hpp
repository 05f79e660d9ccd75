#pragma once

// Runs the detectors over a labeled manifest and scores them.

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "ghabuse/detectors.hpp"
#include "ghabuse/eval/corpus.hpp"
#include "ghabuse/eval/metrics.hpp"
#include "ghabuse/snapshot_json.hpp"

namespace ghabuse::eval {

/// Shared inputs that are not part of any single snapshot.
struct EvalArtifacts {
    std::vector<detectors::PopularReference> references;
    std::vector<textkit::Corpus::Document> background;
    std::optional<textkit::SpamModel> spam_model;
};

/// Reads popular_references.jsonl, background_readmes.jsonl and, when
/// present, spam_model.json from `dir`. Missing jsonl files give empty lists.
EvalArtifacts load_artifacts(const std::filesystem::path& dir);

textkit::SpamModel load_spam_model(const std::filesystem::path& path);
void store_spam_model(const std::filesystem::path& path, const textkit::SpamModel& model);

struct LoadedInstance {
    LabeledInstance meta;
    Snapshot primary;
    std::vector<Snapshot> context;
};

/// Loads every snapshot the manifest names, relative to its directory.
std::vector<LoadedInstance> load_instances(const std::filesystem::path& manifest_path);

struct EvalOptions {
    /// Fraction of flagged stargazers at which a repository counts as fake-starred.
    double fake_stars_repo_fraction = 0.5;
};

/// BM25 corpus over the keyword-stuffing instances' READMEs and the background.
textkit::Corpus keyword_corpus(std::span<const LoadedInstance> instances, const EvalArtifacts& artifacts);

/// Verdicts of the instance's detector. For fake stars the stargazer verdicts
/// are followed by the repository summary.
std::vector<DetectionVerdict> run_instance(const LoadedInstance& inst, const ThresholdConfig& cfg,
                                           const EvalArtifacts& artifacts, const textkit::Corpus& corpus,
                                           const EvalOptions& options = {});

/// Instance-level decision drawn from run_instance output.
bool decide(Detector d, std::span<const DetectionVerdict> verdicts);

struct InstanceOutcome {
    std::string instance_id;
    Detector subcategory = Detector::fake_stars;
    bool label = false;
    bool predicted = false;
};

struct EvaluationResult {
    std::vector<InstanceOutcome> outcomes;
    /// One row per subcategory present, in detector order.
    std::vector<MetricsRow> rows;
    MetricsRow overall;
};

EvaluationResult evaluate(std::span<const LoadedInstance> instances, const ThresholdConfig& cfg,
                          const EvalArtifacts& artifacts, const EvalOptions& options = {});

}  // namespace ghabuse::eval
