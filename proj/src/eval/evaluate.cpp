#include "ghabuse/eval/evaluate.hpp"

#include <fstream>

#include "ghabuse/error.hpp"
#include "ghabuse/ingest/store.hpp"

namespace ghabuse::eval {
namespace {

template <typename T>
const T& expect(const Snapshot& s, const LabeledInstance& meta, const char* what) {
    if (const auto* p = std::get_if<T>(&s)) return *p;
    throw InvalidInput(meta.instance_id + ": expected a " + what + " snapshot");
}

}  // namespace

textkit::SpamModel load_spam_model(const std::filesystem::path& path) {
    const auto text = ingest::read_text_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
    return textkit::SpamModel::from_json(j);
}

void store_spam_model(const std::filesystem::path& path, const textkit::SpamModel& model) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write " + path.string());
    out << model.to_json().dump() << "\n";
    if (!out) throw InvalidInput("cannot write " + path.string());
}

EvalArtifacts load_artifacts(const std::filesystem::path& dir) {
    EvalArtifacts a;
    if (std::filesystem::exists(dir / "popular_references.jsonl"))
        a.references = read_references(dir / "popular_references.jsonl");
    if (std::filesystem::exists(dir / "background_readmes.jsonl"))
        a.background = read_background(dir / "background_readmes.jsonl");
    if (std::filesystem::exists(dir / "spam_model.json")) a.spam_model = load_spam_model(dir / "spam_model.json");
    return a;
}

std::vector<LoadedInstance> load_instances(const std::filesystem::path& manifest_path) {
    const auto dir = manifest_path.parent_path();
    std::vector<LoadedInstance> out;
    for (auto& meta : read_manifest(manifest_path)) {
        LoadedInstance inst;
        inst.primary = ingest::load_snapshot(dir / meta.snapshot_path);
        for (const auto& p : meta.context_paths) inst.context.push_back(ingest::load_snapshot(dir / p));
        const bool is_repo = std::holds_alternative<RepoSnapshot>(inst.primary);
        if (is_repo != (meta.subject_kind == SubjectKind::repo))
            throw InvalidInput(meta.instance_id + ": snapshot kind does not match subject_kind");
        inst.meta = std::move(meta);
        out.push_back(std::move(inst));
    }
    return out;
}

textkit::Corpus keyword_corpus(std::span<const LoadedInstance> instances, const EvalArtifacts& artifacts) {
    std::vector<RepoSnapshot> batch;
    for (const auto& inst : instances)
        if (inst.meta.subcategory == Detector::keyword_stuffing)
            batch.push_back(expect<RepoSnapshot>(inst.primary, inst.meta, "repository"));
    return detectors::build_readme_corpus(batch, artifacts.background);
}

std::vector<DetectionVerdict> run_instance(const LoadedInstance& inst, const ThresholdConfig& cfg,
                                           const EvalArtifacts& artifacts, const textkit::Corpus& corpus,
                                           const EvalOptions& options) {
    const auto& meta = inst.meta;
    switch (meta.subcategory) {
        case Detector::fake_stars: {
            const auto& repo = expect<RepoSnapshot>(inst.primary, meta, "repository");
            std::vector<UserSnapshot> gazers;
            for (const auto& c : inst.context) gazers.push_back(expect<UserSnapshot>(c, meta, "user"));
            auto result = detectors::detect_fake_stars(repo, gazers, cfg);
            auto summary = detectors::summarize_fake_stars(repo, result, options.fake_stars_repo_fraction);
            auto out = std::move(result.verdicts);
            out.push_back(std::move(summary));
            return out;
        }
        case Detector::automatic_updates:
            return {detectors::detect_automatic_updates(expect<RepoSnapshot>(inst.primary, meta, "repository"), cfg)};
        case Detector::keyword_stuffing:
            return {detectors::detect_keyword_stuffing(expect<RepoSnapshot>(inst.primary, meta, "repository"), corpus,
                                                       cfg)};
        case Detector::typo_squatting:
            if (artifacts.references.empty())
                throw PreconditionViolation("typo_squatting needs popular references");
            return detectors::detect_typo_squatting(expect<RepoSnapshot>(inst.primary, meta, "repository"),
                                                    artifacts.references, cfg);
        case Detector::spoofed_contributor:
            if (inst.context.size() != 1) throw InvalidInput(meta.instance_id + ": expected one suspect snapshot");
            return {detectors::detect_spoofed_contributor(expect<RepoSnapshot>(inst.primary, meta, "repository"),
                                                          expect<UserSnapshot>(inst.context[0], meta, "user"), cfg)};
        case Detector::issue_spam:
            if (!artifacts.spam_model) throw PreconditionViolation("issue_spam needs a trained spam model");
            return detectors::detect_issue_spam(expect<RepoSnapshot>(inst.primary, meta, "repository"),
                                                artifacts.spam_model->classifier, artifacts.spam_model->tfidf, cfg);
        case Detector::reputation_farming: {
            std::vector<RepoSnapshot> repos;
            for (const auto& c : inst.context) repos.push_back(expect<RepoSnapshot>(c, meta, "repository"));
            return {detectors::detect_reputation_farming(expect<UserSnapshot>(inst.primary, meta, "user"), repos,
                                                         cfg)};
        }
        case Detector::fake_stats:
            return {detectors::detect_fake_stats(expect<UserSnapshot>(inst.primary, meta, "user"), cfg)};
    }
    throw InvalidInput("unknown detector");
}

bool decide(Detector d, std::span<const DetectionVerdict> verdicts) {
    if (d == Detector::fake_stars) return !verdicts.empty() && verdicts.back().flagged;
    for (const auto& v : verdicts)
        if (v.flagged) return true;
    return false;
}

EvaluationResult evaluate(std::span<const LoadedInstance> instances, const ThresholdConfig& cfg,
                          const EvalArtifacts& artifacts, const EvalOptions& options) {
    cfg.validate();
    const auto corpus = keyword_corpus(instances, artifacts);
    EvaluationResult result;
    std::array<Confusion, kAllDetectors.size()> per{};
    std::array<bool, kAllDetectors.size()> present{};
    Confusion overall;
    for (const auto& inst : instances) {
        const auto verdicts = run_instance(inst, cfg, artifacts, corpus, options);
        const bool predicted = decide(inst.meta.subcategory, verdicts);
        const auto i = static_cast<std::size_t>(inst.meta.subcategory);
        per[i].add(predicted, inst.meta.label);
        present[i] = true;
        overall.add(predicted, inst.meta.label);
        result.outcomes.push_back({inst.meta.instance_id, inst.meta.subcategory, inst.meta.label, predicted});
    }
    for (auto d : kAllDetectors) {
        const auto i = static_cast<std::size_t>(d);
        if (present[i]) result.rows.push_back(metrics_from_confusion(std::string(to_string(d)), per[i]));
    }
    result.overall = metrics_from_confusion("overall", overall);
    return result;
}

}  // namespace ghabuse::eval
