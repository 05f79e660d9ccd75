#pragma once

// One predicate evaluator per abuse subcategory. Every detector is a pure
// function of its snapshots and the threshold profile and records every clause
// it evaluated in the verdict's evidence, flagged or not.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ghabuse/model.hpp"
#include "ghabuse/textkit/bm25.hpp"
#include "ghabuse/textkit/spam_classifier.hpp"
#include "ghabuse/verdict.hpp"

namespace ghabuse::detectors {

/// A well-known project a typo-squatting candidate is compared against.
struct PopularReference {
    std::string full_name;
    std::string readme;
    std::int64_t star_count = 0;

    friend bool operator==(const PopularReference&, const PopularReference&) = default;
};

inline constexpr std::int64_t kDefaultPopularityFloor = 1000;

struct FakeStarsResult {
    std::vector<DetectionVerdict> verdicts;  // one per stargazer, input order
    std::size_t determinate = 0;
    std::size_t flagged = 0;
    /// flagged / determinate, or 0 when nothing could be judged.
    double flagged_fraction = 0.0;
};

/// Stargazer u is flagged when it starred the repo, |starred_repos| <= x1 and
/// it had at most epsilon activity events in [t_s, t_s + window_fake_stars).
/// A stargazer observed before the window closed is indeterminate.
/// Throws InvalidInput naming a stargazer without a star event on the repo.
FakeStarsResult detect_fake_stars(const RepoSnapshot& repo, std::span<const UserSnapshot> stargazers,
                                  const ThresholdConfig& cfg);

/// Repo-level roll-up of a fake-stars run: flagged when the fraction of
/// flagged determinate stargazers reaches `cutoff`.
DetectionVerdict summarize_fake_stars(const RepoSnapshot& repo, const FakeStarsResult& result,
                                      double cutoff);

/// Slides a window of window_auto_updates anchored at each commit; flagged
/// when some window holds >= x2 commits averaging <= y modified lines.
DetectionVerdict detect_automatic_updates(const RepoSnapshot& repo, const ThresholdConfig& cfg);

/// Flagged when at least x3 keywords score below theta_k relevance against
/// the README. The README must be registered in `corpus` under repo.full_name.
DetectionVerdict detect_keyword_stuffing(const RepoSnapshot& repo, const textkit::Corpus& corpus,
                                         const ThresholdConfig& cfg);

/// Corpus of the batch READMEs (keyed by full_name) plus background documents.
textkit::Corpus build_readme_corpus(std::span<const RepoSnapshot> batch,
                                    std::span<const textkit::Corpus::Document> background);

/// One verdict per reference whose name similarity reaches theta_t1 (the
/// candidate itself is skipped). Throws InvalidInput when `references` is
/// empty or a reference is below `popularity_floor` stars.
std::vector<DetectionVerdict> detect_typo_squatting(
    const RepoSnapshot& candidate, std::span<const PopularReference> references,
    const ThresholdConfig& cfg, std::int64_t popularity_floor = kDefaultPopularityFloor);

/// max(a,b) / min(a,b) with the smaller value clamped to 1 / kRepoPopularityCap.
double popularity_ratio(double a, double b);

/// Commits authored or co-authored by `login` (case-insensitive).
std::vector<const CommitRecord*> attributed_commits(const RepoSnapshot& repo, std::string_view login);

/// Throws PreconditionViolation when the suspect is not attributed on any commit.
DetectionVerdict detect_spoofed_contributor(const RepoSnapshot& repo, const UserSnapshot& suspect,
                                            const ThresholdConfig& cfg);

/// One verdict per issue: flagged when the issue carries a link or a command
/// and the classifier probability reaches classifier.threshold. Throws
/// InvalidInput when the classifier does not match the vectorizer.
std::vector<DetectionVerdict> detect_issue_spam(const RepoSnapshot& repo,
                                                const textkit::SpamClassifier& classifier,
                                                const textkit::TfIdfModel& tfidf,
                                                const ThresholdConfig& cfg);

/// Counts the user's interactions with issues/PRs of `repos` that landed in
/// [t_closed + delta_t, t_closed + window_rep_farming).
DetectionVerdict detect_reputation_farming(const UserSnapshot& user,
                                           std::span<const RepoSnapshot> repos,
                                           const ThresholdConfig& cfg);

/// Flagged when a stat widget references another account, or the claimed
/// star count is at least x5 away from the owned repositories' total.
DetectionVerdict detect_fake_stats(const UserSnapshot& user, const ThresholdConfig& cfg);

/// Hosts of the third-party profile statistics widgets.
std::span<const std::string_view> default_widget_hosts();
bool is_widget_url(std::string_view url, std::span<const std::string_view> hosts);
bool is_widget_url(std::string_view url);

/// Account a widget URL renders statistics for, or nullopt if the URL cannot
/// be parsed or names no account.
std::optional<std::string> widget_account(std::string_view url);

bool iequals(std::string_view a, std::string_view b);

}  // namespace ghabuse::detectors
