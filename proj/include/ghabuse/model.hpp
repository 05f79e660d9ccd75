#pragma once

// Offline snapshot data model. Every symbol used by the abuse predicates
// lives in one of these types; nothing here talks to the network.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ghabuse/time.hpp"

namespace ghabuse {

struct StarEvent {
    std::string user_login;
    UnixSeconds starred_at = 0;

    friend bool operator==(const StarEvent&, const StarEvent&) = default;
};

struct CommitRecord {
    std::string sha;
    std::string author_login;
    std::vector<std::string> co_authors;
    UnixSeconds timestamp = 0;
    std::int64_t lines_added = 0;
    std::int64_t lines_deleted = 0;
    std::vector<std::string> touched_paths;

    std::int64_t modified_lines() const { return lines_added + lines_deleted; }

    friend bool operator==(const CommitRecord&, const CommitRecord&) = default;
};

enum class IssueState { open, closed };
enum class PullRequestState { open, closed, merged };

struct IssueRecord {
    std::int64_t number = 0;
    std::string author_login;
    std::string title;
    std::string body;
    UnixSeconds created_at = 0;
    std::optional<UnixSeconds> closed_at;
    IssueState state = IssueState::open;

    friend bool operator==(const IssueRecord&, const IssueRecord&) = default;
};

struct PullRequestRecord {
    std::int64_t number = 0;
    std::string author_login;
    std::string title;
    std::string body;
    UnixSeconds created_at = 0;
    std::optional<UnixSeconds> merged_or_closed_at;
    PullRequestState state = PullRequestState::open;

    friend bool operator==(const PullRequestRecord&, const PullRequestRecord&) = default;
};

struct RepoSnapshot {
    std::string full_name;
    std::string description;
    std::string readme;
    std::vector<std::string> keywords;
    std::int64_t star_count = 0;
    std::int64_t fork_count = 0;
    std::vector<StarEvent> star_events;
    std::vector<CommitRecord> commits;
    std::vector<IssueRecord> issues;
    std::vector<PullRequestRecord> pull_requests;
    UnixSeconds snapshot_at = 0;

    /// Text after the "/" of full_name.
    std::string_view name() const;
    std::string_view owner() const;

    friend bool operator==(const RepoSnapshot&, const RepoSnapshot&) = default;
};

enum class ActivityKind {
    commit,
    issue_opened,
    issue_comment,
    pr_opened,
    pr_review,
    pr_comment,
    star,
    fork,
    other,
};

struct ActivityEvent {
    ActivityKind kind = ActivityKind::other;
    UnixSeconds timestamp = 0;
    std::string target;  // "owner/name" or "owner/name#number"

    friend bool operator==(const ActivityEvent&, const ActivityEvent&) = default;
};

struct OwnedRepo {
    std::string full_name;
    std::int64_t star_count = 0;

    friend bool operator==(const OwnedRepo&, const OwnedRepo&) = default;
};

struct UserSnapshot {
    std::string login;
    std::vector<std::string> starred_repos;
    std::vector<OwnedRepo> owned_repos;
    std::vector<ActivityEvent> activity;
    std::string profile_readme;
    std::vector<std::string> stat_widget_urls;
    std::optional<std::int64_t> claimed_star_count;
    std::int64_t follower_count = 0;
    UnixSeconds snapshot_at = 0;

    friend bool operator==(const UserSnapshot&, const UserSnapshot&) = default;
};

/// Tunable thresholds of the eight predicates, with their defaults.
struct ThresholdConfig {
    std::int64_t x1 = 2;   // max starred repos of a fake stargazer
    std::int64_t x2 = 50;  // min commits in an auto-update window
    std::int64_t x3 = 5;   // min low-relevance keywords
    std::int64_t x4 = 3;   // max attributed commits of a spoofed contributor
    std::int64_t x5 = 10;  // min claimed-vs-actual star gap
    std::int64_t epsilon = 1;
    double y = 3.0;
    double theta_k = 0.10;
    double theta_t1 = 0.80;
    double theta_t2 = 0.60;
    double phi_p1 = 3.0;
    double phi_p2 = 0.40;
    double phi_p3 = 0.50;
    UnixSeconds delta_t = 3600;
    UnixSeconds window_fake_stars = 30 * kSecondsPerDay;
    UnixSeconds window_auto_updates = 7 * kSecondsPerDay;
    UnixSeconds window_rep_farming = 90 * kSecondsPerDay;
    std::int64_t farming_min_events = 3;
    bool farming_strict = false;

    /// Throws InvalidInput when a value is outside its range.
    void validate() const;

    friend bool operator==(const ThresholdConfig&, const ThresholdConfig&) = default;
};

enum class Detector {
    fake_stars,
    automatic_updates,
    keyword_stuffing,
    typo_squatting,
    spoofed_contributor,
    issue_spam,
    reputation_farming,
    fake_stats,
};

inline constexpr std::array<Detector, 8> kAllDetectors = {
    Detector::fake_stars,          Detector::automatic_updates, Detector::keyword_stuffing,
    Detector::typo_squatting,      Detector::spoofed_contributor, Detector::issue_spam,
    Detector::reputation_farming,  Detector::fake_stats,
};

std::string_view to_string(Detector d);
/// Throws InvalidInput on an unknown name.
Detector parse_detector(std::string_view name);

std::string_view to_string(IssueState s);
std::string_view to_string(PullRequestState s);
std::string_view to_string(ActivityKind k);
IssueState parse_issue_state(std::string_view s);
PullRequestState parse_pull_request_state(std::string_view s);
ActivityKind parse_activity_kind(std::string_view s);

enum class SubjectKind { repo, user };
std::string_view to_string(SubjectKind k);
SubjectKind parse_subject_kind(std::string_view s);

/// Throws InvalidInput describing the first violated invariant.
void validate(const RepoSnapshot& repo);
void validate(const UserSnapshot& user);

/// Number of activity events with start <= timestamp < end.
/// Throws PreconditionViolation when start > end.
std::int64_t activity_count(const UserSnapshot& user, UnixSeconds start, UnixSeconds end);

/// min(1, log10(1 + raw) / log10(1 + scale_cap)). Throws InvalidInput if
/// scale_cap <= 0 or raw < 0.
double normalized_popularity(std::int64_t raw, std::int64_t scale_cap);

inline constexpr std::int64_t kRepoPopularityCap = 100000;
inline constexpr std::int64_t kUserPopularityCap = 10000;

inline double repo_popularity(std::int64_t stars) {
    return normalized_popularity(stars, kRepoPopularityCap);
}
inline double user_popularity(std::int64_t followers) {
    return normalized_popularity(followers, kUserPopularityCap);
}

}  // namespace ghabuse
