#include "ghabuse/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "ghabuse/error.hpp"

namespace ghabuse {
namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view s, const std::array<std::string_view, N>& names,
                std::string_view what) {
    for (std::size_t i = 0; i < N; ++i)
        if (names[i] == s) return static_cast<Enum>(i);
    throw InvalidInput("unknown " + std::string(what) + " '" + std::string(s) + "'");
}

constexpr std::array<std::string_view, 8> kDetectorNames = {
    "fake_stars",          "automatic_updates", "keyword_stuffing",   "typo_squatting",
    "spoofed_contributor", "issue_spam",        "reputation_farming", "fake_stats",
};
constexpr std::array<std::string_view, 2> kIssueStates = {"open", "closed"};
constexpr std::array<std::string_view, 3> kPullStates = {"open", "closed", "merged"};
constexpr std::array<std::string_view, 9> kActivityKinds = {
    "commit",     "issue_opened", "issue_comment", "pr_opened", "pr_review",
    "pr_comment", "star",         "fork",          "other",
};
constexpr std::array<std::string_view, 2> kSubjectKinds = {"repo", "user"};

[[noreturn]] void invalid(const std::string& subject, const std::string& msg) {
    throw InvalidInput(subject + ": " + msg);
}

bool is_hex40(std::string_view s) {
    return s.size() == 40 && std::all_of(s.begin(), s.end(), [](char c) {
               return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
           });
}

bool has_upper_ascii(std::string_view s) {
    return std::any_of(s.begin(), s.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

}  // namespace

std::string_view RepoSnapshot::name() const {
    const auto slash = full_name.find('/');
    return slash == std::string::npos ? std::string_view(full_name)
                                      : std::string_view(full_name).substr(slash + 1);
}

std::string_view RepoSnapshot::owner() const {
    const auto slash = full_name.find('/');
    return std::string_view(full_name).substr(0, slash);
}

std::string_view to_string(Detector d) { return kDetectorNames[static_cast<std::size_t>(d)]; }
Detector parse_detector(std::string_view name) {
    return parse_enum<Detector>(name, kDetectorNames, "detector");
}
std::string_view to_string(IssueState s) { return kIssueStates[static_cast<std::size_t>(s)]; }
std::string_view to_string(PullRequestState s) { return kPullStates[static_cast<std::size_t>(s)]; }
std::string_view to_string(ActivityKind k) { return kActivityKinds[static_cast<std::size_t>(k)]; }
std::string_view to_string(SubjectKind k) { return kSubjectKinds[static_cast<std::size_t>(k)]; }
IssueState parse_issue_state(std::string_view s) {
    return parse_enum<IssueState>(s, kIssueStates, "issue state");
}
PullRequestState parse_pull_request_state(std::string_view s) {
    return parse_enum<PullRequestState>(s, kPullStates, "pull request state");
}
ActivityKind parse_activity_kind(std::string_view s) {
    return parse_enum<ActivityKind>(s, kActivityKinds, "activity kind");
}
SubjectKind parse_subject_kind(std::string_view s) {
    return parse_enum<SubjectKind>(s, kSubjectKinds, "subject kind");
}

void ThresholdConfig::validate() const {
    auto need = [](bool ok, const char* msg) {
        if (!ok) throw InvalidInput(std::string("threshold config: ") + msg);
    };
    need(x1 >= 0 && x2 >= 0 && x3 >= 0 && x4 >= 0 && x5 >= 0, "count thresholds must be >= 0");
    need(epsilon >= 0, "epsilon must be >= 0");
    need(std::isfinite(y) && y >= 0, "y must be finite and >= 0");
    need(theta_k >= 0 && theta_k <= 1, "theta_k must be in [0,1]");
    need(theta_t1 >= 0 && theta_t1 <= 1, "theta_t1 must be in [0,1]");
    need(theta_t2 >= 0 && theta_t2 <= 1, "theta_t2 must be in [0,1]");
    need(std::isfinite(phi_p1) && phi_p1 >= 1, "phi_p1 must be >= 1");
    need(phi_p2 >= 0 && phi_p2 <= 1, "phi_p2 must be in [0,1]");
    need(phi_p3 >= 0 && phi_p3 <= 1, "phi_p3 must be in [0,1]");
    need(delta_t >= 0, "delta_t must be >= 0");
    need(window_fake_stars > 0 && window_auto_updates > 0 && window_rep_farming > 0,
         "windows must be strictly positive");
    need(farming_min_events >= 1, "farming_min_events must be >= 1");
}

void validate(const RepoSnapshot& repo) {
    const std::string& who = repo.full_name;
    const auto slash = repo.full_name.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == repo.full_name.size() ||
        repo.full_name.find('/', slash + 1) != std::string::npos)
        invalid("repo '" + who + "'", "full_name must be 'owner/name'");
    std::unordered_set<std::string_view> seen;
    for (const auto& k : repo.keywords) {
        if (k.empty()) invalid(who, "empty keyword");
        if (has_upper_ascii(k)) invalid(who, "keyword '" + k + "' is not lowercase");
        if (!seen.insert(k).second) invalid(who, "duplicate keyword '" + k + "'");
    }
    if (repo.star_count < 0 || repo.fork_count < 0) invalid(who, "negative star/fork count");
    for (std::size_t i = 0; i < repo.star_events.size(); ++i) {
        const auto& e = repo.star_events[i];
        if (i > 0 && e.starred_at < repo.star_events[i - 1].starred_at)
            invalid(who, "star_events not sorted by timestamp");
        if (e.starred_at > repo.snapshot_at)
            invalid(who, "star event by '" + e.user_login + "' after snapshot_at");
    }
    std::unordered_set<std::string_view> shas;
    for (std::size_t i = 0; i < repo.commits.size(); ++i) {
        const auto& c = repo.commits[i];
        if (!is_hex40(c.sha)) invalid(who, "commit sha '" + c.sha + "' is not 40 hex chars");
        if (!shas.insert(c.sha).second) invalid(who, "duplicate commit sha " + c.sha);
        if (c.lines_added < 0 || c.lines_deleted < 0)
            invalid(who, "negative line counts in commit " + c.sha);
        if (i > 0 && c.timestamp < repo.commits[i - 1].timestamp)
            invalid(who, "commits not sorted by timestamp");
    }
    for (const auto& is : repo.issues) {
        if (is.number <= 0) invalid(who, "issue number must be positive");
        if (is.closed_at.has_value() != (is.state == IssueState::closed))
            invalid(who, "issue #" + std::to_string(is.number) +
                             ": closed_at present iff state is closed");
        if (is.closed_at && *is.closed_at < is.created_at)
            invalid(who, "issue #" + std::to_string(is.number) + " closed before creation");
    }
    for (const auto& pr : repo.pull_requests) {
        if (pr.number <= 0) invalid(who, "pull request number must be positive");
        if (pr.merged_or_closed_at.has_value() != (pr.state != PullRequestState::open))
            invalid(who, "pull request #" + std::to_string(pr.number) +
                             ": merged_or_closed_at present iff state is not open");
        if (pr.merged_or_closed_at && *pr.merged_or_closed_at < pr.created_at)
            invalid(who, "pull request #" + std::to_string(pr.number) + " closed before creation");
    }
}

void validate(const UserSnapshot& user) {
    const std::string who = "user '" + user.login + "'";
    if (user.login.empty()) invalid(who, "empty login");
    std::set<std::string_view> starred(user.starred_repos.begin(), user.starred_repos.end());
    if (starred.size() != user.starred_repos.size()) invalid(who, "duplicate starred repo");
    for (const auto& r : user.owned_repos)
        if (r.star_count < 0) invalid(who, "negative star count on " + r.full_name);
    for (std::size_t i = 0; i < user.activity.size(); ++i) {
        if (i > 0 && user.activity[i].timestamp < user.activity[i - 1].timestamp)
            invalid(who, "activity not sorted by timestamp");
        if (user.activity[i].timestamp > user.snapshot_at)
            invalid(who, "activity event after snapshot_at");
    }
    for (const auto& url : user.stat_widget_urls)
        if (user.profile_readme.find(url) == std::string::npos)
            invalid(who, "stat widget url not present in profile readme: " + url);
    if (user.claimed_star_count && *user.claimed_star_count < 0)
        invalid(who, "negative claimed star count");
    if (user.follower_count < 0) invalid(who, "negative follower count");
}

std::int64_t activity_count(const UserSnapshot& user, UnixSeconds start, UnixSeconds end) {
    if (start > end)
        throw PreconditionViolation("activity_count: interval start " + std::to_string(start) +
                                    " is after end " + std::to_string(end));
    auto by_time = [](const ActivityEvent& e, UnixSeconds t) { return e.timestamp < t; };
    const auto lo = std::lower_bound(user.activity.begin(), user.activity.end(), start, by_time);
    const auto hi = std::lower_bound(lo, user.activity.end(), end, by_time);
    return hi - lo;
}

double normalized_popularity(std::int64_t raw, std::int64_t scale_cap) {
    if (scale_cap <= 0) throw InvalidInput("normalized_popularity: scale_cap must be positive");
    if (raw < 0) throw InvalidInput("normalized_popularity: raw count must be non-negative");
    const double v = std::log10(1.0 + static_cast<double>(raw)) /
                     std::log10(1.0 + static_cast<double>(scale_cap));
    return std::min(1.0, v);
}

}  // namespace ghabuse
