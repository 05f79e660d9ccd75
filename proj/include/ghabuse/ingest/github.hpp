#pragma once

// GitHub REST client and snapshot assembly.

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <utility>
#include <vector>

#include "ghabuse/ingest/transport.hpp"
#include "ghabuse/model.hpp"

namespace ghabuse::ingest {

struct ApiClientConfig {
    std::string base_url = "https://api.github.com";
    std::optional<std::string> auth_token;  // falls back to $GH_TOKEN
    std::int64_t max_in_flight = 4;
    std::int64_t retry_budget = 3;
    std::int64_t per_page = 100;

    /// Throws InvalidInput.
    void validate() const;
};

struct FetchReport {
    std::string subject;
    std::int64_t requests_made = 0;
    std::int64_t rate_limit_remaining = -1;  // -1 when never advertised
    bool truncated = false;
    std::vector<std::string> warnings;
};

struct RepoLimits {
    std::int64_t max_commits = 100;
    std::int64_t max_issues = 100;  // issues and pull requests each
    std::int64_t max_stars = 100;
};

struct UserLimits {
    std::int64_t max_starred = 100;
    std::int64_t max_events = 100;
    std::int64_t max_owned_repos = 100;
};

using Clock = std::function<UnixSeconds()>;
using Sleeper = std::function<void(std::int64_t seconds)>;

Clock system_clock();
Sleeper thread_sleeper();

class ApiClient {
public:
    ApiClient(ApiClientConfig cfg, std::shared_ptr<Transport> transport, Clock clock = system_clock(),
              Sleeper sleeper = thread_sleeper());

    const ApiClientConfig& config() const { return cfg_; }
    UnixSeconds now() const { return clock_(); }

    /// Sends a GET with retries. Returns any final response with status < 500
    /// other than a rate-limit refusal; callers interpret 404 themselves.
    /// Throws RateLimited or TransportError when the retry budget runs out.
    HttpResponse get(const std::string& path, const QueryParams& query = {},
                     const std::string& accept = "application/vnd.github+json",
                     FetchReport* report = nullptr);

    /// GET that must return 200 JSON; 404 raises SubjectNotFound naming `subject`.
    nlohmann::json get_json(const std::string& path, const QueryParams& query,
                            const std::string& subject, FetchReport* report,
                            const std::string& accept = "application/vnd.github+json");

    /// Walks ?page=1,2,... until a short page or `limit` items. Sets
    /// report->truncated when the limit is hit.
    std::vector<nlohmann::json> get_pages(const std::string& path, QueryParams query,
                                          std::int64_t limit, const std::string& subject,
                                          FetchReport* report,
                                          const std::string& accept = "application/vnd.github+json",
                                          const std::function<bool(const nlohmann::json&)>& keep = {});

private:
    void wait_for_budget();

    ApiClientConfig cfg_;
    std::optional<std::string> token_;
    std::shared_ptr<Transport> transport_;
    Clock clock_;
    Sleeper sleeper_;
    std::counting_semaphore<> slots_;
    std::mutex limit_mutex_;
    UnixSeconds blocked_until_ = 0;
};

std::pair<RepoSnapshot, FetchReport> fetch_repo_snapshot(ApiClient& client, const std::string& full_name,
                                                         const RepoLimits& limits = {});

std::pair<UserSnapshot, FetchReport> fetch_user_snapshot(ApiClient& client, const std::string& login,
                                                         const UserLimits& limits = {});

/// Repositories pushed at or after `since` (search order, most recently
/// updated first, deduplicated) that have at least `min_pushes` commits since
/// then. Throws PreconditionViolation when `since` is not in the past.
std::vector<std::string> candidate_repos_recent_updates(ApiClient& client, std::int64_t min_pushes,
                                                        UnixSeconds since, std::int64_t max_results = 100);

/// Login encoded in a GitHub noreply address ("123+login@users.noreply.github.com").
std::optional<std::string> login_from_noreply(const std::string& email);

/// Emails of "Co-authored-by: Name <email>" trailers in a commit message.
std::vector<std::string> co_author_emails(const std::string& message);

}  // namespace ghabuse::ingest
