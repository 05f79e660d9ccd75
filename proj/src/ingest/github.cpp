#include "ghabuse/ingest/github.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <set>
#include <thread>
#include <tuple>

#include "ghabuse/detectors.hpp"
#include "ghabuse/error.hpp"
#include "ghabuse/textkit/extract.hpp"

namespace ghabuse::ingest {
namespace {

using nlohmann::json;

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::optional<std::int64_t> parse_int(const std::string& s) {
    if (s.empty()) return std::nullopt;
    try {
        std::size_t used = 0;
        const auto v = std::stoll(s, &used);
        if (used != s.size()) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::string str(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return "";
    return j.at(key).get<std::string>();
}

std::int64_t num(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return 0;
    return j.at(key).get<std::int64_t>();
}

std::optional<UnixSeconds> opt_time(const json& j, const char* key) {
    const auto s = str(j, key);
    if (s.empty()) return std::nullopt;
    return parse_iso8601(s);
}

std::string nested_login(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_object()) return "";
    return str(j.at(key), "login");
}

/// Runs fn(0..n-1) on up to `workers` threads; rethrows the failure with the
/// lowest index.
template <typename Fn>
void parallel_for(std::size_t n, std::int64_t workers, Fn fn) {
    if (n == 0) return;
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto count = std::min<std::size_t>(n, static_cast<std::size_t>(std::max<std::int64_t>(1, workers)));
    std::vector<std::thread> threads;
    for (std::size_t t = 1; t < count; ++t) threads.emplace_back(run);
    run();
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

void check_full_name(const std::string& full_name) {
    const auto slash = full_name.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == full_name.size() ||
        full_name.find('/', slash + 1) != std::string::npos)
        throw InvalidInput("repository must be 'owner/name', got '" + full_name + "'");
}

ActivityEvent map_event(const json& e) {
    ActivityEvent out;
    out.timestamp = parse_iso8601(str(e, "created_at"));
    const std::string repo = e.contains("repo") ? str(e.at("repo"), "name") : "";
    out.target = repo;
    const std::string type = str(e, "type");
    const json payload = e.value("payload", json::object());
    const std::string action = str(payload, "action");
    auto numbered = [&](const char* key) {
        if (payload.contains(key) && payload.at(key).is_object())
            out.target = repo + "#" + std::to_string(num(payload.at(key), "number"));
    };
    if (type == "PushEvent") {
        out.kind = ActivityKind::commit;
    } else if (type == "IssuesEvent") {
        out.kind = action == "opened" ? ActivityKind::issue_opened : ActivityKind::other;
        numbered("issue");
    } else if (type == "IssueCommentEvent") {
        const bool on_pr = payload.contains("issue") && payload.at("issue").contains("pull_request");
        out.kind = on_pr ? ActivityKind::pr_comment : ActivityKind::issue_comment;
        numbered("issue");
    } else if (type == "PullRequestEvent") {
        out.kind = action == "opened" ? ActivityKind::pr_opened : ActivityKind::other;
        numbered("pull_request");
    } else if (type == "PullRequestReviewEvent") {
        out.kind = ActivityKind::pr_review;
        numbered("pull_request");
    } else if (type == "PullRequestReviewCommentEvent") {
        out.kind = ActivityKind::pr_comment;
        numbered("pull_request");
    } else if (type == "WatchEvent") {
        out.kind = ActivityKind::star;
    } else if (type == "ForkEvent") {
        out.kind = ActivityKind::fork;
    } else {
        out.kind = ActivityKind::other;
    }
    return out;
}

}  // namespace

void ApiClientConfig::validate() const {
    if (base_url.empty()) throw InvalidInput("api client: base_url is empty");
    if (max_in_flight < 1) throw InvalidInput("api client: max_in_flight must be >= 1");
    if (retry_budget < 0) throw InvalidInput("api client: retry_budget must be >= 0");
    if (per_page < 1 || per_page > 100) throw InvalidInput("api client: per_page must be in [1,100]");
}

Clock system_clock() {
    return [] {
        return std::chrono::duration_cast<std::chrono::seconds>(
                   std::chrono::system_clock::now().time_since_epoch())
            .count();
    };
}

Sleeper thread_sleeper() {
    return [](std::int64_t seconds) {
        if (seconds > 0) std::this_thread::sleep_for(std::chrono::seconds(seconds));
    };
}

ApiClient::ApiClient(ApiClientConfig cfg, std::shared_ptr<Transport> transport, Clock clock, Sleeper sleeper)
    : cfg_(std::move(cfg)),
      transport_(std::move(transport)),
      clock_(std::move(clock)),
      sleeper_(std::move(sleeper)),
      slots_(static_cast<std::ptrdiff_t>(std::max<std::int64_t>(cfg_.max_in_flight, 1))) {
    cfg_.validate();
    if (!transport_) throw InvalidInput("api client: no transport");
    token_ = cfg_.auth_token;
    if (!token_) {
        if (const char* env = std::getenv("GH_TOKEN"); env && *env) token_ = env;
    }
}

void ApiClient::wait_for_budget() {
    UnixSeconds until;
    {
        std::lock_guard lock(limit_mutex_);
        until = blocked_until_;
    }
    const auto t = clock_();
    if (t < until) sleeper_(until - t);
}

HttpResponse ApiClient::get(const std::string& path, const QueryParams& query, const std::string& accept,
                            FetchReport* report) {
    HttpRequest req;
    req.path = path;
    req.query = query;
    req.headers["Accept"] = accept;
    req.headers["User-Agent"] = "ghabuse";
    req.headers["X-GitHub-Api-Version"] = "2022-11-28";
    if (token_) req.headers["Authorization"] = "Bearer " + *token_;

    std::string last_error;
    const auto attempts = cfg_.retry_budget + 1;
    for (std::int64_t attempt = 0; attempt < attempts; ++attempt) {
        wait_for_budget();
        HttpResponse res;
        bool received = false;
        slots_.acquire();
        try {
            res = transport_->send(req);
            received = true;
        } catch (const TransportError& e) {
            last_error = e.what();
        }
        slots_.release();

        // -1 when the header is absent.
        const std::int64_t remaining = received ? parse_int(res.header("x-ratelimit-remaining")).value_or(-1) : -1;
        const std::int64_t reset = received ? parse_int(res.header("x-ratelimit-reset")).value_or(-1) : -1;
        const std::int64_t retry_after = received ? parse_int(res.header("retry-after")).value_or(-1) : -1;
        {
            std::lock_guard lock(limit_mutex_);
            if (report) {
                ++report->requests_made;
                if (remaining >= 0) report->rate_limit_remaining = remaining;
            }
            if (remaining == 0 && reset >= 0) blocked_until_ = std::max(blocked_until_, reset);
        }
        if (!received) {
            if (attempt + 1 < attempts) sleeper_(std::int64_t{1} << std::min<std::int64_t>(attempt, 6));
            continue;
        }
        const bool limited = (res.status == 403 || res.status == 429) && (remaining == 0 || retry_after >= 0);
        if (limited) {
            const UnixSeconds reset_at = retry_after >= 0 ? clock_() + retry_after : reset >= 0 ? reset : clock_();
            if (attempt + 1 >= attempts)
                throw RateLimited("GET " + path + ": rate limit exhausted until " + format_iso8601(reset_at),
                                  reset_at);
            std::lock_guard lock(limit_mutex_);
            blocked_until_ = std::max(blocked_until_, reset_at);
            continue;
        }
        if (res.status >= 500) {
            last_error = "HTTP " + std::to_string(res.status);
            if (attempt + 1 < attempts) sleeper_(std::int64_t{1} << std::min<std::int64_t>(attempt, 6));
            continue;
        }
        return res;
    }
    throw TransportError("GET " + path + " failed after " + std::to_string(attempts) +
                         " attempts: " + last_error);
}

json ApiClient::get_json(const std::string& path, const QueryParams& query, const std::string& subject,
                         FetchReport* report, const std::string& accept) {
    const auto res = get(path, query, accept, report);
    if (res.status == 404) throw SubjectNotFound(subject + " not found (GET " + path + ")");
    if (res.status != 200)
        throw TransportError("GET " + path + ": unexpected HTTP " + std::to_string(res.status));
    try {
        return json::parse(res.body);
    } catch (const json::parse_error& e) {
        throw TransportError("GET " + path + ": malformed JSON: " + e.what());
    }
}

std::vector<json> ApiClient::get_pages(const std::string& path, QueryParams query, std::int64_t limit,
                                       const std::string& subject, FetchReport* report,
                                       const std::string& accept,
                                       const std::function<bool(const json&)>& keep) {
    std::vector<json> out;
    if (limit <= 0) return out;
    query.emplace_back("per_page", std::to_string(cfg_.per_page));
    for (std::int64_t page = 1;; ++page) {
        auto q = query;
        q.emplace_back("page", std::to_string(page));
        json body = get_json(path, q, subject, report, accept);
        if (body.is_object() && body.contains("items")) body = body.at("items");
        if (!body.is_array()) throw TransportError("GET " + path + ": expected a JSON array");
        for (std::size_t i = 0; i < body.size(); ++i) {
            if (keep && !keep(body[i])) continue;
            out.push_back(body[i]);
            if (static_cast<std::int64_t>(out.size()) == limit) {
                const bool more = i + 1 < body.size() || static_cast<std::int64_t>(body.size()) == cfg_.per_page;
                if (more && report) {
                    std::lock_guard lock(limit_mutex_);
                    report->truncated = true;
                }
                return out;
            }
        }
        if (static_cast<std::int64_t>(body.size()) < cfg_.per_page) return out;
    }
}

std::optional<std::string> login_from_noreply(const std::string& email) {
    const std::string suffix = "@users.noreply.github.com";
    const auto e = lower(email);
    if (e.size() <= suffix.size() || e.compare(e.size() - suffix.size(), suffix.size(), suffix) != 0)
        return std::nullopt;
    std::string local = email.substr(0, email.size() - suffix.size());
    if (const auto plus = local.find('+'); plus != std::string::npos) local = local.substr(plus + 1);
    if (local.empty()) return std::nullopt;
    return local;
}

std::vector<std::string> co_author_emails(const std::string& message) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= message.size()) {
        auto end = message.find('\n', start);
        if (end == std::string::npos) end = message.size();
        std::string line = message.substr(start, end - start);
        start = end + 1;
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        line = line.substr(first);
        const std::string tag = "co-authored-by:";
        if (lower(line.substr(0, tag.size())) != tag) continue;
        const auto lt = line.find('<'), gt = line.rfind('>');
        if (lt == std::string::npos || gt == std::string::npos || gt <= lt + 1) continue;
        out.push_back(line.substr(lt + 1, gt - lt - 1));
    }
    return out;
}

std::pair<RepoSnapshot, FetchReport> fetch_repo_snapshot(ApiClient& client, const std::string& full_name,
                                                         const RepoLimits& limits) {
    check_full_name(full_name);
    FetchReport report;
    report.subject = full_name;
    const std::string base = "/repos/" + full_name;

    RepoSnapshot repo;
    const auto meta = client.get_json(base, {}, full_name, &report);
    repo.full_name = meta.value("full_name", full_name);
    repo.description = str(meta, "description");
    repo.star_count = num(meta, "stargazers_count");
    repo.fork_count = num(meta, "forks_count");
    if (meta.contains("topics") && meta.at("topics").is_array()) {
        for (const auto& t : meta.at("topics")) {
            const auto k = lower(t.get<std::string>());
            if (!k.empty() && std::find(repo.keywords.begin(), repo.keywords.end(), k) == repo.keywords.end())
                repo.keywords.push_back(k);
        }
    }

    const auto readme = client.get(base + "/readme", {}, "application/vnd.github.raw", &report);
    if (readme.status == 200) {
        repo.readme = readme.body;
    } else if (readme.status != 404) {
        throw TransportError("GET " + base + "/readme: unexpected HTTP " + std::to_string(readme.status));
    }

    const auto commits = client.get_pages(base + "/commits", {}, limits.max_commits, full_name, &report);
    repo.commits.resize(commits.size());
    std::vector<std::vector<std::string>> commit_warnings(commits.size());
    for (std::size_t i = 0; i < commits.size(); ++i) {
        const auto& c = commits[i];
        auto& rec = repo.commits[i];
        rec.sha = str(c, "sha");
        rec.author_login = nested_login(c, "author");
        const json inner = c.value("commit", json::object());
        const json author = inner.value("author", json::object());
        rec.timestamp = parse_iso8601(str(author, "date"));
        if (rec.author_login.empty())
            commit_warnings[i].push_back("commit " + rec.sha + ": author has no linked account");
        for (const auto& email : co_author_emails(str(inner, "message"))) {
            if (auto login = login_from_noreply(email)) {
                if (std::find(rec.co_authors.begin(), rec.co_authors.end(), *login) == rec.co_authors.end())
                    rec.co_authors.push_back(*login);
            } else {
                commit_warnings[i].push_back("commit " + rec.sha + ": co-author <" + email +
                                             "> has no noreply login");
            }
        }
    }
    parallel_for(repo.commits.size(), client.config().max_in_flight, [&](std::size_t i) {
        auto& rec = repo.commits[i];
        const auto detail = client.get_json(base + "/commits/" + rec.sha, {}, full_name, &report);
        const json stats = detail.value("stats", json::object());
        rec.lines_added = num(stats, "additions");
        rec.lines_deleted = num(stats, "deletions");
        if (detail.contains("files") && detail.at("files").is_array())
            for (const auto& f : detail.at("files")) rec.touched_paths.push_back(str(f, "filename"));
    });
    for (auto& w : commit_warnings) report.warnings.insert(report.warnings.end(), w.begin(), w.end());

    const auto issues = client.get_pages(base + "/issues", {{"state", "all"}}, limits.max_issues, full_name,
                                         &report, "application/vnd.github+json",
                                         [](const json& j) { return !j.contains("pull_request"); });
    for (const auto& j : issues) {
        IssueRecord is;
        is.number = num(j, "number");
        is.author_login = nested_login(j, "user");
        is.title = str(j, "title");
        is.body = str(j, "body");
        is.created_at = parse_iso8601(str(j, "created_at"));
        is.closed_at = opt_time(j, "closed_at");
        is.state = is.closed_at ? IssueState::closed : IssueState::open;
        repo.issues.push_back(std::move(is));
    }

    const auto pulls = client.get_pages(base + "/pulls", {{"state", "all"}}, limits.max_issues, full_name, &report);
    for (const auto& j : pulls) {
        PullRequestRecord pr;
        pr.number = num(j, "number");
        pr.author_login = nested_login(j, "user");
        pr.title = str(j, "title");
        pr.body = str(j, "body");
        pr.created_at = parse_iso8601(str(j, "created_at"));
        const auto merged = opt_time(j, "merged_at");
        const auto closed = opt_time(j, "closed_at");
        if (merged) {
            pr.state = PullRequestState::merged;
            pr.merged_or_closed_at = merged;
        } else if (closed) {
            pr.state = PullRequestState::closed;
            pr.merged_or_closed_at = closed;
        }
        repo.pull_requests.push_back(std::move(pr));
    }

    const auto stars = client.get_pages(base + "/stargazers", {}, limits.max_stars, full_name, &report,
                                        "application/vnd.github.star+json");
    for (const auto& j : stars)
        repo.star_events.push_back({nested_login(j, "user"), parse_iso8601(str(j, "starred_at"))});

    repo.snapshot_at = client.now();
    std::sort(repo.commits.begin(), repo.commits.end(),
              [](const auto& a, const auto& b) { return std::tie(a.timestamp, a.sha) < std::tie(b.timestamp, b.sha); });
    std::sort(repo.issues.begin(), repo.issues.end(), [](const auto& a, const auto& b) { return a.number < b.number; });
    std::sort(repo.pull_requests.begin(), repo.pull_requests.end(),
              [](const auto& a, const auto& b) { return a.number < b.number; });
    std::sort(repo.star_events.begin(), repo.star_events.end(), [](const auto& a, const auto& b) {
        return std::tie(a.starred_at, a.user_login) < std::tie(b.starred_at, b.user_login);
    });
    validate(repo);
    return {std::move(repo), std::move(report)};
}

std::pair<UserSnapshot, FetchReport> fetch_user_snapshot(ApiClient& client, const std::string& login,
                                                         const UserLimits& limits) {
    if (login.empty() || login.find('/') != std::string::npos)
        throw InvalidInput("invalid login '" + login + "'");
    FetchReport report;
    report.subject = login;
    const std::string base = "/users/" + login;

    UserSnapshot user;
    const auto meta = client.get_json(base, {}, login, &report);
    user.login = meta.value("login", login);
    user.follower_count = num(meta, "followers");

    for (const auto& j : client.get_pages(base + "/starred", {}, limits.max_starred, login, &report)) {
        const auto name = str(j, "full_name");
        if (std::find(user.starred_repos.begin(), user.starred_repos.end(), name) == user.starred_repos.end())
            user.starred_repos.push_back(name);
    }
    for (const auto& j : client.get_pages(base + "/repos", {{"type", "owner"}}, limits.max_owned_repos, login,
                                          &report))
        user.owned_repos.push_back({str(j, "full_name"), num(j, "stargazers_count")});
    std::sort(user.owned_repos.begin(), user.owned_repos.end(),
              [](const auto& a, const auto& b) { return a.full_name < b.full_name; });

    for (const auto& j : client.get_pages(base + "/events/public", {}, limits.max_events, login, &report))
        user.activity.push_back(map_event(j));
    std::stable_sort(user.activity.begin(), user.activity.end(),
                     [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });

    const auto readme = client.get("/repos/" + user.login + "/" + user.login + "/readme", {},
                                   "application/vnd.github.raw", &report);
    if (readme.status == 200) {
        user.profile_readme = readme.body;
    } else if (readme.status != 404) {
        throw TransportError("profile readme of " + login + ": unexpected HTTP " + std::to_string(readme.status));
    }
    for (const auto& url : textkit::extract_links(user.profile_readme)) {
        if (detectors::is_widget_url(url) &&
            std::find(user.stat_widget_urls.begin(), user.stat_widget_urls.end(), url) == user.stat_widget_urls.end())
            user.stat_widget_urls.push_back(url);
    }
    user.snapshot_at = client.now();
    validate(user);
    return {std::move(user), std::move(report)};
}

std::vector<std::string> candidate_repos_recent_updates(ApiClient& client, std::int64_t min_pushes,
                                                        UnixSeconds since, std::int64_t max_results) {
    if (since >= client.now()) throw PreconditionViolation("candidate search: since must be in the past");
    if (min_pushes < 0) throw InvalidInput("candidate search: min_pushes must be >= 0");
    FetchReport report;
    report.subject = "search";
    const std::string iso = format_iso8601(since);
    std::set<std::string> seen;
    const auto items = client.get_pages(
        "/search/repositories", {{"q", "pushed:>=" + iso}, {"sort", "updated"}, {"order", "desc"}}, max_results,
        "search", &report, "application/vnd.github+json",
        [&](const json& j) { return seen.insert(lower(str(j, "full_name"))).second; });
    std::vector<std::string> names;
    for (const auto& j : items) names.push_back(str(j, "full_name"));

    std::vector<char> keep(names.size(), 1);
    if (min_pushes > 0) {
        parallel_for(names.size(), client.config().max_in_flight, [&](std::size_t i) {
            FetchReport local;
            const auto commits =
                client.get_pages("/repos/" + names[i] + "/commits", {{"since", iso}}, min_pushes, names[i], &local);
            keep[i] = static_cast<std::int64_t>(commits.size()) >= min_pushes;
        });
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < names.size(); ++i)
        if (keep[i]) out.push_back(names[i]);
    return out;
}

}  // namespace ghabuse::ingest
