#include <doctest.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "ghabuse/error.hpp"
#include "ghabuse/ingest/github.hpp"
#include "ghabuse/ingest/store.hpp"
#include "oracle/random_snapshots.hpp"

using namespace ghabuse;
using namespace ghabuse::ingest;
using nlohmann::json;

namespace {

const std::filesystem::path kDir = std::filesystem::path(GHABUSE_TEST_DATA) / "ingest";
constexpr UnixSeconds kNow = 1'710'000'000;

struct Replay {
    std::shared_ptr<ReplayTransport> transport;
    ApiClient client;

    explicit Replay(const std::string& file, ApiClientConfig cfg = {})
        : transport(ReplayTransport::from_file(kDir / file)),
          client(with_token(cfg), transport, [] { return kNow; }, [](std::int64_t) {}) {}

    static ApiClientConfig with_token(ApiClientConfig cfg) {
        cfg.auth_token = "test-token";
        return cfg;
    }
};

/// Compares against a committed golden file; GHABUSE_UPDATE_GOLDEN rewrites it.
void check_golden(const Snapshot& s, const std::string& name) {
    const auto path = kDir / name;
    const auto text = dump_snapshot(s);
    if (std::getenv("GHABUSE_UPDATE_GOLDEN")) {
        std::ofstream(path, std::ios::binary) << text;
    }
    CHECK(read_text_file(path) == text);
}

}  // namespace

TEST_CASE("repo replay matches the golden snapshot") {
    Replay r("repo_basic.json");
    const auto [repo, report] = fetch_repo_snapshot(r.client, "acme/widget");
    check_golden(repo, "repo_basic.golden.json");
    CHECK(r.transport->unused() == 0);
    CHECK(report.subject == "acme/widget");
    CHECK(report.requests_made == 9);
    CHECK(report.rate_limit_remaining == 4990);
    CHECK_FALSE(report.truncated);
    REQUIRE(report.warnings.size() == 2);

    CHECK(repo.keywords == std::vector<std::string>{"parser", "c"});
    REQUIRE(repo.commits.size() == 3);
    CHECK(repo.commits[0].author_login == "alice");
    CHECK(repo.commits[0].co_authors == std::vector<std::string>{"torvalds"});
    CHECK(repo.commits[0].modified_lines() == 124);
    CHECK(repo.commits[1].author_login.empty());
    REQUIRE(repo.issues.size() == 2);
    CHECK(repo.issues[0].number == 2);
    CHECK(repo.issues[0].state == IssueState::closed);
    REQUIRE(repo.pull_requests.size() == 3);
    CHECK(repo.pull_requests[0].state == PullRequestState::closed);
    CHECK(repo.pull_requests[1].state == PullRequestState::merged);
    CHECK(repo.pull_requests[2].state == PullRequestState::open);
    REQUIRE(repo.star_events.size() == 3);
    CHECK(repo.star_events[0].user_login == "amy");
    CHECK(repo.star_events[1].user_login == "bea");
    CHECK(repo.snapshot_at == kNow);
}

TEST_CASE("star pagination stops at the limit and reports truncation") {
    Replay r("repo_many_stars.json");
    const auto [repo, report] = fetch_repo_snapshot(r.client, "acme/popular", {100, 100, 100});
    CHECK(report.truncated);
    CHECK(repo.star_events.size() == 100);
    CHECK(repo.star_count == 250);
    CHECK(repo.readme.empty());
    check_golden(repo, "repo_many_stars.golden.json");
}

TEST_CASE("missing repository") {
    Replay r("repo_missing.json");
    CHECK_THROWS_AS(fetch_repo_snapshot(r.client, "ghost/none"), SubjectNotFound);
    CHECK_THROWS_AS(fetch_repo_snapshot(r.client, "not-a-repo"), InvalidInput);
}

TEST_CASE("user replay matches the golden snapshot") {
    Replay r("user_basic.json");
    const auto [user, report] = fetch_user_snapshot(r.client, "mallory");
    check_golden(user, "user_basic.golden.json");
    CHECK(r.transport->unused() == 0);
    CHECK_FALSE(report.truncated);
    CHECK(user.follower_count == 3);
    CHECK(user.stat_widget_urls ==
          std::vector<std::string>{"https://github-readme-stats.vercel.app/api?username=torvalds&show_icons=true",
                                   "https://streak-stats.demolab.com?user=mallory"});
    CHECK_FALSE(user.claimed_star_count.has_value());
    REQUIRE(user.activity.size() == 7);
    CHECK(user.activity[0].kind == ActivityKind::other);
    CHECK(user.activity[1].kind == ActivityKind::issue_opened);
    CHECK(user.activity[1].target == "big/project#12");
    CHECK(user.activity[2].kind == ActivityKind::star);
    CHECK(user.activity[3].kind == ActivityKind::commit);
    CHECK(user.activity[4].kind == ActivityKind::pr_review);
    CHECK(user.activity[5].kind == ActivityKind::pr_comment);
    CHECK(user.activity[6].kind == ActivityKind::issue_comment);
    CHECK(user.owned_repos.at(0).full_name == "mallory/dots");
}

TEST_CASE("user without a profile repository") {
    Replay r("user_no_profile.json");
    const auto [user, report] = fetch_user_snapshot(r.client, "quiet");
    CHECK(user.profile_readme.empty());
    CHECK(user.stat_widget_urls.empty());
    CHECK(report.requests_made == 5);
}

TEST_CASE("event pagination exhausting max_events") {
    ApiClientConfig cfg;
    cfg.per_page = 2;
    Replay r("user_many_events.json", cfg);
    const auto [user, report] = fetch_user_snapshot(r.client, "busy", {100, 5, 100});
    CHECK(report.truncated);
    CHECK(user.activity.size() == 5);
    CHECK(std::is_sorted(user.activity.begin(), user.activity.end(),
                         [](auto& a, auto& b) { return a.timestamp < b.timestamp; }));
}

TEST_CASE("candidate search") {
    ApiClientConfig cfg;
    cfg.per_page = 2;
    const UnixSeconds since = parse_iso8601("2024-03-01T00:00:00Z");
    SUBCASE("duplicates across pages are dropped") {
        Replay r("search_dedup.json", cfg);
        CHECK(candidate_repos_recent_updates(r.client, 0, since) ==
              std::vector<std::string>{"a/one", "b/two", "c/three"});
    }
    SUBCASE("min_pushes filter") {
        Replay r("search_min_pushes.json", cfg);
        CHECK(candidate_repos_recent_updates(r.client, 2, since) == std::vector<std::string>{"a/one", "c/three"});
    }
    SUBCASE("no matches") {
        Replay r("search_empty.json", cfg);
        CHECK(candidate_repos_recent_updates(r.client, 0, since).empty());
    }
    SUBCASE("since must be in the past") {
        Replay r("search_empty.json", cfg);
        CHECK_THROWS_AS(candidate_repos_recent_updates(r.client, 0, kNow), PreconditionViolation);
    }
}

TEST_CASE("replay transport rejects unrecorded requests") {
    ReplayTransport t(json::array());
    HttpRequest req;
    req.path = "/x";
    CHECK_THROWS_AS(t.send(req), TransportError);
    CHECK(request_key("GET", "/p", {{"b", "2"}, {"a", "1"}}) == "GET /p?a=1&b=2");
}

namespace {

/// Fake GitHub that records concurrency and the clock at each call.
class InstrumentedTransport : public Transport {
public:
    std::function<HttpResponse(const HttpRequest&, int call)> respond;
    std::atomic<int> in_flight{0};
    std::atomic<int> max_in_flight{0};
    std::atomic<int> calls{0};
    std::chrono::milliseconds hold{0};

    HttpResponse send(const HttpRequest& req) override {
        const int now = ++in_flight;
        int seen = max_in_flight.load();
        while (now > seen && !max_in_flight.compare_exchange_weak(seen, now)) {
        }
        std::this_thread::sleep_for(hold);
        const int call = calls++;
        --in_flight;
        return respond(req, call);
    }
};

HttpResponse ok(const json& body, std::map<std::string, std::string> headers = {}) {
    return {200, std::move(headers), body.dump()};
}

HttpResponse fake_github(const HttpRequest& req, int commits) {
    const std::string base = "/repos/fan/out";
    if (req.path == base) return ok({{"full_name", "fan/out"}, {"stargazers_count", 0}, {"forks_count", 0}});
    if (req.path == base + "/readme") return {404, {}, "{}"};
    if (req.path == base + "/commits") {
        json arr = json::array();
        for (int i = 0; i < commits; ++i) {
            char sha[41];
            std::snprintf(sha, sizeof sha, "%040x", i + 1);
            arr.push_back({{"sha", sha},
                           {"author", {{"login", "bot"}}},
                           {"commit", {{"author", {{"date", format_iso8601(1'700'000'000 + i * 60)}}}, {"message", "log"}}}});
        }
        return ok(arr);
    }
    if (req.path.rfind(base + "/commits/", 0) == 0) return ok({{"stats", {{"additions", 1}, {"deletions", 0}}}});
    return ok(json::array());
}

}  // namespace

TEST_CASE("client never exceeds max_in_flight") {
    auto t = std::make_shared<InstrumentedTransport>();
    t->hold = std::chrono::milliseconds(3);
    t->respond = [](const HttpRequest& req, int) { return fake_github(req, 40); };
    ApiClientConfig cfg;
    cfg.max_in_flight = 3;
    ApiClient client(cfg, t, [] { return kNow; }, [](std::int64_t) {});
    std::vector<std::thread> callers;
    for (int i = 0; i < 3; ++i)
        callers.emplace_back([&] { fetch_repo_snapshot(client, "fan/out"); });
    for (auto& c : callers) c.join();
    CHECK(t->max_in_flight.load() <= 3);
    CHECK(t->max_in_flight.load() >= 2);
    const auto [repo, report] = fetch_repo_snapshot(client, "fan/out");
    CHECK(repo.commits.size() == 40);
    CHECK(report.requests_made == 46);
}

TEST_CASE("rate limit waits until the advertised reset") {
    UnixSeconds clock = kNow;
    std::vector<std::int64_t> sleeps;
    std::vector<UnixSeconds> call_times;
    auto t = std::make_shared<InstrumentedTransport>();
    ApiClientConfig cfg;
    cfg.retry_budget = 3;
    ApiClient client(cfg, t, [&] { return clock; }, [&](std::int64_t s) {
        sleeps.push_back(s);
        clock += s;
    });

    SUBCASE("403 then success") {
        t->respond = [&](const HttpRequest&, int call) {
            call_times.push_back(clock);
            if (call == 0)
                return HttpResponse{403, {{"x-ratelimit-remaining", "0"}, {"x-ratelimit-reset", std::to_string(kNow + 100)}}, "{}"};
            return ok(json::object(), {{"x-ratelimit-remaining", "59"}});
        };
        FetchReport report;
        CHECK(client.get("/rate", {}, "application/json", &report).status == 200);
        CHECK(sleeps == std::vector<std::int64_t>{100});
        REQUIRE(call_times.size() == 2);
        CHECK(call_times[1] >= kNow + 100);
        CHECK(report.requests_made == 2);
        CHECK(report.rate_limit_remaining == 59);
    }
    SUBCASE("exhausted budget raises RateLimited with the reset time") {
        t->respond = [&](const HttpRequest&, int) {
            return HttpResponse{403, {{"x-ratelimit-remaining", "0"}, {"x-ratelimit-reset", std::to_string(clock + 50)}}, "{}"};
        };
        try {
            client.get("/rate");
            FAIL("expected RateLimited");
        } catch (const RateLimited& e) {
            CHECK(e.reset_at() == clock + 50);
        }
        CHECK(t->calls.load() == 4);
    }
    SUBCASE("a drained budget on a success delays the next request") {
        t->respond = [&](const HttpRequest&, int call) {
            call_times.push_back(clock);
            if (call == 0)
                return ok(json::object(), {{"x-ratelimit-remaining", "0"}, {"x-ratelimit-reset", std::to_string(kNow + 30)}});
            return ok(json::object());
        };
        client.get("/a");
        client.get("/b");
        REQUIRE(call_times.size() == 2);
        CHECK(call_times[1] == kNow + 30);
    }
    SUBCASE("server errors are retried within the budget") {
        t->respond = [&](const HttpRequest&, int) { return HttpResponse{502, {}, ""}; };
        CHECK_THROWS_AS(client.get("/flaky"), TransportError);
        CHECK(t->calls.load() == 4);
    }
    SUBCASE("transport failures are retried within the budget") {
        t->respond = [&](const HttpRequest&, int call) -> HttpResponse {
            if (call < 2) throw TransportError("connection reset");
            return ok(json::object());
        };
        CHECK(client.get("/flaky").status == 200);
        CHECK(t->calls.load() == 3);
    }
}

TEST_CASE("requests carry auth and media type") {
    auto t = std::make_shared<InstrumentedTransport>();
    HttpRequest seen;
    t->respond = [&](const HttpRequest& req, int) {
        seen = req;
        return ok(json::array());
    };
    ApiClientConfig cfg;
    cfg.auth_token = "abc";
    ApiClient client(cfg, t, [] { return kNow; }, [](std::int64_t) {});
    client.get("/repos/a/b/stargazers", {}, "application/vnd.github.star+json");
    CHECK(seen.headers.at("Authorization") == "Bearer abc");
    CHECK(seen.headers.at("Accept") == "application/vnd.github.star+json");
}

TEST_CASE("client config validation") {
    ApiClientConfig cfg;
    cfg.max_in_flight = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
    cfg = {};
    cfg.per_page = 101;
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}

TEST_CASE("co-author trailers") {
    const auto emails = co_author_emails("Fix\n\nCo-authored-by: A <1+alice@users.noreply.github.com>\n"
                                         "  co-authored-by: B <b@x.org>\nSigned-off-by: C <c@x.org>");
    CHECK(emails == std::vector<std::string>{"1+alice@users.noreply.github.com", "b@x.org"});
    CHECK(login_from_noreply("1+alice@users.noreply.github.com") == "alice");
    CHECK(login_from_noreply("bob@users.noreply.github.com") == "bob");
    CHECK_FALSE(login_from_noreply("b@x.org").has_value());
}

TEST_CASE("store and load") {
    const auto dir = std::filesystem::temp_directory_path() / "ghabuse_store_test";
    std::filesystem::create_directories(dir);
    ghabuse::testing::Gen g(99);
    for (int i = 0; i < 50; ++i) {
        const Snapshot s = i % 2 ? Snapshot(ghabuse::testing::random_repo(g)) : Snapshot(ghabuse::testing::random_user(g));
        store_snapshot(dir / "s.json", s);
        CHECK(load_snapshot(dir / "s.json") == s);
    }

    auto j = json::parse(read_text_file(dir / "s.json"));
    j["schema_version"] = 2;
    std::ofstream(dir / "v2.json") << j.dump();
    try {
        load_snapshot(dir / "v2.json");
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("found 2, expected 1") != std::string::npos);
    }
    std::ofstream(dir / "bad.json") << "{not json";
    CHECK_THROWS_AS(load_snapshot(dir / "bad.json"), SchemaError);
    CHECK_THROWS_AS(load_snapshot(dir / "absent.json"), NotFound);
    std::filesystem::remove_all(dir);
}

TEST_CASE("hand-minimized repo fixture loads to documented values") {
    const auto s = load_snapshot(kDir / "minimal_repo.json");
    const auto& repo = std::get<RepoSnapshot>(s);
    CHECK(repo.full_name == "tiny/thing");
    CHECK(repo.keywords == std::vector<std::string>{"cli"});
    CHECK(repo.star_count == 2);
    REQUIRE(repo.commits.size() == 1);
    CHECK(repo.commits[0].co_authors == std::vector<std::string>{"helper"});
    CHECK(repo.commits[0].modified_lines() == 3);
    CHECK(repo.star_events.at(1).starred_at == 1704067260);
    CHECK(repo.issues.at(0).closed_at == 1704153600);
    CHECK(repo.snapshot_at == 1704240000);
}
