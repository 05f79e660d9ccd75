#include <doctest.h>

#include <cstdio>

#include "ghabuse/detectors.hpp"
#include "ghabuse/error.hpp"
#include "ghabuse/textkit/tokenize.hpp"
#include "oracle/random_snapshots.hpp"

using namespace ghabuse;
using namespace ghabuse::detectors;

namespace {

constexpr UnixSeconds T0 = 1'700'000'000;
constexpr UnixSeconds kDay = kSecondsPerDay;

std::string sha_for(int i) {
    char buf[41];
    std::snprintf(buf, sizeof buf, "%040x", i + 1);
    return buf;
}

RepoSnapshot repo_named(std::string full_name) {
    RepoSnapshot r;
    r.full_name = std::move(full_name);
    r.snapshot_at = T0 + 365 * kDay;
    return r;
}

CommitRecord commit(int i, UnixSeconds t, std::int64_t added, std::int64_t deleted,
                    std::string author = "bot") {
    CommitRecord c;
    c.sha = sha_for(i);
    c.author_login = std::move(author);
    c.timestamp = t;
    c.lines_added = added;
    c.lines_deleted = deleted;
    c.touched_paths = {"log"};
    return c;
}

UserSnapshot user_named(std::string login) {
    UserSnapshot u;
    u.login = std::move(login);
    u.snapshot_at = T0 + 365 * kDay;
    return u;
}

}  // namespace

TEST_CASE("fake stars") {
    auto repo = repo_named("acme/rocket");
    repo.star_events = {{"busy", T0}, {"ghost", T0 + 10}, {"late", T0 + 300 * kDay}};
    const ThresholdConfig cfg;

    auto busy = user_named("busy");
    for (int i = 0; i < 500; ++i) busy.starred_repos.push_back("x/r" + std::to_string(i));

    auto ghost = user_named("ghost");
    ghost.starred_repos = {"acme/rocket"};
    ghost.activity = {{ActivityKind::star, T0 + 10, "acme/rocket"}};

    auto late = user_named("late");
    late.starred_repos = {"acme/rocket"};
    late.snapshot_at = T0 + 310 * kDay;  // window of 30 days not yet over

    const std::vector<UserSnapshot> users{busy, ghost, late};
    const auto result = detect_fake_stars(repo, users, cfg);
    REQUIRE(result.verdicts.size() == 3);

    SUBCASE("many starred repos is never flagged") {
        CHECK_FALSE(result.verdicts[0].flagged);
        CHECK_FALSE(result.verdicts[0].find("starred_repo_count")->holds);
    }
    SUBCASE("single-star inactive account is flagged") {
        const auto& v = result.verdicts[1];
        CHECK(v.flagged);
        CHECK(v.find("starred_repo_count")->observed == 1);
        CHECK(v.find("activity_in_window")->observed == 1);
        CHECK(v.find("activity_in_window")->threshold == 1);
    }
    SUBCASE("open window is indeterminate") {
        CHECK(result.verdicts[2].indeterminate);
        CHECK_FALSE(result.verdicts[2].flagged);
    }
    SUBCASE("fraction over judged stargazers") {
        CHECK(result.determinate == 2);
        CHECK(result.flagged == 1);
        CHECK(result.flagged_fraction == 0.5);
        CHECK(summarize_fake_stars(repo, result, 0.5).flagged);
        CHECK_FALSE(summarize_fake_stars(repo, result, 0.6).flagged);
    }
    SUBCASE("stargazer without a star event") {
        const std::vector<UserSnapshot> stranger{user_named("stranger")};
        try {
            detect_fake_stars(repo, stranger, cfg);
            FAIL("expected InvalidInput");
        } catch (const InvalidInput& e) {
            CHECK(std::string(e.what()).find("stranger") != std::string::npos);
        }
    }
}

TEST_CASE("automatic updates") {
    const ThresholdConfig cfg;
    SUBCASE("no commits") {
        const auto v = detect_automatic_updates(repo_named("a/b"), cfg);
        CHECK_FALSE(v.flagged);
    }
    SUBCASE("sixty one-line log commits in a day") {
        auto repo = repo_named("a/b");
        for (int i = 0; i < 60; ++i) repo.commits.push_back(commit(i, T0 + i * 1200, 1, 0));
        const auto v = detect_automatic_updates(repo, cfg);
        CHECK(v.flagged);
        CHECK(v.find("commit_count")->observed == 60);
        CHECK(v.find("mean_modified_loc")->observed == 1.0);
    }
    SUBCASE("sixty substantial commits in a week") {
        auto repo = repo_named("a/b");
        for (int i = 0; i < 60; ++i) repo.commits.push_back(commit(i, T0 + i * 9000, 25, 15));
        const auto v = detect_automatic_updates(repo, cfg);
        CHECK_FALSE(v.flagged);
        CHECK(v.find("commit_count")->holds);
        CHECK(v.find("mean_modified_loc")->observed == 40.0);
    }
    SUBCASE("window is half-open") {
        auto repo = repo_named("a/b");
        ThresholdConfig c = cfg;
        c.x2 = 2;
        repo.commits = {commit(0, T0, 1, 0), commit(1, T0 + c.window_auto_updates, 1, 0)};
        CHECK_FALSE(detect_automatic_updates(repo, c).flagged);
        repo.commits[1].timestamp -= 1;
        CHECK(detect_automatic_updates(repo, c).flagged);
    }
    SUBCASE("commits sharing a timestamp stay in one window") {
        auto repo = repo_named("a/b");
        ThresholdConfig c = cfg;
        c.x2 = 2;
        c.y = 1.0;
        repo.commits = {commit(0, T0, 40, 0), commit(1, T0, 1, 0), commit(2, T0 + 10, 0, 0)};
        const auto v = detect_automatic_updates(repo, c);
        CHECK_FALSE(v.flagged);
        CHECK(v.find("commit_count")->observed == 3);
    }
}

TEST_CASE("keyword stuffing") {
    const ThresholdConfig cfg;
    auto repo = repo_named("dev/csvkit");
    repo.readme = "csv parser library with streaming reader quoted fields delimiters headers";

    auto corpus_for = [](const RepoSnapshot& r) {
        const std::vector<RepoSnapshot> batch{r};
        return build_readme_corpus(batch, {});
    };

    SUBCASE("no keywords") {
        const auto v = detect_keyword_stuffing(repo, corpus_for(repo), cfg);
        CHECK_FALSE(v.flagged);
    }
    SUBCASE("eight topics absent from the README") {
        repo.keywords = {"bitcoin", "nft", "chatgpt", "crypto", "airdrop", "metaverse", "web3", "gpt4"};
        const auto v = detect_keyword_stuffing(repo, corpus_for(repo), cfg);
        CHECK(v.flagged);
        int low = 0;
        for (const auto& e : v.evidence) low += e.clause == "low_relevance_keyword";
        CHECK(low == 8);
        CHECK(v.find("low_relevance_count")->observed == 8);
    }
    SUBCASE("four irrelevant and six relevant keywords") {
        repo.keywords = {"bitcoin", "nft", "chatgpt", "crypto", "csv",
                         "parser", "streaming", "reader", "delimiters", "headers"};
        const auto v = detect_keyword_stuffing(repo, corpus_for(repo), cfg);
        CHECK_FALSE(v.flagged);
        CHECK(v.find("low_relevance_count")->observed == 4);
    }
    SUBCASE("README missing from corpus") {
        const std::vector<RepoSnapshot> other{repo_named("x/y")};
        CHECK_THROWS_AS(detect_keyword_stuffing(repo, build_readme_corpus(other, {}), cfg), NotFound);
    }
}

TEST_CASE("typo squatting") {
    const ThresholdConfig cfg;
    const std::string readme = "Requests is an elegant and simple HTTP library for Python, built for human beings.";
    const std::vector<PopularReference> refs{{"psf/requests", readme, 50000}};

    SUBCASE("self comparison is skipped") {
        auto self = repo_named("psf/requests");
        self.readme = readme;
        self.star_count = 50000;
        CHECK(detect_typo_squatting(self, refs, cfg).empty());
    }
    SUBCASE("transposed name with copied README") {
        auto cand = repo_named("evil/reqeusts");
        cand.readme = readme;
        cand.star_count = 12;
        const auto out = detect_typo_squatting(cand, refs, cfg);
        REQUIRE(out.size() == 1);
        CHECK(out[0].flagged);
        CHECK(out[0].find("name_similarity")->observed == 0.875);
        CHECK(out[0].find("readme_similarity")->observed == 1.0);
        // log-normalized 0.9398 / 0.2228
        CHECK(out[0].find("popularity_ratio")->observed.get<double>() ==
              doctest::Approx(0.9397949217363439 / 0.22278847695072254).epsilon(1e-9));
    }
    SUBCASE("similar name but disjoint README") {
        auto cand = repo_named("evil/reqeusts");
        cand.readme = "unrelated tetris clone";
        cand.star_count = 12;
        const auto out = detect_typo_squatting(cand, refs, cfg);
        REQUIRE(out.size() == 1);
        CHECK_FALSE(out[0].flagged);
        CHECK(out[0].find("readme_similarity")->observed == 0.0);
    }
    SUBCASE("dissimilar names produce no verdict") {
        auto cand = repo_named("evil/flask");
        CHECK(detect_typo_squatting(cand, refs, cfg).empty());
    }
    SUBCASE("zero-star candidate has the clamped ratio") {
        CHECK(popularity_ratio(0.0, 0.5) == doctest::Approx(50000.0));
    }
    SUBCASE("errors") {
        auto cand = repo_named("evil/reqeusts");
        CHECK_THROWS_AS(detect_typo_squatting(cand, {}, cfg), InvalidInput);
        const std::vector<PopularReference> weak{{"a/requests", readme, 10}};
        CHECK_THROWS_AS(detect_typo_squatting(cand, weak, cfg), InvalidInput);
    }
}

TEST_CASE("spoofed contributor") {
    const ThresholdConfig cfg;
    auto repo = repo_named("nobody/wallet-tool");
    repo.star_count = 3;
    auto c = commit(0, T0, 10, 2, "nobody");
    c.co_authors = {"famous"};
    repo.commits = {c, commit(1, T0 + 10, 3, 3, "nobody")};

    auto famous = user_named("famous");
    famous.follower_count = 8000;

    SUBCASE("famous co-author on one commit of a tiny repo") {
        const auto v = detect_spoofed_contributor(repo, famous, cfg);
        CHECK(v.flagged);
        CHECK(v.find("attributed_commits")->observed == 1);
        CHECK(v.find("repo_popularity")->observed.get<double>() ==
              doctest::Approx(0.12041189471136304).epsilon(1e-9));
        CHECK(v.find("suspect_popularity")->observed.get<double>() ==
              doctest::Approx(0.9757754737844707).epsilon(1e-9));
        CHECK(v.find("attributed_shas")->observed == nlohmann::json::array({sha_for(0)}));
    }
    SUBCASE("low-follower suspect") {
        auto nobody = famous;
        nobody.follower_count = 20;
        CHECK_FALSE(detect_spoofed_contributor(repo, nobody, cfg).flagged);
    }
    SUBCASE("prolific author") {
        repo.commits.clear();
        for (int i = 0; i < 200; ++i) repo.commits.push_back(commit(i, T0 + i, 5, 5, "famous"));
        const auto v = detect_spoofed_contributor(repo, famous, cfg);
        CHECK_FALSE(v.flagged);
        CHECK_FALSE(v.find("attributed_commits")->holds);
    }
    SUBCASE("absent suspect") {
        CHECK_THROWS_AS(detect_spoofed_contributor(repo, user_named("stranger"), cfg),
                        PreconditionViolation);
    }
}

namespace {

// Classifier whose output depends only on the presence of one vocabulary token:
// logit = bias_2 + w * relu(x_token), probability ~0.97 when the token is present.
textkit::SpamModel keyword_model(const std::string& token) {
    textkit::SpamModel m;
    m.tfidf = textkit::tfidf_fit(std::vector<std::vector<std::string>>{{token, "bug", "crash"}});
    m.classifier.input_dim = m.tfidf.dim();
    m.classifier.hidden_dim = 1;
    m.classifier.weights_1.assign(m.tfidf.dim(), 0.0);
    m.classifier.weights_1[m.tfidf.vocabulary().at(token)] = 1.0;
    m.classifier.bias_1 = {0.0};
    m.classifier.weights_2 = {12.0};
    m.classifier.bias_2 = -2.44;
    return m;
}

}  // namespace

TEST_CASE("issue spam") {
    const ThresholdConfig cfg;
    const auto model = keyword_model("important");
    auto repo = repo_named("a/b");
    IssueRecord phishing;
    phishing.number = 1;
    phishing.title = "IMPORTANT! Your account";
    phishing.body = "Verify now at https://login-github.example/verify";
    IssueRecord plain;
    plain.number = 2;
    plain.title = "IMPORTANT notice";
    plain.body = "no links here";
    IssueRecord bug;
    bug.number = 3;
    bug.title = "crash on start";
    bug.body = "stack trace: https://gist.example/abc";
    repo.issues = {phishing, plain, bug};

    const auto out = detect_issue_spam(repo, model.classifier, model.tfidf, cfg);
    REQUIRE(out.size() == 3);
    CHECK(out[0].flagged);
    CHECK(out[0].subject == "a/b#1");
    CHECK(out[0].find("spam_probability")->observed.get<double>() > 0.9);
    CHECK(out[0].find("links")->observed == nlohmann::json::array({"https://login-github.example/verify"}));
    CHECK_FALSE(out[1].flagged);  // no link, no command
    CHECK(out[1].find("spam_probability")->holds);
    CHECK_FALSE(out[2].flagged);  // link but benign
    CHECK(out[2].find("spam_probability")->observed.get<double>() < 0.1);

    auto broken = model.classifier;
    broken.input_dim += 1;
    broken.weights_1.push_back(0.0);
    CHECK_THROWS_AS(detect_issue_spam(repo, broken, model.tfidf, cfg), InvalidInput);
}

TEST_CASE("reputation farming") {
    ThresholdConfig cfg;
    auto repo = repo_named("org/proj");
    for (int i = 1; i <= 4; ++i) {
        IssueRecord is;
        is.number = i;
        is.created_at = T0;
        is.state = IssueState::closed;
        is.closed_at = T0 + i * kDay;
        repo.issues.push_back(is);
    }
    const std::vector<RepoSnapshot> repos{repo};

    SUBCASE("interactions before closure") {
        auto u = user_named("early");
        for (int i = 1; i <= 4; ++i)
            u.activity.push_back({ActivityKind::issue_comment, T0 + 100, "org/proj#" + std::to_string(i)});
        CHECK_FALSE(detect_reputation_farming(u, repos, cfg).flagged);
    }
    SUBCASE("four comments two days after closure") {
        auto u = user_named("farmer");
        for (int i = 1; i <= 4; ++i)
            u.activity.push_back({ActivityKind::issue_comment, T0 + (i + 2) * kDay,
                                  "org/proj#" + std::to_string(i)});
        const auto v = detect_reputation_farming(u, repos, cfg);
        CHECK(v.flagged);
        int rows = 0;
        for (const auto& e : v.evidence) rows += e.clause == "stale_interaction";
        CHECK(rows == 4);
    }
    SUBCASE("boundary at delta_t") {
        auto u = user_named("edge");
        const UnixSeconds closed = T0 + kDay;
        u.activity = {{ActivityKind::issue_comment, closed + cfg.delta_t - 1, "org/proj#1"}};
        cfg.farming_strict = true;
        CHECK_FALSE(detect_reputation_farming(u, repos, cfg).flagged);
        u.activity[0].timestamp = closed + cfg.delta_t;
        CHECK(detect_reputation_farming(u, repos, cfg).flagged);
        u.activity[0].timestamp = closed + cfg.window_rep_farming;
        CHECK_FALSE(detect_reputation_farming(u, repos, cfg).flagged);
    }
    SUBCASE("default mode needs farming_min_events") {
        auto u = user_named("light");
        u.activity = {{ActivityKind::pr_review, T0 + 10 * kDay, "org/proj#1"},
                      {ActivityKind::issue_comment, T0 + 11 * kDay, "ORG/Proj#2"}};
        const auto v = detect_reputation_farming(u, repos, cfg);
        CHECK_FALSE(v.flagged);
        CHECK(v.find("stale_interaction_count")->observed == 2);
        cfg.farming_strict = true;
        CHECK(detect_reputation_farming(u, repos, cfg).flagged);
    }
}

TEST_CASE("widget account parsing") {
    CHECK(widget_account("https://github-readme-stats.vercel.app/api?username=torvalds&show_icons=true") ==
          "torvalds");
    CHECK(widget_account("https://streak-stats.demolab.com?user=octo") == "octo");
    CHECK(widget_account("https://ghchart.rshah.org/409ba5/someone") == "someone");
    CHECK(widget_account("https://komarev.com/ghpvc/?username=a%2Db") == "a-b");
    CHECK_FALSE(widget_account("https://github-readme-stats.vercel.app/api?theme=dark").has_value());
    CHECK_FALSE(widget_account("not a url").has_value());
    CHECK(is_widget_url("https://github-readme-stats.vercel.app/api?username=x"));
    CHECK(is_widget_url("https://github-readme-stats-mine.vercel.app/api?username=x"));
    CHECK_FALSE(is_widget_url("https://example.com/?username=x"));
}

TEST_CASE("fake stats") {
    const ThresholdConfig cfg;
    SUBCASE("nothing to check") {
        const auto v = detect_fake_stats(user_named("plain"), cfg);
        CHECK_FALSE(v.flagged);
        CHECK(v.find("foreign_widget_count") != nullptr);
        CHECK(v.find("claimed_star_gap") != nullptr);
    }
    SUBCASE("widget for another account") {
        auto u = user_named("mallory");
        const std::string url = "https://github-readme-stats.vercel.app/api?username=torvalds";
        u.profile_readme = "![](" + url + ")";
        u.stat_widget_urls = {url};
        const auto v = detect_fake_stats(u, cfg);
        CHECK(v.flagged);
        CHECK(v.find("foreign_widget_account")->observed["account"] == "torvalds");
    }
    SUBCASE("own widget, case-insensitive") {
        auto u = user_named("Mallory");
        const std::string url = "https://github-readme-stats.vercel.app/api?username=mallory";
        u.profile_readme = url;
        u.stat_widget_urls = {url};
        CHECK_FALSE(detect_fake_stats(u, cfg).flagged);
    }
    SUBCASE("claimed star gap") {
        auto u = user_named("claims");
        u.claimed_star_count = 1500;
        u.owned_repos = {{"claims/a", 1000}, {"claims/b", 495}};
        CHECK_FALSE(detect_fake_stats(u, cfg).flagged);
        u.owned_repos[1].star_count = 480;
        const auto v = detect_fake_stats(u, cfg);
        CHECK(v.flagged);
        CHECK(v.find("claimed_star_gap")->observed == 20);
    }
    SUBCASE("unparseable widget does not flag by itself") {
        auto u = user_named("odd");
        const std::string url = "https://github-readme-stats.vercel.app/api?theme=radical";
        u.profile_readme = url;
        u.stat_widget_urls = {url};
        const auto v = detect_fake_stats(u, cfg);
        CHECK_FALSE(v.flagged);
        CHECK(v.find("unparseable_widget_url")->observed == url);
    }
}

TEST_CASE("detectors are deterministic") {
    testing::Gen g(77);
    const ThresholdConfig cfg;
    for (int i = 0; i < 50; ++i) {
        const auto repo = testing::random_repo(g);
        const auto user = testing::random_user(g);
        CHECK(detect_automatic_updates(repo, cfg) == detect_automatic_updates(repo, cfg));
        CHECK(detect_fake_stats(user, cfg) == detect_fake_stats(user, cfg));
        const std::vector<RepoSnapshot> repos{repo};
        CHECK(detect_reputation_farming(user, repos, cfg) == detect_reputation_farming(user, repos, cfg));
    }
}
