#pragma once

// Seeded generators of small random snapshots for property tests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ghabuse/model.hpp"

namespace ghabuse::testing {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(rng_() % span);
    }
    double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    bool chance(double p) { return unit() < p; }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(range(0, static_cast<std::int64_t>(v.size()) - 1))];
    }

    std::string word(std::size_t min_len = 2, std::size_t max_len = 8,
                     std::string_view alphabet = "abcdefghijklmnopqrstuvwxyz") {
        const auto len = static_cast<std::size_t>(range(static_cast<std::int64_t>(min_len),
                                                        static_cast<std::int64_t>(max_len)));
        std::string s;
        for (std::size_t i = 0; i < len; ++i)
            s.push_back(alphabet[static_cast<std::size_t>(
                range(0, static_cast<std::int64_t>(alphabet.size()) - 1))]);
        return s;
    }

    std::string sha() {
        static constexpr char hex[] = "0123456789abcdef";
        std::string s;
        for (int i = 0; i < 40; ++i) s.push_back(hex[range(0, 15)]);
        return s;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

inline constexpr UnixSeconds kBaseTime = 1'700'000'000;

inline RepoSnapshot random_repo(Gen& g, std::size_t max_items = 50) {
    RepoSnapshot r;
    r.full_name = g.word(3, 8) + "/" + g.word(3, 10, "abcdefghijklmnopqrstuvwxyz-_.0123456789");
    r.description = g.chance(0.3) ? "" : g.word() + " " + g.word() + " tool";
    for (int i = 0, n = static_cast<int>(g.range(0, 30)); i < n; ++i) r.readme += g.word() + " ";
    for (int i = 0, n = static_cast<int>(g.range(0, 8)); i < n; ++i) {
        auto k = g.word(3, 9);
        if (std::find(r.keywords.begin(), r.keywords.end(), k) == r.keywords.end())
            r.keywords.push_back(k);
    }
    r.star_count = g.range(0, 200000);
    r.fork_count = g.range(0, 5000);
    r.snapshot_at = kBaseTime + 400 * kSecondsPerDay;
    const auto n_items = static_cast<std::size_t>(g.range(0, static_cast<std::int64_t>(max_items)));
    for (std::size_t i = 0; i < n_items; ++i)
        r.star_events.push_back({g.word(3, 6), kBaseTime + g.range(0, 365 * kSecondsPerDay)});
    std::sort(r.star_events.begin(), r.star_events.end(),
              [](auto& a, auto& b) { return a.starred_at < b.starred_at; });
    for (std::size_t i = 0, n = static_cast<std::size_t>(g.range(0, static_cast<std::int64_t>(max_items))); i < n; ++i) {
        CommitRecord c;
        c.sha = g.sha();
        c.author_login = g.word(3, 6);
        if (g.chance(0.2)) c.co_authors.push_back(g.word(3, 6));
        c.timestamp = kBaseTime + g.range(0, 365 * kSecondsPerDay);
        c.lines_added = g.range(0, 50);
        c.lines_deleted = g.range(0, 50);
        c.touched_paths = {g.word() + ".txt"};
        r.commits.push_back(std::move(c));
    }
    std::sort(r.commits.begin(), r.commits.end(),
              [](auto& a, auto& b) { return a.timestamp < b.timestamp; });
    for (std::size_t i = 0, n = static_cast<std::size_t>(g.range(0, 6)); i < n; ++i) {
        IssueRecord is;
        is.number = static_cast<std::int64_t>(i + 1);
        is.author_login = g.word(3, 6);
        is.title = g.word() + " " + g.word();
        is.body = g.chance(0.5) ? "see https://example.org/" + g.word() : g.word();
        is.created_at = kBaseTime + g.range(0, 300 * kSecondsPerDay);
        if (g.chance(0.6)) {
            is.state = IssueState::closed;
            is.closed_at = is.created_at + g.range(0, 30 * kSecondsPerDay);
        }
        r.issues.push_back(std::move(is));
    }
    for (std::size_t i = 0, n = static_cast<std::size_t>(g.range(0, 4)); i < n; ++i) {
        PullRequestRecord pr;
        pr.number = static_cast<std::int64_t>(100 + i);
        pr.author_login = g.word(3, 6);
        pr.title = g.word();
        pr.body = "";
        pr.created_at = kBaseTime + g.range(0, 300 * kSecondsPerDay);
        const auto s = g.range(0, 2);
        pr.state = static_cast<PullRequestState>(s);
        if (pr.state != PullRequestState::open)
            pr.merged_or_closed_at = pr.created_at + g.range(0, 10 * kSecondsPerDay);
        r.pull_requests.push_back(std::move(pr));
    }
    return r;
}

inline UserSnapshot random_user(Gen& g, std::size_t max_items = 50) {
    UserSnapshot u;
    u.login = g.word(3, 8);
    for (std::size_t i = 0, n = static_cast<std::size_t>(g.range(0, 10)); i < n; ++i) {
        auto name = g.word(3, 6) + "/" + g.word(3, 6);
        if (std::find(u.starred_repos.begin(), u.starred_repos.end(), name) == u.starred_repos.end())
            u.starred_repos.push_back(name);
    }
    for (std::size_t i = 0, n = static_cast<std::size_t>(g.range(0, 5)); i < n; ++i)
        u.owned_repos.push_back({u.login + "/" + g.word(), g.range(0, 500)});
    u.snapshot_at = kBaseTime + 400 * kSecondsPerDay;
    for (std::size_t i = 0, n = static_cast<std::size_t>(g.range(0, static_cast<std::int64_t>(max_items))); i < n; ++i)
        u.activity.push_back({static_cast<ActivityKind>(g.range(0, 8)),
                              kBaseTime + g.range(0, 380 * kSecondsPerDay),
                              g.word(3, 6) + "/" + g.word(3, 6)});
    std::sort(u.activity.begin(), u.activity.end(),
              [](auto& a, auto& b) { return a.timestamp < b.timestamp; });
    if (g.chance(0.5)) {
        const std::string url =
            "https://github-readme-stats.vercel.app/api?username=" + (g.chance(0.5) ? u.login : g.word());
        u.profile_readme = "Hi there\n![stats](" + url + ")\n";
        u.stat_widget_urls.push_back(url);
    }
    if (g.chance(0.5)) u.claimed_star_count = g.range(0, 3000);
    u.follower_count = g.range(0, 20000);
    return u;
}

}  // namespace ghabuse::testing
