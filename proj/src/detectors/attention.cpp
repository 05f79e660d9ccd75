// Attention hijacking: fake stars, automatic updates, keyword stuffing and
// typo squatting.

#include <algorithm>
#include <unordered_map>

#include "ghabuse/detectors.hpp"
#include "ghabuse/error.hpp"
#include "ghabuse/textkit/similarity.hpp"
#include "ghabuse/textkit/tokenize.hpp"

namespace ghabuse::detectors {

FakeStarsResult detect_fake_stars(const RepoSnapshot& repo, std::span<const UserSnapshot> stargazers,
                                  const ThresholdConfig& cfg) {
    // Earliest star per login; star_events are sorted so the first hit wins.
    std::unordered_map<std::string, UnixSeconds> starred_at;
    for (const auto& e : repo.star_events) starred_at.emplace(e.user_login, e.starred_at);

    FakeStarsResult result;
    for (const auto& user : stargazers) {
        auto it = starred_at.find(user.login);
        if (it == starred_at.end())
            throw InvalidInput("fake stars: stargazer '" + user.login +
                               "' has no star event on " + repo.full_name);
        const UnixSeconds t_s = it->second;
        const UnixSeconds window_end = t_s + cfg.window_fake_stars;

        DetectionVerdict v;
        v.detector = Detector::fake_stars;
        v.subject = user.login;
        v.indeterminate = user.snapshot_at < window_end;

        const auto starred = static_cast<std::int64_t>(user.starred_repos.size());
        const std::int64_t active = activity_count(user, t_s, window_end);
        const bool few_stars = starred <= cfg.x1;
        const bool inactive = active <= cfg.epsilon;
        v.add("starred", repo.full_name, true, true);
        v.add("starred_repo_count", starred, cfg.x1, few_stars);
        v.add("activity_in_window", active, cfg.epsilon, inactive);
        v.add("window", nlohmann::json::array({t_s, window_end}), cfg.window_fake_stars,
              !v.indeterminate);
        v.flagged = !v.indeterminate && few_stars && inactive;

        if (!v.indeterminate) ++result.determinate;
        if (v.flagged) ++result.flagged;
        result.verdicts.push_back(std::move(v));
    }
    result.flagged_fraction = result.determinate == 0
                                  ? 0.0
                                  : static_cast<double>(result.flagged) /
                                        static_cast<double>(result.determinate);
    return result;
}

DetectionVerdict summarize_fake_stars(const RepoSnapshot& repo, const FakeStarsResult& result,
                                      double cutoff) {
    DetectionVerdict v;
    v.detector = Detector::fake_stars;
    v.subject = repo.full_name;
    v.indeterminate = result.determinate == 0;
    const bool over = !v.indeterminate && result.flagged_fraction >= cutoff;
    v.add("flagged_stargazers", static_cast<std::int64_t>(result.flagged), nullptr, result.flagged > 0);
    v.add("judged_stargazers", static_cast<std::int64_t>(result.determinate), nullptr,
          result.determinate > 0);
    v.add("flagged_fraction", result.flagged_fraction, cutoff, over);
    v.flagged = over;
    return v;
}

DetectionVerdict detect_automatic_updates(const RepoSnapshot& repo, const ThresholdConfig& cfg) {
    DetectionVerdict v;
    v.detector = Detector::automatic_updates;
    v.subject = repo.full_name;

    const auto& commits = repo.commits;
    const std::size_t n = commits.size();
    std::vector<std::int64_t> loc_prefix(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) loc_prefix[i + 1] = loc_prefix[i] + commits[i].modified_lines();

    struct Window {
        std::size_t begin = 0, end = 0;
        std::int64_t count = 0;
        double mean = 0.0;
        bool flagged = false;
    };
    std::optional<Window> best;
    auto better = [](const Window& a, const Window& b) {
        if (a.flagged != b.flagged) return a.flagged;
        if (a.count != b.count) return a.count > b.count;
        return a.mean < b.mean;
    };

    std::size_t end = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && commits[i].timestamp == commits[i - 1].timestamp) continue;
        const UnixSeconds limit = commits[i].timestamp + cfg.window_auto_updates;
        end = std::max(end, i);
        while (end < n && commits[end].timestamp < limit) ++end;
        Window w;
        w.begin = i;
        w.end = end;
        w.count = static_cast<std::int64_t>(end - i);
        w.mean = static_cast<double>(loc_prefix[end] - loc_prefix[i]) / static_cast<double>(w.count);
        w.flagged = w.count >= cfg.x2 && w.mean <= cfg.y;
        if (!best || better(w, *best)) best = w;
    }

    if (!best) {
        v.add("commit_count", 0, cfg.x2, false);
        v.add("mean_modified_loc", nullptr, cfg.y, false);
        return v;
    }
    const UnixSeconds start = commits[best->begin].timestamp;
    v.add("commit_count", best->count, cfg.x2, best->count >= cfg.x2);
    v.add("mean_modified_loc", best->mean, cfg.y, best->mean <= cfg.y);
    v.add("window", nlohmann::json::array({start, start + cfg.window_auto_updates}),
          cfg.window_auto_updates, true);
    v.flagged = best->flagged;
    return v;
}

textkit::Corpus build_readme_corpus(std::span<const RepoSnapshot> batch,
                                    std::span<const textkit::Corpus::Document> background) {
    std::vector<textkit::Corpus::Document> docs;
    docs.reserve(batch.size() + background.size());
    for (const auto& r : batch) docs.push_back({r.full_name, textkit::tokenize(r.readme)});
    for (const auto& d : background) docs.push_back(d);
    return textkit::Corpus(std::move(docs));
}

DetectionVerdict detect_keyword_stuffing(const RepoSnapshot& repo, const textkit::Corpus& corpus,
                                         const ThresholdConfig& cfg) {
    DetectionVerdict v;
    v.detector = Detector::keyword_stuffing;
    v.subject = repo.full_name;
    if (!corpus.contains(repo.full_name))
        throw NotFound("keyword stuffing: README of " + repo.full_name + " is not in the corpus");

    std::int64_t low = 0;
    for (const auto& keyword : repo.keywords) {
        const double rel = textkit::relevance(keyword, repo.full_name, corpus);
        if (rel < cfg.theta_k) {
            ++low;
            v.add("low_relevance_keyword", {{"keyword", keyword}, {"relevance", rel}}, cfg.theta_k, true);
        }
    }
    v.flagged = low >= cfg.x3;
    v.add("low_relevance_count", low, cfg.x3, v.flagged);
    return v;
}

double popularity_ratio(double a, double b) {
    const double floor = 1.0 / static_cast<double>(kRepoPopularityCap);
    return std::max(a, b) / std::max(std::min(a, b), floor);
}

std::vector<DetectionVerdict> detect_typo_squatting(const RepoSnapshot& candidate,
                                                    std::span<const PopularReference> references,
                                                    const ThresholdConfig& cfg,
                                                    std::int64_t popularity_floor) {
    if (references.empty()) throw InvalidInput("typo squatting: reference list is empty");
    std::vector<DetectionVerdict> out;
    const double candidate_pop = repo_popularity(candidate.star_count);
    for (const auto& ref : references) {
        if (ref.star_count < popularity_floor)
            throw InvalidInput("typo squatting: reference " + ref.full_name + " has " +
                               std::to_string(ref.star_count) + " stars, below the floor of " +
                               std::to_string(popularity_floor));
        if (iequals(ref.full_name, candidate.full_name)) continue;
        const auto slash = ref.full_name.find('/');
        const std::string_view ref_name =
            slash == std::string::npos ? std::string_view(ref.full_name)
                                       : std::string_view(ref.full_name).substr(slash + 1);
        const double name_sim = textkit::name_similarity(candidate.name(), ref_name);
        if (name_sim < cfg.theta_t1) continue;

        const double readme_sim = textkit::readme_similarity(candidate.readme, ref.readme);
        const double ratio = popularity_ratio(candidate_pop, repo_popularity(ref.star_count));

        DetectionVerdict v;
        v.detector = Detector::typo_squatting;
        v.subject = candidate.full_name;
        v.add("reference", ref.full_name, nullptr, true);
        v.add("name_similarity", name_sim, cfg.theta_t1, true);
        v.add("readme_similarity", readme_sim, cfg.theta_t2, readme_sim >= cfg.theta_t2);
        v.add("popularity_ratio", ratio, cfg.phi_p1, ratio >= cfg.phi_p1);
        v.flagged = readme_sim >= cfg.theta_t2 && ratio >= cfg.phi_p1;
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace ghabuse::detectors
