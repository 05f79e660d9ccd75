// Authority fraud (spoofed contributor) and issue spam.

#include <algorithm>
#include <cctype>

#include "ghabuse/detectors.hpp"
#include "ghabuse/error.hpp"
#include "ghabuse/textkit/extract.hpp"
#include "ghabuse/textkit/tokenize.hpp"

namespace ghabuse::detectors {

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

std::vector<const CommitRecord*> attributed_commits(const RepoSnapshot& repo, std::string_view login) {
    std::vector<const CommitRecord*> out;
    for (const auto& c : repo.commits) {
        const bool coauthor = std::any_of(c.co_authors.begin(), c.co_authors.end(),
                                          [&](const std::string& a) { return iequals(a, login); });
        if (iequals(c.author_login, login) || coauthor) out.push_back(&c);
    }
    return out;
}

DetectionVerdict detect_spoofed_contributor(const RepoSnapshot& repo, const UserSnapshot& suspect,
                                            const ThresholdConfig& cfg) {
    const auto commits = attributed_commits(repo, suspect.login);
    if (commits.empty())
        throw PreconditionViolation("spoofed contributor: '" + suspect.login +
                                    "' is not attributed on any commit of " + repo.full_name);

    DetectionVerdict v;
    v.detector = Detector::spoofed_contributor;
    v.subject = repo.full_name;

    const auto count = static_cast<std::int64_t>(commits.size());
    const double repo_pop = repo_popularity(repo.star_count);
    const double user_pop = user_popularity(suspect.follower_count);
    const bool few = count <= cfg.x4;
    const bool obscure_repo = repo_pop <= cfg.phi_p2;
    const bool famous_user = user_pop >= cfg.phi_p3;

    nlohmann::json shas = nlohmann::json::array();
    for (const auto* c : commits) shas.push_back(c->sha);
    v.add("suspect", suspect.login, nullptr, true);
    v.add("attributed_commits", count, cfg.x4, few);
    v.add("repo_popularity", repo_pop, cfg.phi_p2, obscure_repo);
    v.add("suspect_popularity", user_pop, cfg.phi_p3, famous_user);
    v.add("attributed_shas", std::move(shas), nullptr, true);
    v.flagged = few && obscure_repo && famous_user;
    return v;
}

std::vector<DetectionVerdict> detect_issue_spam(const RepoSnapshot& repo,
                                                const textkit::SpamClassifier& classifier,
                                                const textkit::TfIdfModel& tfidf,
                                                const ThresholdConfig& /*cfg*/) {
    classifier.check_shape();
    if (classifier.input_dim != tfidf.dim())
        throw InvalidInput("issue spam: classifier input_dim " +
                           std::to_string(classifier.input_dim) + " does not match vocabulary size " +
                           std::to_string(tfidf.dim()));

    std::vector<DetectionVerdict> out;
    out.reserve(repo.issues.size());
    for (const auto& issue : repo.issues) {
        const std::string text = issue.title + "\n" + issue.body;
        const auto links = textkit::extract_links(text);
        const auto commands = textkit::extract_commands(text);
        const double p = textkit::classifier_predict(
            classifier, textkit::tfidf_transform(tfidf, textkit::tokenize(text)));

        DetectionVerdict v;
        v.detector = Detector::issue_spam;
        v.subject = repo.full_name + "#" + std::to_string(issue.number);
        const bool gate = !links.empty() || !commands.empty();
        const bool spam = p >= classifier.threshold;
        v.add("links", links, nullptr, !links.empty());
        v.add("commands", commands, nullptr, !commands.empty());
        v.add("links_or_commands", gate, true, gate);
        v.add("spam_probability", p, classifier.threshold, spam);
        v.flagged = gate && spam;
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace ghabuse::detectors
