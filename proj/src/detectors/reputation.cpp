// Reputation manipulation: reputation farming and fake profile stats.

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_map>

#include "ghabuse/detectors.hpp"

namespace ghabuse::detectors {
namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

constexpr std::array<std::string_view, 9> kWidgetHosts = {
    "github-readme-stats.vercel.app",
    "github-readme-streak-stats.herokuapp.com",
    "streak-stats.demolab.com",
    "github-profile-trophy.vercel.app",
    "github-readme-activity-graph.vercel.app",
    "github-profile-summary-cards.vercel.app",
    "github-contributor-stats.vercel.app",
    "ghchart.rshah.org",
    "komarev.com",
};

// Hosts whose account is the last path segment rather than a query parameter.
constexpr std::array<std::string_view, 1> kPathAccountHosts = {"ghchart.rshah.org"};

constexpr std::array<std::string_view, 3> kAccountParams = {"username", "user", "login"};

struct UrlParts {
    std::string host;
    std::string path;
    std::string query;
};

std::optional<UrlParts> split_url(std::string_view url) {
    const auto scheme = url.find("://");
    if (scheme == std::string_view::npos) return std::nullopt;
    const std::string s = lower(url.substr(0, scheme));
    if (s != "http" && s != "https") return std::nullopt;
    std::string_view rest = url.substr(scheme + 3);
    if (auto hash = rest.find('#'); hash != std::string_view::npos) rest = rest.substr(0, hash);
    const auto host_end = rest.find_first_of("/?");
    std::string_view authority = rest.substr(0, host_end);
    if (auto at = authority.rfind('@'); at != std::string_view::npos) authority.remove_prefix(at + 1);
    if (auto colon = authority.find(':'); colon != std::string_view::npos)
        authority = authority.substr(0, colon);
    if (authority.empty()) return std::nullopt;
    UrlParts parts;
    parts.host = lower(authority);
    if (host_end != std::string_view::npos) {
        std::string_view tail = rest.substr(host_end);
        const auto q = tail.find('?');
        parts.path = std::string(tail.substr(0, q));
        if (q != std::string_view::npos) parts.query = std::string(tail.substr(q + 1));
    }
    return parts;
}

std::string percent_decode(std::string_view s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '%' && i + 2 < s.size() && std::isxdigit(static_cast<unsigned char>(s[i + 1])) &&
            std::isxdigit(static_cast<unsigned char>(s[i + 2]))) {
            out.push_back(static_cast<char>(std::stoi(std::string(s.substr(i + 1, 2)), nullptr, 16)));
            i += 2;
        } else if (s[i] == '+') {
            out.push_back(' ');
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

bool host_matches(std::string_view host, std::string_view known) {
    return host == known || (host.size() > known.size() && host.ends_with(known) &&
                             host[host.size() - known.size() - 1] == '.');
}

}  // namespace

std::span<const std::string_view> default_widget_hosts() { return kWidgetHosts; }

bool is_widget_url(std::string_view url, std::span<const std::string_view> hosts) {
    const auto parts = split_url(url);
    if (!parts) return false;
    // Self-hosted deployments of github-readme-stats keep the project name.
    if (parts->host.starts_with("github-readme-stats") && parts->host.ends_with(".vercel.app"))
        return true;
    return std::any_of(hosts.begin(), hosts.end(),
                       [&](std::string_view h) { return host_matches(parts->host, h); });
}

bool is_widget_url(std::string_view url) { return is_widget_url(url, kWidgetHosts); }

std::optional<std::string> widget_account(std::string_view url) {
    const auto parts = split_url(url);
    if (!parts) return std::nullopt;

    const std::string& query = parts->query;
    for (std::size_t start = 0; start < query.size();) {
        std::size_t amp = query.find('&', start);
        if (amp == std::string::npos) amp = query.size();
        const std::string pair = query.substr(start, amp - start);
        const auto eq = pair.find('=');
        if (eq != std::string::npos) {
            const std::string key = lower(pair.substr(0, eq));
            if (std::find(kAccountParams.begin(), kAccountParams.end(), key) != kAccountParams.end()) {
                std::string value = percent_decode(pair.substr(eq + 1));
                if (!value.empty()) return value;
            }
        }
        start = amp + 1;
    }

    const bool path_host = std::any_of(kPathAccountHosts.begin(), kPathAccountHosts.end(),
                                       [&](std::string_view h) { return host_matches(parts->host, h); });
    if (path_host) {
        std::string_view path = parts->path;
        while (!path.empty() && path.back() == '/') path.remove_suffix(1);
        const auto slash = path.rfind('/');
        const std::string_view last = slash == std::string_view::npos ? path : path.substr(slash + 1);
        if (!last.empty()) return percent_decode(last);
    }
    return std::nullopt;
}

DetectionVerdict detect_reputation_farming(const UserSnapshot& user,
                                           std::span<const RepoSnapshot> repos,
                                           const ThresholdConfig& cfg) {
    // "owner/name#number" (lowercased) -> closure time.
    std::unordered_map<std::string, UnixSeconds> resolved;
    for (const auto& repo : repos) {
        const std::string prefix = lower(repo.full_name) + "#";
        for (const auto& is : repo.issues)
            if (is.closed_at) resolved.emplace(prefix + std::to_string(is.number), *is.closed_at);
        for (const auto& pr : repo.pull_requests)
            if (pr.merged_or_closed_at)
                resolved.emplace(prefix + std::to_string(pr.number), *pr.merged_or_closed_at);
    }

    DetectionVerdict v;
    v.detector = Detector::reputation_farming;
    v.subject = user.login;
    std::int64_t stale = 0;
    for (const auto& e : user.activity) {
        auto it = resolved.find(lower(e.target));
        if (it == resolved.end()) continue;
        const UnixSeconds closed = it->second;
        if (e.timestamp < closed + cfg.delta_t || e.timestamp >= closed + cfg.window_rep_farming)
            continue;
        ++stale;
        nlohmann::ordered_json obs;
        obs["target"] = e.target;
        obs["kind"] = to_string(e.kind);
        obs["timestamp"] = e.timestamp;
        obs["closed_at"] = closed;
        obs["delay"] = e.timestamp - closed;
        v.add("stale_interaction", nlohmann::json(obs), cfg.delta_t, true);
    }
    const std::int64_t needed = cfg.farming_strict ? 1 : cfg.farming_min_events;
    v.flagged = stale >= needed;
    v.add("stale_interaction_count", stale, needed, v.flagged);
    return v;
}

DetectionVerdict detect_fake_stats(const UserSnapshot& user, const ThresholdConfig& cfg) {
    DetectionVerdict v;
    v.detector = Detector::fake_stats;
    v.subject = user.login;

    std::int64_t foreign = 0;
    for (const auto& url : user.stat_widget_urls) {
        const auto account = widget_account(url);
        if (!account) {
            v.add("unparseable_widget_url", url, nullptr, false);
        } else if (!iequals(*account, user.login)) {
            ++foreign;
            v.add("foreign_widget_account", {{"url", url}, {"account", *account}}, user.login, true);
        }
    }
    const bool clause_a = foreign > 0;
    v.add("foreign_widget_count", foreign, 1, clause_a);

    std::int64_t actual = 0;
    for (const auto& r : user.owned_repos) actual += r.star_count;
    bool clause_b = false;
    if (user.claimed_star_count) {
        const std::int64_t gap = std::llabs(*user.claimed_star_count - actual);
        clause_b = gap >= cfg.x5;
        v.add("claimed_star_count", *user.claimed_star_count, actual, clause_b);
        v.add("claimed_star_gap", gap, cfg.x5, clause_b);
    } else {
        v.add("claimed_star_gap", nullptr, cfg.x5, false);
    }
    v.flagged = clause_a || clause_b;
    return v;
}

}  // namespace ghabuse::detectors
