#include "ghabuse/snapshot_json.hpp"

#include <set>

#include "ghabuse/error.hpp"

namespace ghabuse {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Reads fields out of a JSON object and rejects any key that was not read.
class FieldReader {
public:
    FieldReader(const json& j, std::string context) : j_(j), context_(std::move(context)) {
        if (!j_.is_object()) fail("expected a JSON object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end()) fail("missing field '" + key + "'");
        return *it;
    }

    std::string str(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) fail("field '" + key + "' must be a string");
        return v.get<std::string>();
    }

    std::int64_t integer(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number_integer()) fail("field '" + key + "' must be an integer");
        return v.get<std::int64_t>();
    }

    bool boolean(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_boolean()) fail("field '" + key + "' must be a boolean");
        return v.get<bool>();
    }

    UnixSeconds timestamp(const std::string& key) { return as_timestamp(raw(key), key); }

    std::optional<std::int64_t> opt_integer(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end() || it->is_null()) return std::nullopt;
        if (!it->is_number_integer()) fail("field '" + key + "' must be an integer or null");
        return it->get<std::int64_t>();
    }

    std::optional<UnixSeconds> opt_timestamp(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end() || it->is_null()) return std::nullopt;
        return as_timestamp(*it, key);
    }

    std::vector<std::string> strings(const std::string& key) {
        std::vector<std::string> out;
        for (const json& v : array(key)) {
            if (!v.is_string()) fail("field '" + key + "' must hold strings");
            out.push_back(v.get<std::string>());
        }
        return out;
    }

    const json& array(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array()) fail("field '" + key + "' must be an array");
        return v;
    }

    void finish() const {
        for (const auto& [key, _] : j_.items())
            if (!seen_.count(key)) fail("unknown field '" + key + "'");
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw SchemaError(context_ + ": " + msg);
    }

    const std::string& context() const { return context_; }

private:
    UnixSeconds as_timestamp(const json& v, const std::string& key) const {
        if (v.is_number_integer()) return v.get<std::int64_t>();
        if (v.is_string()) {
            try {
                return parse_iso8601(v.get<std::string>());
            } catch (const InvalidInput& e) {
                fail("field '" + key + "': " + e.what());
            }
        }
        fail("field '" + key + "' must be integer UTC seconds or an ISO-8601 string");
    }

    const json& j_;
    std::string context_;
    std::set<std::string> seen_;
};

template <typename T>
ordered_json opt(const std::optional<T>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

void check_header(FieldReader& r, std::string_view expected_kind) {
    const json& version = r.raw("schema_version");
    if (!version.is_number_integer() || version.get<std::int64_t>() != kSnapshotSchemaVersion)
        throw SchemaError(r.context() + ": schema_version mismatch: found " + version.dump() +
                          ", expected " + std::to_string(kSnapshotSchemaVersion));
    const std::string kind = r.str("kind");
    if (kind != expected_kind)
        throw SchemaError(r.context() + ": kind mismatch: found '" + kind + "', expected '" +
                          std::string(expected_kind) + "'");
}

template <typename Fn>
auto parse_enum_field(FieldReader& r, const std::string& key, Fn parse) {
    const std::string s = r.str(key);
    try {
        return parse(s);
    } catch (const InvalidInput& e) {
        r.fail(e.what());
    }
}

}  // namespace

ordered_json to_json(const RepoSnapshot& repo) {
    ordered_json j;
    j["schema_version"] = kSnapshotSchemaVersion;
    j["kind"] = "repo";
    j["full_name"] = repo.full_name;
    j["description"] = repo.description;
    j["readme"] = repo.readme;
    j["keywords"] = repo.keywords;
    j["star_count"] = repo.star_count;
    j["fork_count"] = repo.fork_count;
    j["star_events"] = ordered_json::array();
    for (const auto& e : repo.star_events)
        j["star_events"].push_back({{"user_login", e.user_login}, {"starred_at", e.starred_at}});
    j["commits"] = ordered_json::array();
    for (const auto& c : repo.commits) {
        ordered_json cj;
        cj["sha"] = c.sha;
        cj["author_login"] = c.author_login;
        cj["co_authors"] = c.co_authors;
        cj["timestamp"] = c.timestamp;
        cj["lines_added"] = c.lines_added;
        cj["lines_deleted"] = c.lines_deleted;
        cj["touched_paths"] = c.touched_paths;
        j["commits"].push_back(std::move(cj));
    }
    j["issues"] = ordered_json::array();
    for (const auto& is : repo.issues) {
        ordered_json ij;
        ij["number"] = is.number;
        ij["author_login"] = is.author_login;
        ij["title"] = is.title;
        ij["body"] = is.body;
        ij["created_at"] = is.created_at;
        ij["closed_at"] = opt(is.closed_at);
        ij["state"] = to_string(is.state);
        j["issues"].push_back(std::move(ij));
    }
    j["pull_requests"] = ordered_json::array();
    for (const auto& pr : repo.pull_requests) {
        ordered_json pj;
        pj["number"] = pr.number;
        pj["author_login"] = pr.author_login;
        pj["title"] = pr.title;
        pj["body"] = pr.body;
        pj["created_at"] = pr.created_at;
        pj["merged_or_closed_at"] = opt(pr.merged_or_closed_at);
        pj["state"] = to_string(pr.state);
        j["pull_requests"].push_back(std::move(pj));
    }
    j["snapshot_at"] = repo.snapshot_at;
    return j;
}

ordered_json to_json(const UserSnapshot& user) {
    ordered_json j;
    j["schema_version"] = kSnapshotSchemaVersion;
    j["kind"] = "user";
    j["login"] = user.login;
    j["starred_repos"] = user.starred_repos;
    j["owned_repos"] = ordered_json::array();
    for (const auto& r : user.owned_repos)
        j["owned_repos"].push_back({{"full_name", r.full_name}, {"star_count", r.star_count}});
    j["activity"] = ordered_json::array();
    for (const auto& e : user.activity)
        j["activity"].push_back(
            {{"kind", to_string(e.kind)}, {"timestamp", e.timestamp}, {"target", e.target}});
    j["profile_readme"] = user.profile_readme;
    j["stat_widget_urls"] = user.stat_widget_urls;
    j["claimed_star_count"] = opt(user.claimed_star_count);
    j["follower_count"] = user.follower_count;
    j["snapshot_at"] = user.snapshot_at;
    return j;
}

ordered_json to_json(const Snapshot& snapshot) {
    return std::visit([](const auto& s) { return to_json(s); }, snapshot);
}

RepoSnapshot repo_from_json(const json& j) {
    FieldReader r(j, "repo snapshot");
    check_header(r, "repo");
    RepoSnapshot repo;
    repo.full_name = r.str("full_name");
    repo.description = r.str("description");
    repo.readme = r.str("readme");
    repo.keywords = r.strings("keywords");
    repo.star_count = r.integer("star_count");
    repo.fork_count = r.integer("fork_count");
    for (const json& ej : r.array("star_events")) {
        FieldReader er(ej, "star event");
        StarEvent e{er.str("user_login"), er.timestamp("starred_at")};
        er.finish();
        repo.star_events.push_back(std::move(e));
    }
    for (const json& cj : r.array("commits")) {
        FieldReader cr(cj, "commit");
        CommitRecord c;
        c.sha = cr.str("sha");
        c.author_login = cr.str("author_login");
        c.co_authors = cr.strings("co_authors");
        c.timestamp = cr.timestamp("timestamp");
        c.lines_added = cr.integer("lines_added");
        c.lines_deleted = cr.integer("lines_deleted");
        c.touched_paths = cr.strings("touched_paths");
        cr.finish();
        repo.commits.push_back(std::move(c));
    }
    for (const json& ij : r.array("issues")) {
        FieldReader ir(ij, "issue");
        IssueRecord is;
        is.number = ir.integer("number");
        is.author_login = ir.str("author_login");
        is.title = ir.str("title");
        is.body = ir.str("body");
        is.created_at = ir.timestamp("created_at");
        is.closed_at = ir.opt_timestamp("closed_at");
        is.state = parse_enum_field(ir, "state", parse_issue_state);
        ir.finish();
        repo.issues.push_back(std::move(is));
    }
    for (const json& pj : r.array("pull_requests")) {
        FieldReader pr(pj, "pull request");
        PullRequestRecord p;
        p.number = pr.integer("number");
        p.author_login = pr.str("author_login");
        p.title = pr.str("title");
        p.body = pr.str("body");
        p.created_at = pr.timestamp("created_at");
        p.merged_or_closed_at = pr.opt_timestamp("merged_or_closed_at");
        p.state = parse_enum_field(pr, "state", parse_pull_request_state);
        pr.finish();
        repo.pull_requests.push_back(std::move(p));
    }
    repo.snapshot_at = r.timestamp("snapshot_at");
    r.finish();
    validate(repo);
    return repo;
}

UserSnapshot user_from_json(const json& j) {
    FieldReader r(j, "user snapshot");
    check_header(r, "user");
    UserSnapshot user;
    user.login = r.str("login");
    user.starred_repos = r.strings("starred_repos");
    for (const json& oj : r.array("owned_repos")) {
        FieldReader orr(oj, "owned repo");
        OwnedRepo o{orr.str("full_name"), orr.integer("star_count")};
        orr.finish();
        user.owned_repos.push_back(std::move(o));
    }
    for (const json& aj : r.array("activity")) {
        FieldReader ar(aj, "activity event");
        ActivityEvent e;
        e.kind = parse_enum_field(ar, "kind", parse_activity_kind);
        e.timestamp = ar.timestamp("timestamp");
        e.target = ar.str("target");
        ar.finish();
        user.activity.push_back(std::move(e));
    }
    user.profile_readme = r.str("profile_readme");
    user.stat_widget_urls = r.strings("stat_widget_urls");
    user.claimed_star_count = r.opt_integer("claimed_star_count");
    user.follower_count = r.integer("follower_count");
    user.snapshot_at = r.timestamp("snapshot_at");
    r.finish();
    validate(user);
    return user;
}

Snapshot snapshot_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw SchemaError("snapshot: missing string field 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "repo") return repo_from_json(j);
    if (kind == "user") return user_from_json(j);
    throw SchemaError("snapshot: unknown kind '" + kind + "'");
}

std::string dump_snapshot(const Snapshot& snapshot) { return to_json(snapshot).dump(2) + "\n"; }

ordered_json to_json(const ThresholdConfig& cfg) {
    ordered_json j;
    j["x1"] = cfg.x1;
    j["x2"] = cfg.x2;
    j["x3"] = cfg.x3;
    j["x4"] = cfg.x4;
    j["x5"] = cfg.x5;
    j["epsilon"] = cfg.epsilon;
    j["y"] = cfg.y;
    j["theta_k"] = cfg.theta_k;
    j["theta_t1"] = cfg.theta_t1;
    j["theta_t2"] = cfg.theta_t2;
    j["phi_p1"] = cfg.phi_p1;
    j["phi_p2"] = cfg.phi_p2;
    j["phi_p3"] = cfg.phi_p3;
    j["delta_t"] = cfg.delta_t;
    j["window_fake_stars"] = cfg.window_fake_stars;
    j["window_auto_updates"] = cfg.window_auto_updates;
    j["window_rep_farming"] = cfg.window_rep_farming;
    j["farming_min_events"] = cfg.farming_min_events;
    j["farming_strict"] = cfg.farming_strict;
    return j;
}

namespace {

// Integer seconds, or a string such as "90d", "7d", "1h", "30m", "45s".
UnixSeconds parse_duration(const json& v, const std::string& key) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (!s.empty()) {
            std::int64_t unit = 1;
            switch (s.back()) {
                case 'd': unit = kSecondsPerDay; break;
                case 'h': unit = 3600; break;
                case 'm': unit = 60; break;
                case 's': unit = 1; break;
                default: unit = 0;
            }
            const std::string digits = s.substr(0, s.size() - 1);
            if (unit != 0 && !digits.empty() &&
                digits.find_first_not_of("0123456789") == std::string::npos)
                return std::stoll(digits) * unit;
        }
    }
    throw SchemaError("threshold config: '" + key +
                      "' must be integer seconds or a duration like \"7d\"");
}

}  // namespace

ThresholdConfig thresholds_from_json(const json& j, ThresholdConfig base) {
    if (!j.is_object()) throw SchemaError("threshold config: expected a JSON object");
    ThresholdConfig c = base;
    for (const auto& [key, v] : j.items()) {
        auto integer = [&, &key = key, &v = v]() {
            if (!v.is_number_integer())
                throw SchemaError("threshold config: '" + key + "' must be an integer");
            return v.get<std::int64_t>();
        };
        auto number = [&, &key = key, &v = v]() {
            if (!v.is_number()) throw SchemaError("threshold config: '" + key + "' must be a number");
            return v.get<double>();
        };
        if (key == "x1") c.x1 = integer();
        else if (key == "x2") c.x2 = integer();
        else if (key == "x3") c.x3 = integer();
        else if (key == "x4") c.x4 = integer();
        else if (key == "x5") c.x5 = integer();
        else if (key == "epsilon") c.epsilon = integer();
        else if (key == "y") c.y = number();
        else if (key == "theta_k") c.theta_k = number();
        else if (key == "theta_t1") c.theta_t1 = number();
        else if (key == "theta_t2") c.theta_t2 = number();
        else if (key == "phi_p1") c.phi_p1 = number();
        else if (key == "phi_p2") c.phi_p2 = number();
        else if (key == "phi_p3") c.phi_p3 = number();
        else if (key == "delta_t") c.delta_t = parse_duration(v, key);
        else if (key == "window_fake_stars") c.window_fake_stars = parse_duration(v, key);
        else if (key == "window_auto_updates") c.window_auto_updates = parse_duration(v, key);
        else if (key == "window_rep_farming") c.window_rep_farming = parse_duration(v, key);
        else if (key == "farming_min_events") c.farming_min_events = integer();
        else if (key == "farming_strict") {
            if (!v.is_boolean()) throw SchemaError("threshold config: 'farming_strict' must be a boolean");
            c.farming_strict = v.get<bool>();
        } else {
            throw SchemaError("threshold config: unknown key '" + key + "'");
        }
    }
    c.validate();
    return c;
}

}  // namespace ghabuse
