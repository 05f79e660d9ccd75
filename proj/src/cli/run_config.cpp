#include "ghabuse/cli/run_config.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "ghabuse/error.hpp"
#include "ghabuse/ingest/store.hpp"
#include "ghabuse/snapshot_json.hpp"

namespace ghabuse::cli {
namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

json parse_value(const std::string& text) {
    if (text.empty()) return "";
    try {
        return json::parse(text);
    } catch (const json::parse_error&) {
        return text;
    }
}

std::filesystem::path resolve(const json& v, const std::filesystem::path& base_dir, const char* key) {
    if (!v.is_string()) throw SchemaError(std::string("config: '") + key + "' must be a string");
    std::filesystem::path p(v.get<std::string>());
    return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
}

template <typename T>
T get_as(const json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw SchemaError("config: '" + key + "' has the wrong type");
    }
}

}  // namespace

json parse_config_text(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') {
        try {
            return json::parse(text);
        } catch (const json::parse_error& e) {
            throw SchemaError(std::string("config: ") + e.what());
        }
    }
    json root = json::object();
    json* section = &root;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t n = 0;
    while (std::getline(in, raw)) {
        ++n;
        const auto line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw SchemaError("config line " + std::to_string(n) + ": unterminated section");
            const auto name = trim(std::string_view(line).substr(1, line.size() - 2));
            if (name.empty() || root.contains(name))
                throw SchemaError("config line " + std::to_string(n) + ": bad or repeated section '" + name + "'");
            root[name] = json::object();
            section = &root[name];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw SchemaError("config line " + std::to_string(n) + ": expected key = value");
        const auto key = trim(std::string_view(line).substr(0, eq));
        if (key.empty()) throw SchemaError("config line " + std::to_string(n) + ": empty key");
        if (section->contains(key)) throw SchemaError("config line " + std::to_string(n) + ": duplicate key '" + key + "'");
        (*section)[key] = parse_value(trim(std::string_view(line).substr(eq + 1)));
    }
    return root;
}

std::vector<Detector> parse_detector_list(std::string_view csv) {
    std::vector<Detector> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const auto comma = std::min(csv.find(',', pos), csv.size());
        const auto name = trim(csv.substr(pos, comma - pos));
        if (!name.empty()) {
            const auto d = parse_detector(name);
            if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
        }
        pos = comma + 1;
    }
    if (out.empty()) throw InvalidInput("detector selection is empty");
    std::sort(out.begin(), out.end());
    return out;
}

RunConfig run_config_from_json(const json& j, const std::filesystem::path& base_dir, RunConfig base) {
    if (!j.is_object()) throw SchemaError("config must be an object");
    RunConfig c = std::move(base);
    for (const auto& [key, v] : j.items()) {
        if (key == "thresholds") {
            c.thresholds = thresholds_from_json(v, c.thresholds);
        } else if (key == "client") {
            if (!v.is_object()) throw SchemaError("config: 'client' must be an object");
            for (const auto& [k, x] : v.items()) {
                if (k == "base_url") c.client.base_url = get_as<std::string>(x, k);
                else if (k == "max_in_flight") c.client.max_in_flight = get_as<std::int64_t>(x, k);
                else if (k == "retry_budget") c.client.retry_budget = get_as<std::int64_t>(x, k);
                else if (k == "per_page") c.client.per_page = get_as<std::int64_t>(x, k);
                else throw SchemaError("config: unknown key 'client." + k + "'");
            }
            c.client.validate();
        } else if (key == "detectors") {
            if (v.is_array()) {
                std::string joined;
                for (const auto& d : v) joined += get_as<std::string>(d, key) + ",";
                c.detectors = parse_detector_list(joined);
            } else {
                c.detectors = parse_detector_list(get_as<std::string>(v, key));
            }
        } else if (key == "format") {
            c.format = eval::parse_report_format(get_as<std::string>(v, key));
        } else if (key == "out") {
            c.out = resolve(v, base_dir, "out");
        } else if (key == "seed") {
            c.seed = get_as<std::uint64_t>(v, key);
        } else if (key == "token_env") {
            c.token_env = get_as<std::string>(v, key);
        } else if (key == "references") {
            c.references = resolve(v, base_dir, "references");
        } else if (key == "background") {
            c.background = resolve(v, base_dir, "background");
        } else if (key == "spam_model") {
            c.spam_model = resolve(v, base_dir, "spam_model");
        } else if (key == "fake_stars_repo_fraction") {
            c.fake_stars_repo_fraction = get_as<double>(v, key);
            if (!(c.fake_stars_repo_fraction >= 0.0 && c.fake_stars_repo_fraction <= 1.0))
                throw InvalidInput("fake_stars_repo_fraction must be in [0,1]");
        } else {
            throw SchemaError("config: unknown key '" + key + "'");
        }
    }
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base) {
    const auto text = ingest::read_text_file(path);
    try {
        return run_config_from_json(parse_config_text(text), path.parent_path(), std::move(base));
    } catch (const SchemaError& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
}

}  // namespace ghabuse::cli
