#include "ghabuse/ingest/transport.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "ghabuse/error.hpp"

namespace ghabuse::ingest {
namespace {

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

std::string HttpResponse::header(const std::string& name) const {
    const auto it = headers.find(lower(name));
    return it == headers.end() ? std::string() : it->second;
}

std::string request_key(const std::string& method, const std::string& path, QueryParams query) {
    std::sort(query.begin(), query.end());
    std::string key = method + " " + path;
    char sep = '?';
    for (const auto& [k, v] : query) {
        key += sep + k + "=" + v;
        sep = '&';
    }
    return key;
}

ReplayTransport::ReplayTransport(const nlohmann::json& transcript) {
    if (!transcript.is_array()) throw SchemaError("transcript: expected a JSON array");
    for (const auto& item : transcript) {
        try {
            const auto& req = item.at("request");
            QueryParams query;
            if (req.contains("query")) {
                for (const auto& [k, v] : req.at("query").items())
                    query.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
            }
            Entry e;
            e.key = request_key(req.value("method", "GET"), req.at("path").get<std::string>(), query);
            const auto& res = item.at("response");
            e.response.status = res.at("status").get<int>();
            if (res.contains("headers"))
                for (const auto& [k, v] : res.at("headers").items())
                    e.response.headers[lower(k)] = v.is_string() ? v.get<std::string>() : v.dump();
            if (res.contains("body"))
                e.response.body = res.at("body").is_string() ? res.at("body").get<std::string>()
                                                             : res.at("body").dump();
            entries_.push_back(std::move(e));
        } catch (const nlohmann::json::exception& ex) {
            throw SchemaError(std::string("transcript entry: ") + ex.what());
        }
    }
}

std::shared_ptr<ReplayTransport> ReplayTransport::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFound("transcript not found: " + path.string());
    try {
        return std::make_shared<ReplayTransport>(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& ex) {
        throw SchemaError(path.string() + ": " + ex.what());
    }
}

HttpResponse ReplayTransport::send(const HttpRequest& request) {
    const auto key = request_key(request.method, request.path, request.query);
    std::lock_guard lock(mutex_);
    for (auto& e : entries_) {
        if (!e.used && e.key == key) {
            e.used = true;
            return e.response;
        }
    }
    throw TransportError("no recorded response for " + key);
}

std::size_t ReplayTransport::unused() const {
    std::lock_guard lock(mutex_);
    return static_cast<std::size_t>(
        std::count_if(entries_.begin(), entries_.end(), [](const Entry& e) { return !e.used; }));
}

}  // namespace ghabuse::ingest
