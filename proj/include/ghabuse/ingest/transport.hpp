#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ghabuse::ingest {

using QueryParams = std::vector<std::pair<std::string, std::string>>;

struct HttpRequest {
    std::string method = "GET";
    std::string path;  // "/repos/o/n", no query string
    QueryParams query;
    std::map<std::string, std::string> headers;
};

struct HttpResponse {
    int status = 0;
    std::map<std::string, std::string> headers;  // names lowercased
    std::string body;

    /// Header value or "" (name is matched case-insensitively).
    std::string header(const std::string& name) const;
};

/// One HTTP exchange per call. Implementations must be safe to call from
/// several threads and throw TransportError when no response was received.
class Transport {
public:
    virtual ~Transport() = default;
    virtual HttpResponse send(const HttpRequest& request) = 0;
};

/// Serves responses from a recorded transcript: a JSON array of
/// {request{method,path,query}, response{status,headers,body}}. A request is
/// matched on method, path and the query as an unordered set of pairs;
/// repeated identical requests consume recorded entries in order. The body may
/// be a string or any JSON value (serialized compactly).
class ReplayTransport : public Transport {
public:
    explicit ReplayTransport(const nlohmann::json& transcript);
    static std::shared_ptr<ReplayTransport> from_file(const std::filesystem::path& path);

    HttpResponse send(const HttpRequest& request) override;

    /// Entries never requested.
    std::size_t unused() const;

private:
    struct Entry {
        std::string key;
        HttpResponse response;
        bool used = false;
    };
    std::vector<Entry> entries_;
    mutable std::mutex mutex_;
};

std::string request_key(const std::string& method, const std::string& path, QueryParams query);

/// HTTPS transport over cpp-httplib. Throws InvalidInput when the build has
/// no live transport.
std::unique_ptr<Transport> make_http_transport(const std::string& base_url);

}  // namespace ghabuse::ingest
