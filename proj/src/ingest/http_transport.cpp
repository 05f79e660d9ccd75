#include <cctype>

#include "ghabuse/error.hpp"
#include "ghabuse/ingest/transport.hpp"

#ifdef GHABUSE_LIVE_TRANSPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#endif

namespace ghabuse::ingest {

#ifdef GHABUSE_LIVE_TRANSPORT
namespace {

class HttplibTransport : public Transport {
public:
    explicit HttplibTransport(std::string base_url) : base_url_(std::move(base_url)) {}

    HttpResponse send(const HttpRequest& request) override {
        if (request.method != "GET") throw InvalidInput("only GET is supported");
        httplib::Client client(base_url_);
        client.set_connection_timeout(10);
        client.set_read_timeout(30);
        client.set_follow_location(true);
        httplib::Params params(request.query.begin(), request.query.end());
        httplib::Headers headers(request.headers.begin(), request.headers.end());
        auto res = client.Get(request.path, params, headers);
        if (!res) throw TransportError("GET " + request.path + ": " + httplib::to_string(res.error()));
        HttpResponse out;
        out.status = res->status;
        out.body = res->body;
        for (const auto& [k, v] : res->headers) {
            std::string name = k;
            for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            out.headers[name] = v;
        }
        return out;
    }

private:
    std::string base_url_;
};

}  // namespace

std::unique_ptr<Transport> make_http_transport(const std::string& base_url) {
    return std::make_unique<HttplibTransport>(base_url);
}
#else
std::unique_ptr<Transport> make_http_transport(const std::string&) {
    throw InvalidInput("built without GHABUSE_LIVE_TRANSPORT; live fetching is unavailable");
}
#endif

}  // namespace ghabuse::ingest
