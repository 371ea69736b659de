#include "toth/http.hpp"

#include "toth/error.hpp"

#include <httplib.h>

namespace toth::http {

Url parse_url(const std::string& url)
{
    constexpr std::string_view scheme = "http://";
    if (url.rfind(scheme, 0) != 0) {
        throw Error(ErrorCode::ConfigError, "only http:// endpoints are supported: '" + url + "'");
    }
    std::size_t slash = url.find('/', scheme.size());
    Url out;
    out.scheme_host_port = url.substr(0, slash);
    out.path = slash == std::string::npos ? "/" : url.substr(slash);
    if (out.scheme_host_port.size() == scheme.size()) {
        throw Error(ErrorCode::ConfigError, "endpoint has no host: '" + url + "'");
    }
    return out;
}

Response post_json(const std::string& url, const std::string& body,
                   std::chrono::milliseconds timeout)
{
    const Url target = parse_url(url);
    httplib::Client client(target.scheme_host_port);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    std::string last_failure;
    for (int attempt = 0; attempt < 2; ++attempt) {
        auto result = client.Post(target.path, body, "application/json");
        if (!result) {
            last_failure = httplib::to_string(result.error());
            continue;
        }
        if (result->status >= 500) {
            last_failure = "HTTP " + std::to_string(result->status);
            continue;
        }
        return Response{result->status, result->body};
    }
    throw Error(ErrorCode::ProviderUnavailable, url + ": " + last_failure);
}

} // namespace toth::http
