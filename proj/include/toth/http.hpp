#pragma once

#include <chrono>
#include <string>

namespace toth::http {

struct Url {
    std::string scheme_host_port; ///< "http://host:port"
    std::string path;             ///< "/v1/chat/completions"
};

/// Splits an http:// URL. Throws ConfigError for anything else.
Url parse_url(const std::string& url);

struct Response {
    int status = 0;
    std::string body;
};

/// POSTs a JSON body. A transport error or 5xx status is retried once; if the
/// retry fails too, throws ProviderUnavailable. 4xx is returned to the caller.
Response post_json(const std::string& url, const std::string& body,
                   std::chrono::milliseconds timeout);

} // namespace toth::http
