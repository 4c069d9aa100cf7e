#pragma once

// Embedding provider backed by an HTTP service. Wire format:
//   request  POST <path>  {"texts": ["...", ...]}
//   response 200          {"vectors": [[...], ...]}
// The endpoint URL comes from the constructor or the EMBED_ENDPOINT
// environment variable.

#include <cstdlib>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "assetgraph/error.hpp"
#include "assetgraph/vector/embedding.hpp"

namespace assetgraph::vec {

struct ParsedUrl {
    std::string scheme;
    std::string host;
    int port = 80;
    std::string path = "/";
};

inline ParsedUrl parse_url(const std::string& url) {
    ParsedUrl out;
    std::string rest = url;
    auto scheme_end = rest.find("://");
    if (scheme_end == std::string::npos) throw ValidationError("URL missing scheme: " + url);
    out.scheme = rest.substr(0, scheme_end);
    if (out.scheme != "http" && out.scheme != "https")
        throw ValidationError("unsupported URL scheme: " + out.scheme);
    out.port = out.scheme == "https" ? 443 : 80;
    rest = rest.substr(scheme_end + 3);
    auto slash = rest.find('/');
    std::string authority = slash == std::string::npos ? rest : rest.substr(0, slash);
    if (slash != std::string::npos) out.path = rest.substr(slash);
    auto colon = authority.rfind(':');
    if (colon != std::string::npos) {
        out.host = authority.substr(0, colon);
        try {
            out.port = std::stoi(authority.substr(colon + 1));
        } catch (const std::exception&) {
            throw ValidationError("bad port in URL: " + url);
        }
    } else {
        out.host = authority;
    }
    if (out.host.empty()) throw ValidationError("URL missing host: " + url);
    return out;
}

class HttpEmbeddingProvider : public EmbeddingProvider {
public:
    explicit HttpEmbeddingProvider(std::string endpoint = endpoint_from_env(),
                                   std::string model_name = "remote-encoder")
        : url_(parse_url(endpoint)), model_(std::move(model_name)) {}

    std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) override {
        nlohmann::json body;
        body["texts"] = texts;
        httplib::Client client(url_.host, url_.port);
        client.set_read_timeout(30, 0);
        auto res = client.Post(url_.path.c_str(), body.dump(), "application/json");
        if (!res)
            throw IoError("embedding endpoint unreachable: " + url_.host + ":" +
                          std::to_string(url_.port));
        if (res->status != 200)
            throw IoError("embedding endpoint returned status " + std::to_string(res->status));
        nlohmann::json reply;
        try {
            reply = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
            throw IoError(std::string("embedding endpoint sent malformed JSON: ") + e.what());
        }
        if (!reply.contains("vectors") || !reply["vectors"].is_array())
            throw IoError("embedding endpoint reply missing \"vectors\" array");
        const auto& arr = reply["vectors"];
        if (arr.size() != texts.size())
            throw IoError("embedding endpoint returned " + std::to_string(arr.size()) +
                          " vectors for " + std::to_string(texts.size()) + " texts");
        std::vector<EmbeddingVector> out;
        out.reserve(arr.size());
        for (const auto& v : arr) {
            if (!v.is_array()) throw IoError("embedding endpoint vector is not an array");
            std::vector<float> values;
            values.reserve(v.size());
            for (const auto& x : v) values.push_back(x.get<float>());
            out.push_back(EmbeddingVector::from(std::move(values)));
        }
        return out;
    }

    std::string model() const override { return model_; }

private:
    ParsedUrl url_;
    std::string model_;

    static std::string endpoint_from_env() {
        const char* e = std::getenv("EMBED_ENDPOINT");
        if (!e || !*e)
            throw ValidationError("EMBED_ENDPOINT is not set and no endpoint was given");
        return e;
    }
};

} // namespace assetgraph::vec
