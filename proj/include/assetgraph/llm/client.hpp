#pragma once

// Language-model client interface plus the two concrete implementations:
// an HTTP client speaking a minimal completion protocol and a scriptable
// stub that replays canned completions from a YAML playbook. The stub is
// the primary test vehicle; nothing in the pipeline may depend on which
// implementation sits behind the interface.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "assetgraph/error.hpp"
#include "assetgraph/vector/http_embedder.hpp"

namespace assetgraph::llm {

// Backend failures surface as this error. A client never reports a failure
// by returning an empty completion.
class LlmError : public Error {
public:
    explicit LlmError(const std::string& message) : Error("llm: " + message) {}
};

struct Completion {
    std::string text;
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
};

class LlmClient {
public:
    virtual ~LlmClient() = default;
    virtual Completion complete(const std::string& prompt, double temperature,
                                std::size_t max_tokens) = 0;
    virtual std::string model() const = 0;
};

// Wire format:
//   request  POST <path>  {"model": ..., "prompt": ..., "temperature": ..., "max_tokens": ...}
//   response 200          {"text": ..., "prompt_tokens": ..., "completion_tokens": ...}
// Endpoint comes from the constructor or LLM_ENDPOINT; if LLM_API_KEY is set
// it is sent as a bearer token.
class HttpLlmClient : public LlmClient {
public:
    explicit HttpLlmClient(std::string endpoint = endpoint_from_env(),
                           std::string model_name = "remote-llm",
                           std::string api_key = api_key_from_env())
        : url_(vec::parse_url(endpoint)), model_(std::move(model_name)),
          api_key_(std::move(api_key)) {}

    Completion complete(const std::string& prompt, double temperature,
                        std::size_t max_tokens) override {
        nlohmann::json body;
        body["model"] = model_;
        body["prompt"] = prompt;
        body["temperature"] = temperature;
        body["max_tokens"] = max_tokens;
        httplib::Client client(url_.host, url_.port);
        client.set_read_timeout(120, 0);
        httplib::Headers headers;
        if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
        auto res = client.Post(url_.path.c_str(), headers, body.dump(), "application/json");
        if (!res)
            throw LlmError("endpoint unreachable: " + url_.host + ":" + std::to_string(url_.port));
        if (res->status != 200)
            throw LlmError("endpoint returned status " + std::to_string(res->status));
        nlohmann::json reply;
        try {
            reply = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
            throw LlmError(std::string("endpoint sent malformed JSON: ") + e.what());
        }
        if (!reply.contains("text") || !reply["text"].is_string())
            throw LlmError("endpoint reply missing \"text\"");
        Completion out;
        out.text = reply["text"].get<std::string>();
        if (reply.contains("prompt_tokens")) out.prompt_tokens = reply["prompt_tokens"].get<std::int64_t>();
        if (reply.contains("completion_tokens"))
            out.completion_tokens = reply["completion_tokens"].get<std::int64_t>();
        return out;
    }

    std::string model() const override { return model_; }

private:
    vec::ParsedUrl url_;
    std::string model_;
    std::string api_key_;

    static std::string endpoint_from_env() {
        const char* e = std::getenv("LLM_ENDPOINT");
        if (!e || !*e) throw ValidationError("LLM_ENDPOINT is not set and no endpoint was given");
        return e;
    }

    static std::string api_key_from_env() {
        const char* k = std::getenv("LLM_API_KEY");
        return k ? k : "";
    }
};

// Replays completions from a playbook:
//
//   model: stub-model            # optional
//   completions:
//     default:                   # fallback list, served in order
//       - "first reply"
//       - "second reply"
//     3f9c0d2ab47e11aa:          # 16-hex FNV-1a key of one exact prompt
//       - "reply for that prompt"
//
// Each list entry is served exactly once, in order. Serving past the end of
// a list or a prompt with no entry at all raises LlmError, so a test fails
// loudly when the code under test makes a call the playbook did not script.
class StubLlmClient : public LlmClient {
public:
    explicit StubLlmClient(const YAML::Node& playbook) { load(playbook); }

    static StubLlmClient from_string(const std::string& yaml) {
        return StubLlmClient(YAML::Load(yaml));
    }

    static StubLlmClient from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open playbook: " + path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        return from_string(buffer.str());
    }

    // FNV-1a 64 over the prompt bytes, rendered as 16 lower-case hex digits.
    static std::string prompt_key(const std::string& prompt) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : prompt) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        static const char* hex = "0123456789abcdef";
        std::string out(16, '0');
        for (int i = 15; i >= 0; --i) {
            out[static_cast<std::size_t>(i)] = hex[h & 0xf];
            h >>= 4;
        }
        return out;
    }

    Completion complete(const std::string& prompt, double, std::size_t) override {
        const std::string key = prompt_key(prompt);
        auto it = entries_.find(key);
        if (it == entries_.end()) it = entries_.find("default");
        if (it == entries_.end())
            throw LlmError("no canned completion for prompt " + key);
        Entry& entry = it->second;
        if (entry.next >= entry.completions.size())
            throw LlmError("playbook exhausted for " + it->first + " after " +
                           std::to_string(entry.completions.size()) + " calls");
        const std::string& text = entry.completions[entry.next++];
        served_keys_.push_back(it->first);
        served_prompts_.push_back(prompt);
        Completion out;
        out.text = text;
        out.prompt_tokens = static_cast<std::int64_t>(prompt.size() / 4);
        out.completion_tokens = static_cast<std::int64_t>(text.size() / 4);
        return out;
    }

    std::string model() const override { return model_; }

    std::size_t call_count() const { return served_prompts_.size(); }
    const std::vector<std::string>& served_keys() const { return served_keys_; }
    // Full prompts in call order; tests audit these for content leaks.
    const std::vector<std::string>& served_prompts() const { return served_prompts_; }

private:
    struct Entry {
        std::vector<std::string> completions;
        std::size_t next = 0;
    };

    std::string model_ = "stub-llm";
    std::map<std::string, Entry> entries_;
    std::vector<std::string> served_keys_;
    std::vector<std::string> served_prompts_;

    void load(const YAML::Node& playbook) {
        if (!playbook.IsMap()) throw ValidationError("playbook must be a YAML map");
        if (playbook["model"]) model_ = playbook["model"].as<std::string>();
        const YAML::Node lists = playbook["completions"];
        if (!lists || !lists.IsMap())
            throw ValidationError("playbook needs a \"completions\" map");
        for (const auto& item : lists) {
            const std::string key = item.first.as<std::string>();
            if (!item.second.IsSequence())
                throw ValidationError("playbook entry \"" + key + "\" must be a sequence");
            Entry entry;
            for (const auto& c : item.second) entry.completions.push_back(c.as<std::string>());
            if (entry.completions.empty())
                throw ValidationError("playbook entry \"" + key + "\" is empty");
            entries_[key] = std::move(entry);
        }
    }
};

} // namespace assetgraph::llm
