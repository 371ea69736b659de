#pragma once

#include "toth/style.hpp"
#include "toth/trace.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace toth {

/// Defaults are the published decoding settings.
struct DecodingConfig {
    double temperature = 0.7;
    int max_tokens = 526;
    std::optional<std::uint64_t> seed;

    void validate() const;
};

class GenerationProvider {
public:
    virtual ~GenerationProvider() = default;

    std::string generate(const std::string& prompt, const DecodingConfig& config)
    {
        calls_.fetch_add(1, std::memory_order_relaxed);
        return do_generate(prompt, config);
    }

    std::uint64_t call_count() const noexcept { return calls_.load(std::memory_order_relaxed); }

protected:
    virtual std::string do_generate(const std::string& prompt, const DecodingConfig& config) = 0;

private:
    std::atomic<std::uint64_t> calls_{0};
};

/// "Q: <question> \nA:" -- the shared input framing for every method.
std::string format_question(std::string_view question);

/// The style instruction block, a blank line, then format_question.
/// Throws EmptyQuestion.
std::string build_prompt(AgentStyle style, std::string_view question);

/// Single generation followed by parse_trace. Throws ProviderUnavailable,
/// EmptyTrace, EmptyQuestion.
ParsedTrace run_agent(AgentStyle style, std::string_view question, GenerationProvider& provider,
                      const DecodingConfig& config);

/// Which fixture slot a prompt addresses, recovered from the prompt text.
struct PromptKey {
    std::string slot;     ///< a style keyword, or "cot" for baseline prompts
    std::string question;
};

/// Throws MalformedRecord when the prompt has no "Q: ... \nA:" frame.
PromptKey classify_prompt(std::string_view prompt);

/// Offline generator. Completions are looked up by (slot, question); a slot
/// holding several completions is indexed by `seed % count`, so sampled
/// baselines stay reproducible. Questions without fixtures get a synthetic
/// numbered trace derived from a stable hash of the question.
///
/// Fixture file: {"items": [{"question": "...", "abductive": "..." | [..],
/// "deductive": ..., "inductive": ..., "cot": ...}]}. A value of null makes
/// that slot fail with ProviderUnavailable; "" returns an empty completion.
class StubGenerationProvider final : public GenerationProvider {
public:
    StubGenerationProvider() = default;
    explicit StubGenerationProvider(const nlohmann::json& fixtures);


    void add(std::string slot, std::string question, std::vector<std::string> completions);
    void add_failure(std::string slot, std::string question);

protected:
    std::string do_generate(const std::string& prompt, const DecodingConfig& config) override;

private:
    struct Entry {
        std::vector<std::string> completions;
        bool fail = false;
    };
    std::map<std::pair<std::string, std::string>, Entry> table_;
};

/// Reads a fixture file for StubGenerationProvider. Throws ConfigError or
/// MalformedRecord.
nlohmann::json read_fixture_file(const std::string& path);

/// The synthetic completion used for questions without fixtures.
std::string synthetic_completion(std::string_view slot, std::string_view question,
                                 std::uint64_t seed);

struct HttpLlmConfig {
    std::string endpoint;
    std::string model;
    std::chrono::milliseconds timeout{60000};
};

/// {model, messages: [{role: "user", content}], temperature, max_tokens[, seed]}
nlohmann::json chat_request(const std::string& model, const std::string& prompt,
                            const DecodingConfig& config);

/// Reads choices[0].message.content (or choices[0].text). Throws
/// MalformedResponse.
std::string parse_chat_response(std::string_view body);

class HttpGenerationProvider final : public GenerationProvider {
public:
    explicit HttpGenerationProvider(HttpLlmConfig config);

protected:
    std::string do_generate(const std::string& prompt, const DecodingConfig& config) override;

private:
    HttpLlmConfig config_;
};

} // namespace toth
