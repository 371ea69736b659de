#include "toth/agents.hpp"

#include "toth/error.hpp"
#include "toth/http.hpp"

#include <array>
#include <cctype>
#include <fstream>

namespace toth {

void DecodingConfig::validate() const
{
    if (!(temperature >= 0.0)) {
        throw Error(ErrorCode::ConfigError, "temperature must be non-negative");
    }
    if (max_tokens < 1) {
        throw Error(ErrorCode::ConfigError, "max_tokens must be at least 1");
    }
}

std::string format_question(std::string_view question)
{
    std::string out = "Q: ";
    out += question;
    out += " \nA:";
    return out;
}

namespace {

bool blank(std::string_view s)
{
    for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

} // namespace

std::string build_prompt(AgentStyle style, std::string_view question)
{
    if (blank(question)) {
        throw Error(ErrorCode::EmptyQuestion, "question is blank");
    }
    const std::string keyword(style_keyword(style));
    std::string prompt;
    prompt += "Use the " + keyword + " reasoning style to answer the following question.\n";
    prompt += "Follow these instructions carefully:\n";
    prompt += "- Break the problem into clear, numbered reasoning steps using " + keyword + ".\n";
    prompt += "- Reference any known principles, patterns, or assumptions involved.\n";
    prompt += "- Arrive at a final answer that directly responds to the question.\n";
    prompt += "\n";
    prompt += format_question(question);
    return prompt;
}

ParsedTrace run_agent(AgentStyle style, std::string_view question, GenerationProvider& provider,
                      const DecodingConfig& config)
{
    config.validate();
    const std::string prompt = build_prompt(style, question);
    return parse_trace(provider.generate(prompt, config));
}

PromptKey classify_prompt(std::string_view prompt)
{
    PromptKey key{"cot", ""};
    constexpr std::string_view lead = "Use the ";
    constexpr std::string_view tail = " reasoning style";
    if (prompt.rfind(lead, 0) == 0) {
        std::size_t end = prompt.find(tail);
        if (end != std::string_view::npos) {
            key.slot = std::string(prompt.substr(lead.size(), end - lead.size()));
        }
    }
    std::size_t q = prompt.rfind("Q: ");
    std::size_t a = prompt.rfind(" \nA:");
    if (q == std::string_view::npos || a == std::string_view::npos || a < q) {
        throw Error(ErrorCode::MalformedRecord, "prompt lacks a 'Q: ... \\nA:' frame");
    }
    key.question = std::string(prompt.substr(q + 3, a - q - 3));
    return key;
}

StubGenerationProvider::StubGenerationProvider(const nlohmann::json& fixtures)
{
    try {
        for (const auto& item : fixtures.at("items")) {
            const std::string question = item.at("question").get<std::string>();
            for (const auto& [slot, value] : item.items()) {
                if (slot == "question") continue;
                if (value.is_null()) {
                    add_failure(slot, question);
                } else if (value.is_string()) {
                    add(slot, question, {value.get<std::string>()});
                } else {
                    add(slot, question, value.get<std::vector<std::string>>());
                }
            }
        }
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::MalformedRecord, std::string("stub fixtures: ") + ex.what());
    }
}

nlohmann::json read_fixture_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ConfigError, "cannot open stub fixtures '" + path + "'");
    }
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) {
        throw Error(ErrorCode::MalformedRecord, "stub fixtures '" + path + "' are not JSON");
    }
    return j;
}

void StubGenerationProvider::add(std::string slot, std::string question,
                                 std::vector<std::string> completions)
{
    if (completions.empty()) {
        throw Error(ErrorCode::MalformedRecord, "fixture slot '" + slot + "' has no completions");
    }
    table_[{std::move(slot), std::move(question)}] = Entry{std::move(completions), false};
}

void StubGenerationProvider::add_failure(std::string slot, std::string question)
{
    table_[{std::move(slot), std::move(question)}] = Entry{{}, true};
}

std::string StubGenerationProvider::do_generate(const std::string& prompt,
                                                const DecodingConfig& config)
{
    const PromptKey key = classify_prompt(prompt);
    const std::uint64_t seed = config.seed.value_or(0);
    auto it = table_.find({key.slot, key.question});
    if (it == table_.end()) {
        return synthetic_completion(key.slot, key.question, seed);
    }
    if (it->second.fail) {
        throw Error(ErrorCode::ProviderUnavailable,
                    "stub fixture marks '" + key.slot + "' as unavailable");
    }
    const auto& completions = it->second.completions;
    return completions[seed % completions.size()];
}

namespace {

std::uint64_t fnv1a(std::string_view text, std::uint64_t hash = 1469598103934665603ULL)
{
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::optional<long long> sum_of_integers(std::string_view text)
{
    std::optional<long long> sum;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        long long value = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            value = value * 10 + (text[i] - '0');
            ++i;
        }
        sum = sum.value_or(0) + value;
    }
    return sum;
}

} // namespace

std::string synthetic_completion(std::string_view slot, std::string_view question,
                                 std::uint64_t seed)
{
    static constexpr std::array<std::string_view, 4> kFillers = {
        "The key facts are listed in the order they are given.",
        "Each claim depends on the one stated before it.",
        "No statement conflicts with the facts given so far.",
        "The same pattern holds for every case checked.",
    };
    const std::uint64_t h = fnv1a(question, fnv1a(slot)) ^ (seed * 0x9E3779B97F4A7C15ULL);
    std::string answer;
    if (auto sum = sum_of_integers(question)) {
        answer = std::to_string(*sum + static_cast<long long>(seed % 2));
    } else {
        answer = ((h >> 7) & 1U) != 0 ? "yes" : "no";
    }
    const std::size_t steps = 2 + (h % 4);
    std::string out = "1. Restating the question: " + std::string(question) + "\n";
    for (std::size_t k = 2; k < steps; ++k) {
        out += std::to_string(k) + ". " + std::string(kFillers[(h >> (3 * k)) % kFillers.size()]) +
               "\n";
    }
    out += std::to_string(steps) + ". Using " + std::string(slot) +
           " reasoning the conclusion is " + answer + ". Final answer: " + answer;
    return out;
}

nlohmann::json chat_request(const std::string& model, const std::string& prompt,
                            const DecodingConfig& config)
{
    nlohmann::json body = {
        {"model", model},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
        {"temperature", config.temperature},
        {"max_tokens", config.max_tokens},
    };
    if (config.seed) {
        body["seed"] = *config.seed;
    }
    return body;
}

std::string parse_chat_response(std::string_view body)
{
    nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded()) {
        throw Error(ErrorCode::MalformedResponse, "completion body is not JSON");
    }
    try {
        const auto& choice = j.at("choices").at(0);
        if (choice.contains("message")) {
            return choice["message"].at("content").get<std::string>();
        }
        return choice.at("text").get<std::string>();
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::MalformedResponse, std::string("completion body: ") + ex.what());
    }
}

HttpGenerationProvider::HttpGenerationProvider(HttpLlmConfig config) : config_(std::move(config))
{
    if (config_.endpoint.empty()) {
        throw Error(ErrorCode::ConfigError, "llm.endpoint is not set");
    }
    (void)http::parse_url(config_.endpoint);
}

std::string HttpGenerationProvider::do_generate(const std::string& prompt,
                                                const DecodingConfig& config)
{
    const nlohmann::json request = chat_request(config_.model, prompt, config);
    http::Response response = http::post_json(config_.endpoint, request.dump(), config_.timeout);
    if (response.status < 200 || response.status >= 300) {
        throw Error(ErrorCode::ProviderUnavailable,
                    "LLM endpoint answered HTTP " + std::to_string(response.status));
    }
    return parse_chat_response(response.body);
}

} // namespace toth
