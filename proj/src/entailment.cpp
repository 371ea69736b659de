#include "toth/entailment.hpp"

#include "toth/error.hpp"
#include "toth/http.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

namespace toth {

double trust_of(EntailmentLabel label, const Calibration& calibration)
{
    calibration.validate();
    switch (label) {
    case EntailmentLabel::Entailment: return calibration.entailment;
    case EntailmentLabel::Neutral: return calibration.neutral;
    case EntailmentLabel::Contradiction: return calibration.contradiction;
    }
    return calibration.neutral;
}

namespace {

constexpr std::array<std::string_view, 3> kNegationWords = {"not", "lies", "false"};

constexpr std::array<std::string_view, 34> kStopwords = {
    "a",    "an",   "the",  "is",   "are",  "was",  "were", "be",   "been", "am",   "to",   "of",
    "and",  "or",   "so",   "that", "this", "it",   "in",   "on",   "at",   "for",  "with", "by",
    "as",   "does", "do",   "did",  "has",  "have", "had",  "about", "then", "if"};

struct Side {
    std::vector<std::string> tokens;
    std::set<std::string> content;
    bool negated = false;
};

Side analyse(std::string_view text)
{
    Side side;
    std::string word;
    auto flush = [&] {
        if (word.empty()) return;
        bool contracted_not = word.size() > 3 && word.ends_with("n't");
        std::string token;
        for (char c : word) {
            if (std::isalnum(static_cast<unsigned char>(c))) token += c;
        }
        word.clear();
        if (token.empty()) return;
        bool negation = contracted_not || std::find(kNegationWords.begin(), kNegationWords.end(),
                                                    token) != kNegationWords.end();
        side.negated = side.negated || negation;
        if (!negation &&
            std::find(kStopwords.begin(), kStopwords.end(), token) == kStopwords.end()) {
            side.content.insert(token);
        }
        side.tokens.push_back(std::move(token));
    };
    for (char raw : text) {
        char c = static_cast<char>(std::tolower(static_cast<unsigned char>(raw)));
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '\'') {
            word += c;
        } else {
            flush();
        }
    }
    flush();
    return side;
}

bool is_subsequence(const std::vector<std::string>& needle, const std::vector<std::string>& hay)
{
    std::size_t k = 0;
    for (const std::string& t : hay) {
        if (k < needle.size() && needle[k] == t) ++k;
    }
    return k == needle.size();
}

} // namespace

EntailmentLabel stub_classify(std::string_view premise, std::string_view hypothesis)
{
    const Side p = analyse(premise);
    const Side h = analyse(hypothesis);
    if (is_subsequence(h.tokens, p.tokens) || is_subsequence(p.tokens, h.tokens)) {
        return EntailmentLabel::Entailment;
    }
    if (p.negated != h.negated) {
        for (const std::string& word : p.content) {
            if (h.content.contains(word)) {
                return EntailmentLabel::Contradiction;
            }
        }
    }
    return EntailmentLabel::Neutral;
}

EntailmentLabel parse_nli_response(std::string_view body)
{
    nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error(ErrorCode::MalformedResponse, "NLI body is not a JSON object");
    }
    if (auto it = j.find("label"); it != j.end() && it->is_string()) {
        if (auto label = parse_label(it->get<std::string>())) {
            return *label;
        }
        throw Error(ErrorCode::MalformedResponse, "unknown NLI label " + it->dump());
    }
    if (auto it = j.find("scores"); it != j.end() && it->is_object() && !it->empty()) {
        std::optional<EntailmentLabel> best;
        double best_score = 0.0;
        for (const auto& [key, value] : it->items()) {
            auto label = parse_label(key);
            if (!label || !value.is_number()) {
                throw Error(ErrorCode::MalformedResponse, "bad NLI score entry '" + key + "'");
            }
            double score = value.get<double>();
            if (!best || score > best_score) {
                best = label;
                best_score = score;
            }
        }
        return *best;
    }
    throw Error(ErrorCode::MalformedResponse, "NLI body has neither 'label' nor 'scores'");
}

EntailmentLabel http_classify(const std::string& premise, const std::string& hypothesis,
                              const HttpNliConfig& config)
{
    nlohmann::json request = {{"premise", premise}, {"hypothesis", hypothesis}};
    http::Response response = http::post_json(config.endpoint, request.dump(), config.timeout);
    if (response.status < 200 || response.status >= 300) {
        throw Error(ErrorCode::MalformedResponse,
                    "NLI endpoint answered HTTP " + std::to_string(response.status));
    }
    return parse_nli_response(response.body);
}

HttpEntailmentProvider::HttpEntailmentProvider(HttpNliConfig config) : config_(std::move(config))
{
    if (config_.endpoint.empty()) {
        throw Error(ErrorCode::ConfigError, "nli.endpoint is not set");
    }
    (void)http::parse_url(config_.endpoint);
}

std::vector<EdgeSpec> infer_edges(const ParsedTrace& trace, EntailmentProvider& provider,
                                  std::size_t window)
{
    if (window == 0) {
        throw Error(ErrorCode::ConfigError, "entailment window must be positive");
    }
    std::vector<EdgeSpec> edges;
    const std::size_t s = trace.steps.size();
    for (std::size_t distance = 1; distance <= window && distance < s; ++distance) {
        for (std::size_t i = 0; i + distance < s; ++i) {
            const std::size_t j = i + distance;
            EntailmentLabel label = provider.classify(trace.steps[i].text, trace.steps[j].text);
            edges.push_back(EdgeSpec{i, j, label});
        }
    }
    return edges;
}

} // namespace toth
