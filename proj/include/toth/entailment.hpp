#pragma once

#include "toth/graph.hpp"
#include "toth/trace.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace toth {

/// Throws InvalidCalibration if `calibration` has a value outside [0,1].
double trust_of(EntailmentLabel label, const Calibration& calibration = {});

/// NLI classifier. Implementations must tolerate concurrent classify calls;
/// the call counter is bumped exactly once per classify, success or failure.
class EntailmentProvider {
public:
    virtual ~EntailmentProvider() = default;

    EntailmentLabel classify(const std::string& premise, const std::string& hypothesis)
    {
        calls_.fetch_add(1, std::memory_order_relaxed);
        return do_classify(premise, hypothesis);
    }

    std::uint64_t call_count() const noexcept { return calls_.load(std::memory_order_relaxed); }

protected:
    virtual EntailmentLabel do_classify(const std::string& premise,
                                        const std::string& hypothesis) = 0;

private:
    std::atomic<std::uint64_t> calls_{0};
};

/// Deterministic lexical classifier used for offline runs.
///
/// Both sides are lowercased and stripped of punctuation. If either token
/// sequence is a subsequence of the other the pair is an entailment. If one
/// side carries a negation marker ("not", "...n't", "lies", "false") the other
/// lacks, and the two share a content word, the pair is a contradiction.
/// Everything else is neutral.
EntailmentLabel stub_classify(std::string_view premise, std::string_view hypothesis);

class StubEntailmentProvider final : public EntailmentProvider {
protected:
    EntailmentLabel do_classify(const std::string& premise, const std::string& hypothesis) override
    {
        return stub_classify(premise, hypothesis);
    }
};

struct HttpNliConfig {
    std::string endpoint; ///< e.g. http://localhost:8000/nli
    std::chrono::milliseconds timeout{10000};
};

/// Maps an NLI server body to a label: {"label": "..."} or the argmax of
/// {"scores": {...}}. Throws MalformedResponse.
EntailmentLabel parse_nli_response(std::string_view body);

/// POSTs {"premise", "hypothesis"} to an NLI server, retrying once on a
/// transport failure or 5xx. Throws ProviderUnavailable or MalformedResponse.
EntailmentLabel http_classify(const std::string& premise, const std::string& hypothesis,
                              const HttpNliConfig& config);

class HttpEntailmentProvider final : public EntailmentProvider {
public:
    explicit HttpEntailmentProvider(HttpNliConfig config);

protected:
    EntailmentLabel do_classify(const std::string& premise, const std::string& hypothesis) override
    {
        return http_classify(premise, hypothesis, config_);
    }

private:
    HttpNliConfig config_;
};

/// Classifies every ordered pair (i, j) with 0 < j - i <= window, premise
/// step i and hypothesis step j, in order of increasing distance then
/// increasing i. Window 1 gives a chain of s-1 edges.
std::vector<EdgeSpec> infer_edges(const ParsedTrace& trace, EntailmentProvider& provider,
                                  std::size_t window = 1);

} // namespace toth
