#pragma once

#include "toth/agents.hpp"
#include "toth/entailment.hpp"
#include "toth/propagation.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace toth {

struct PipelineConfig {
    DecodingConfig decoding;
    Calibration calibration;
    std::size_t window = 1;
    double prior = 0.5;
    LogBase log_base = LogBase::Two;
    std::vector<AgentStyle> tie_order{kAllStyles.begin(), kAllStyles.end()};
    /// Order the agents are launched in; results are always reported in
    /// style order.
    std::vector<AgentStyle> execution_order{kAllStyles.begin(), kAllStyles.end()};
    bool parallel_agents = false;
    /// Rethrow ProviderUnavailable instead of dropping the agent.
    bool fail_fast = false;
};

struct StageTimings {
    double generate_ms = 0.0;
    double nli_ms = 0.0;
    double propagate_ms = 0.0;
};

struct AgentRun {
    AgentStyle style = AgentStyle::Abductive;
    std::optional<ReasoningGraph> graph;
    std::optional<GraphScore> score;
    std::optional<std::string> error;
    std::size_t steps = 0;
    std::uint64_t nli_calls = 0;
    StageTimings timings;
};

struct ToThResult {
    std::string question;
    AnswerKind kind = AnswerKind::Boolean;
    std::optional<Answer> answer; ///< Empty when the terminal step has no answer token.
    std::optional<std::string> answer_error;
    AgentStyle selected_style = AgentStyle::Abductive;
    NodeId terminal = 0;
    std::vector<AgentRun> agents; ///< abductive, deductive, inductive
    std::uint64_t total_nli_calls = 0;
    double total_ms = 0.0;

    const AgentRun& selected() const;
};

/// Runs the three agents, builds and scores their graphs, and answers from
/// the terminal step of the best graph. Failed agents are recorded and left
/// out of selection. Throws NoValidGraph, or ProviderUnavailable when
/// `config.fail_fast` is set.
ToThResult solve(const std::string& question, AnswerKind kind, GenerationProvider& generator,
                 EntailmentProvider& nli, const PipelineConfig& config = {});

/// {question, answer, selected_style, scores, graphs, diagnostics}. Stage
/// timings are included only on request so stub runs stay byte-stable.
nlohmann::json to_json(const ToThResult& result, bool include_timings = false);

} // namespace toth
