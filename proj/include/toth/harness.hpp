#pragma once

#include "toth/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <span>
#include <string>
#include <vector>

namespace toth {

struct Task {
    std::string id;
    std::string question;
    Answer gold;
    AnswerKind kind = AnswerKind::Boolean;
    /// Keys from {statements, depth, length}.
    std::map<std::string, int> difficulty;

    /// "3" for statements=3, "d0/l3" for depth=0,length=3, "all" when untagged.
    std::string stratum() const;
};

struct Dataset {
    std::vector<Task> tasks;
    std::vector<std::string> warnings;
};

/// One JSON object per line: {id, question, answer, kind, difficulty}.
/// Blank lines are skipped. Every bad line is collected and reported
/// together (with its line number) in a single MalformedRecord/UnknownKind.
/// An unreadable file is a ConfigError; an empty one loads with a warning.
Dataset load_dataset(const std::string& path);
Dataset parse_dataset(std::istream& in);

/// Most frequent answer; ties go to the answer seen first. Throws EmptyVote.
Answer majority_vote(std::span<const Answer> answers);

enum class Method { ToTh, CotGreedy, SelfConsistency };

std::string_view to_string(Method method) noexcept;
/// Throws ConfigError.
Method parse_method(std::string_view name);

struct HarnessConfig {
    PipelineConfig pipeline;
    DecodingConfig cot_decoding{0.0, 526, std::nullopt};
    DecodingConfig sc_decoding{0.7, 526, std::nullopt};
    int sc_samples = 20;
    std::size_t concurrency = 1;
};

/// "Q: <question> \nA: Let's think step by step."
std::string cot_prompt(std::string_view question);

struct TaskOutcome {
    std::string id;
    std::string stratum;
    Answer gold;
    std::optional<Answer> predicted;
    std::optional<AgentStyle> selected_style;
    std::optional<std::string> error;
    bool correct = false;
};

struct StratumTally {
    std::size_t correct = 0;
    std::size_t total = 0;

    double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

struct Report {
    Method method = Method::ToTh;
    std::vector<TaskOutcome> outcomes; ///< Dataset order.
    std::map<std::string, StratumTally> per_difficulty;
    std::map<std::string, std::size_t> selection_counts; ///< ToTh only.
    nlohmann::json metadata = nlohmann::json::object();
    std::size_t correct = 0;

    std::size_t n_tasks() const { return outcomes.size(); }
    double overall_accuracy() const
    {
        return outcomes.empty() ? 0.0 : static_cast<double>(correct) / outcomes.size();
    }
};

/// Evaluates `method` over `tasks`. At most `config.concurrency` tasks are in
/// flight; the report is assembled in dataset order regardless. Per-task
/// failures count as wrong answers, except ProviderUnavailable from a
/// baseline, which aborts the run.
Report run_method(Method method, std::span<const Task> tasks, GenerationProvider& generator,
                  EntailmentProvider& nli, const HarnessConfig& config = {});

/// Tallies outcomes into a report; exposed so counting can be tested alone.
Report tally(Method method, std::vector<TaskOutcome> outcomes);

nlohmann::json to_json(const Report& report);
/// Rows are methods, columns are difficulty strata then "overall".
std::string render_table(std::span<const Report> reports);
std::string render_csv(std::span<const Report> reports);

} // namespace toth
