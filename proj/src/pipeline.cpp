#include "toth/pipeline.hpp"

#include "toth/error.hpp"

#include <chrono>
#include <future>

namespace toth {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

AgentRun run_one(AgentStyle style, const std::string& question, GenerationProvider& generator,
                 EntailmentProvider& nli, const PipelineConfig& config)
{
    AgentRun run;
    run.style = style;
    try {
        auto t0 = Clock::now();
        ParsedTrace trace = run_agent(style, question, generator, config.decoding);
        run.timings.generate_ms = elapsed_ms(t0);
        run.steps = trace.steps.size();

        t0 = Clock::now();
        std::vector<EdgeSpec> edges = infer_edges(trace, nli, config.window);
        run.nli_calls = edges.size();
        run.timings.nli_ms = elapsed_ms(t0);

        t0 = Clock::now();
        ReasoningGraph graph =
            build_graph(std::move(trace.steps), edges, style, config.calibration);
        apply_beliefs(graph, propagate(graph, config.prior));
        run.score = graph_score(graph, config.log_base);
        run.graph = std::move(graph);
        run.timings.propagate_ms = elapsed_ms(t0);
    } catch (const Error& ex) {
        if (config.fail_fast && ex.code() == ErrorCode::ProviderUnavailable) {
            throw;
        }
        run.error = ex.what();
        run.score.reset();
        run.graph.reset();
    }
    return run;
}

} // namespace

const AgentRun& ToThResult::selected() const
{
    return agents.at(static_cast<std::size_t>(selected_style));
}

ToThResult solve(const std::string& question, AnswerKind kind, GenerationProvider& generator,
                 EntailmentProvider& nli, const PipelineConfig& config)
{
    const auto start = Clock::now();
    if (question.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw Error(ErrorCode::EmptyQuestion, "question is blank");
    }
    config.decoding.validate();
    config.calibration.validate();

    ToThResult result;
    result.question = question;
    result.kind = kind;
    result.agents.resize(kAllStyles.size());

    const std::uint64_t calls_before = nli.call_count();
    if (config.parallel_agents) {
        std::vector<std::future<AgentRun>> pending;
        for (AgentStyle style : config.execution_order) {
            pending.push_back(std::async(std::launch::async, run_one, style, std::cref(question),
                                         std::ref(generator), std::ref(nli), std::cref(config)));
        }
        for (auto& f : pending) {
            AgentRun run = f.get();
            result.agents[static_cast<std::size_t>(run.style)] = std::move(run);
        }
    } else {
        for (AgentStyle style : config.execution_order) {
            AgentRun run = run_one(style, question, generator, nli, config);
            result.agents[static_cast<std::size_t>(style)] = std::move(run);
        }
    }
    result.total_nli_calls = nli.call_count() - calls_before;

    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < result.agents.size(); ++i) {
        result.agents[i].style = kAllStyles[i];
        candidates.push_back(Candidate{kAllStyles[i], result.agents[i].score});
    }
    std::size_t best = 0;
    try {
        best = select_best(candidates, config.tie_order);
    } catch (const Error& ex) {
        if (ex.code() != ErrorCode::NoValidGraph) throw;
        std::string detail = "no agent produced a scoreable graph";
        for (const AgentRun& run : result.agents) {
            if (run.error) detail += "\n  " + std::string(style_keyword(run.style)) + ": " + *run.error;
        }
        throw Error(ErrorCode::NoValidGraph, detail);
    }
    result.selected_style = kAllStyles[best];

    const ReasoningGraph& graph = *result.agents[best].graph;
    result.terminal = terminal_node(graph);
    try {
        result.answer = extract_answer(graph.nodes[result.terminal].text, kind);
    } catch (const Error& ex) {
        result.answer_error = ex.what();
    }
    result.total_ms = elapsed_ms(start);
    return result;
}

nlohmann::json to_json(const ToThResult& result, bool include_timings)
{
    nlohmann::json out;
    out["question"] = result.question;
    out["kind"] = std::string(to_string(result.kind));
    out["answer"] = result.answer ? nlohmann::json(result.answer->value) : nlohmann::json(nullptr);
    out["selected_style"] = std::string(style_keyword(result.selected_style));

    nlohmann::json scores = nlohmann::json::array();
    nlohmann::json graphs = nlohmann::json::array();
    nlohmann::json agents = nlohmann::json::array();
    for (const AgentRun& run : result.agents) {
        const std::string style(style_keyword(run.style));
        if (run.score && run.graph) {
            scores.push_back({{"style", style},
                              {"mu", run.score->mu},
                              {"entropy", run.score->entropy},
                              {"score", run.score->score}});
            nlohmann::json g = to_json(*run.graph);
            g["mu"] = run.score->mu;
            g["entropy"] = run.score->entropy;
            g["score"] = run.score->score;
            graphs.push_back(std::move(g));
        }
        nlohmann::json a = {{"style", style},
                            {"steps", run.steps},
                            {"nli_calls", run.nli_calls},
                            {"error", run.error ? nlohmann::json(*run.error) : nlohmann::json(nullptr)}};
        if (include_timings) {
            a["timings_ms"] = {{"generate", run.timings.generate_ms},
                               {"nli", run.timings.nli_ms},
                               {"propagate", run.timings.propagate_ms}};
        }
        agents.push_back(std::move(a));
    }
    out["scores"] = std::move(scores);
    out["graphs"] = std::move(graphs);

    nlohmann::json diagnostics;
    diagnostics["agents"] = std::move(agents);
    diagnostics["total_nli_calls"] = result.total_nli_calls;
    diagnostics["terminal_node"] = result.terminal;
    diagnostics["answer_error"] =
        result.answer_error ? nlohmann::json(*result.answer_error) : nlohmann::json(nullptr);
    if (include_timings) {
        diagnostics["total_ms"] = result.total_ms;
    }
    out["diagnostics"] = std::move(diagnostics);
    return out;
}

} // namespace toth
