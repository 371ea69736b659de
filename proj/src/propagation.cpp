#include "toth/propagation.hpp"

#include "toth/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace toth {

namespace {

void require_probability(double value, const char* what)
{
    if (!(value >= 0.0 && value <= 1.0)) {
        throw Error(ErrorCode::InvalidProbability,
                    std::string(what) + " " + std::to_string(value) + " outside [0,1]");
    }
}

} // namespace

UpdateResult bayes_update_checked(double p, double theta)
{
    require_probability(p, "belief");
    require_probability(theta, "trust");
    const double agree = p * theta;
    const double denominator = agree + (1.0 - p) * (1.0 - theta);
    if (denominator == 0.0) {
        return UpdateResult{p, true};
    }
    return UpdateResult{agree / denominator, false};
}

BeliefState propagate(const ReasoningGraph& graph, double prior)
{
    const std::vector<NodeId> order = topological_order(graph);
    return propagate(graph, order, prior);
}

BeliefState propagate(const ReasoningGraph& graph, std::span<const NodeId> order, double prior)
{
    require_probability(prior, "prior");
    const std::size_t n = graph.nodes.size();
    std::vector<std::size_t> position(n, n);
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (order[i] >= n || position[order[i]] != n) {
            throw Error(ErrorCode::CycleDetected, "visit order is not a permutation of the nodes");
        }
        position[order[i]] = i;
    }
    if (order.size() != n) {
        throw Error(ErrorCode::CycleDetected, "visit order is not a permutation of the nodes");
    }
    for (const Edge& e : graph.edges) {
        if (e.source >= n || e.target >= n) {
            throw Error(ErrorCode::DanglingEdge, "edge endpoint out of range");
        }
        if (position[e.source] >= position[e.target]) {
            throw Error(ErrorCode::CycleDetected, "edge " + std::to_string(e.source) + "->" +
                                                      std::to_string(e.target) +
                                                      " points backwards in the visit order");
        }
    }
    for (const Edge& e : graph.edges) {
        if (!e.trust) {
            throw Error(ErrorCode::MissingTrust, "edge " + std::to_string(e.source) + "->" +
                                                     std::to_string(e.target) + " has no trust");
        }
    }
    const auto parents = incoming_edges(graph);
    BeliefState state;
    state.prior = prior;
    state.beliefs.assign(graph.nodes.size(), prior);

    for (NodeId v : order) {
        const auto& in = parents[v];
        if (in.empty()) {
            continue;
        }
        double sum = 0.0;
        for (std::size_t edge_index : in) {
            const Edge& e = graph.edges[edge_index];
            UpdateResult r = bayes_update_checked(state.beliefs[e.source], *e.trust);
            state.degenerate = state.degenerate || r.degenerate;
            sum += r.belief;
        }
        state.beliefs[v] = sum / static_cast<double>(in.size());
    }
    return state;
}

void apply_beliefs(ReasoningGraph& graph, const BeliefState& state)
{
    if (state.beliefs.size() != graph.nodes.size()) {
        throw Error(ErrorCode::MalformedRecord, "belief count does not match node count");
    }
    graph.beliefs = state.beliefs;
    graph.degenerate_update = state.degenerate;
}

double graph_entropy(std::span<const double> beliefs, LogBase base)
{
    if (beliefs.empty()) {
        throw Error(ErrorCode::EmptyGraph, "entropy of an empty belief set");
    }
    auto plogp = [base](double x) {
        if (x <= 0.0) return 0.0;
        return x * (base == LogBase::Two ? std::log2(x) : std::log(x));
    };
    double sum = 0.0;
    for (double p : beliefs) {
        require_probability(p, "belief");
        sum += plogp(p) + plogp(1.0 - p);
    }
    // -0.0 when every node is certain.
    return -sum / static_cast<double>(beliefs.size()) + 0.0;
}

GraphScore score_beliefs(std::span<const double> beliefs, LogBase base)
{
    if (beliefs.empty()) {
        throw Error(ErrorCode::EmptyGraph, "score of an empty graph");
    }
    GraphScore s;
    double total = 0.0;
    for (double p : beliefs) total += p;
    s.mu = total / static_cast<double>(beliefs.size());
    s.entropy = graph_entropy(beliefs, base);
    s.score = s.mu - s.entropy;
    return s;
}

GraphScore graph_score(const ReasoningGraph& graph, LogBase base)
{
    if (graph.nodes.empty()) {
        throw Error(ErrorCode::EmptyGraph, "score of an empty graph");
    }
    if (!graph.beliefs) {
        throw Error(ErrorCode::MissingTrust, "graph has not been propagated");
    }
    return score_beliefs(*graph.beliefs, base);
}

std::size_t select_best(std::span<const Candidate> candidates, std::span<const AgentStyle> tie_order)
{
    auto rank = [&](AgentStyle style) {
        auto it = std::find(tie_order.begin(), tie_order.end(), style);
        return static_cast<std::size_t>(it - tie_order.begin());
    };
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const Candidate& c = candidates[i];
        if (!c.score || std::isnan(c.score->score)) {
            continue;
        }
        if (!best) {
            best = i;
            continue;
        }
        const Candidate& b = candidates[*best];
        if (c.score->score > b.score->score ||
            (c.score->score == b.score->score && rank(c.style) < rank(b.style))) {
            best = i;
        }
    }
    if (!best) {
        throw Error(ErrorCode::NoValidGraph, "no agent produced a scoreable graph");
    }
    return *best;
}

} // namespace toth
