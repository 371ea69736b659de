#pragma once

#include "toth/graph.hpp"

#include <optional>
#include <span>
#include <vector>

namespace toth {

struct UpdateResult {
    double belief = 0.5;
    bool degenerate = false; ///< Denominator was zero; belief is the input p.
};

/// f(p, θ) = pθ / (pθ + (1-p)(1-θ)). Throws InvalidProbability when either
/// argument leaves [0,1].
UpdateResult bayes_update_checked(double p, double theta);

inline double bayes_update(double p, double theta) { return bayes_update_checked(p, theta).belief; }

struct BeliefState {
    std::vector<double> beliefs;
    double prior = 0.5;
    bool degenerate = false;
};

/// Visits nodes in topological order. Roots keep `prior`; any other node
/// takes the arithmetic mean of f(P(parent), θ) over its incoming edges.
/// Throws CycleDetected, MissingTrust, InvalidProbability.
BeliefState propagate(const ReasoningGraph& graph, double prior = 0.5);

/// Same, visiting nodes in a caller-supplied order. Throws CycleDetected if
/// `order` is not a topological order of the graph.
BeliefState propagate(const ReasoningGraph& graph, std::span<const NodeId> order, double prior);

/// Writes the beliefs (and degenerate flag) of `propagate` into the graph.
void apply_beliefs(ReasoningGraph& graph, const BeliefState& state);

enum class LogBase { Two, Natural };

/// -(1/|V|) Σ [p log p + (1-p) log(1-p)] with 0 log 0 = 0. Throws EmptyGraph.
double graph_entropy(std::span<const double> beliefs, LogBase base = LogBase::Two);

struct GraphScore {
    double mu = 0.0;
    double entropy = 0.0;
    double score = 0.0;
};

/// Throws EmptyGraph, or MissingTrust when the graph has no beliefs yet.
GraphScore graph_score(const ReasoningGraph& graph, LogBase base = LogBase::Two);
GraphScore score_beliefs(std::span<const double> beliefs, LogBase base = LogBase::Two);

struct Candidate {
    AgentStyle style = AgentStyle::Abductive;
    std::optional<GraphScore> score; ///< Empty for agents that failed.
};

/// Index of the highest-scoring candidate. Equal scores go to whichever style
/// appears first in `tie_order`. Throws NoValidGraph.
std::size_t select_best(std::span<const Candidate> candidates,
                        std::span<const AgentStyle> tie_order = kAllStyles);

} // namespace toth
