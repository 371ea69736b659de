#pragma once

#include "toth/style.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace toth {

using NodeId = std::size_t;

enum class EntailmentLabel { Entailment, Neutral, Contradiction };

std::string_view to_string(EntailmentLabel label) noexcept;
/// Case-insensitive; accepts the MNLI spellings ("ENTAILMENT", ...).
std::optional<EntailmentLabel> parse_label(std::string_view text) noexcept;

/// Trust-to-label calibration. Defaults are the published constants.
struct Calibration {
    double entailment = 0.95;
    double neutral = 0.60;
    double contradiction = 0.10;

    /// Throws InvalidCalibration unless every value lies in [0,1].
    void validate() const;
};

struct ReasoningStep {
    NodeId index = 0;
    std::string text;
    bool is_final = false;

    bool operator==(const ReasoningStep&) const = default;
};

struct Edge {
    NodeId source = 0;
    NodeId target = 0;
    EntailmentLabel label = EntailmentLabel::Neutral;
    std::optional<double> trust; ///< Absent only for graphs loaded from foreign JSON.

    bool operator==(const Edge&) const = default;
};

/// Unlabelled-trust edge request handed to build_graph.
struct EdgeSpec {
    NodeId source = 0;
    NodeId target = 0;
    EntailmentLabel label = EntailmentLabel::Neutral;
};

/// A DAG over one agent's steps. Nodes are identified by their trace index.
struct ReasoningGraph {
    std::vector<ReasoningStep> nodes;
    std::vector<Edge> edges;
    std::optional<std::vector<double>> beliefs; ///< Filled by propagation.
    AgentStyle agent_style = AgentStyle::Abductive;
    bool degenerate_update = false; ///< Set when a zero-denominator update was hit.

    std::size_t size() const noexcept { return nodes.size(); }
};

/// Validates the steps and edges and attaches trust from `calibration`.
/// Throws EmptyTrace, DanglingEdge or CycleDetected.
ReasoningGraph build_graph(std::vector<ReasoningStep> steps, const std::vector<EdgeSpec>& edges,
                           AgentStyle style = AgentStyle::Abductive,
                           const Calibration& calibration = {});

/// Kahn's algorithm with a min-heap, so among ready nodes the smallest index
/// goes first. Throws CycleDetected.
std::vector<NodeId> topological_order(const ReasoningGraph& graph);

/// Structural checks shared by build_graph and deserialization.
void validate_structure(const ReasoningGraph& graph);

/// Parent lists indexed by target node, in edge insertion order.
std::vector<std::vector<std::size_t>> incoming_edges(const ReasoningGraph& graph);

/// The is_final sink if there is one, otherwise the sink with the largest
/// step index. Throws EmptyTrace on an empty graph.
NodeId terminal_node(const ReasoningGraph& graph);

nlohmann::json to_json(const ReasoningGraph& graph);
/// Throws MalformedRecord on schema violations, plus the structural errors.
ReasoningGraph graph_from_json(const nlohmann::json& j);

/// Graphviz rendering: node labels "i: text (P=0.xx)", edge labels "label/θ".
std::string to_dot(const ReasoningGraph& graph);

} // namespace toth
