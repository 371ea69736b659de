#include "toth/graph.hpp"

#include "toth/entailment.hpp"
#include "toth/error.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <functional>
#include <queue>
#include <sstream>

namespace toth {

std::string_view to_string(EntailmentLabel label) noexcept
{
    switch (label) {
    case EntailmentLabel::Entailment: return "entailment";
    case EntailmentLabel::Neutral: return "neutral";
    case EntailmentLabel::Contradiction: return "contradiction";
    }
    return "neutral";
}

std::optional<EntailmentLabel> parse_label(std::string_view text) noexcept
{
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "entailment") return EntailmentLabel::Entailment;
    if (lower == "neutral") return EntailmentLabel::Neutral;
    if (lower == "contradiction") return EntailmentLabel::Contradiction;
    return std::nullopt;
}

void Calibration::validate() const
{
    for (double value : {entailment, neutral, contradiction}) {
        if (!(value >= 0.0 && value <= 1.0)) {
            throw Error(ErrorCode::InvalidCalibration,
                        "trust value " + std::to_string(value) + " outside [0,1]");
        }
    }
}

void validate_structure(const ReasoningGraph& graph)
{
    if (graph.nodes.empty()) {
        throw Error(ErrorCode::EmptyTrace, "graph has no steps");
    }
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        if (graph.nodes[i].index != i) {
            throw Error(ErrorCode::MalformedRecord,
                        "step indices must be contiguous from 0 (position " + std::to_string(i) +
                            " has index " + std::to_string(graph.nodes[i].index) + ")");
        }
        if (graph.nodes[i].text.find_first_not_of(" \t\r\n") == std::string::npos) {
            throw Error(ErrorCode::MalformedRecord, "step " + std::to_string(i) + " is blank");
        }
    }
    const std::size_t n = graph.nodes.size();
    for (const Edge& e : graph.edges) {
        if (e.source >= n || e.target >= n) {
            throw Error(ErrorCode::DanglingEdge, "edge " + std::to_string(e.source) + "->" +
                                                     std::to_string(e.target) + " leaves the " +
                                                     std::to_string(n) + "-node graph");
        }
        if (e.source == e.target) {
            throw Error(ErrorCode::CycleDetected,
                        "self-loop on node " + std::to_string(e.source));
        }
    }
    if (graph.beliefs && graph.beliefs->size() != n) {
        throw Error(ErrorCode::MalformedRecord, "belief count does not match node count");
    }
    // Throws on cycles.
    (void)topological_order(graph);
}

ReasoningGraph build_graph(std::vector<ReasoningStep> steps, const std::vector<EdgeSpec>& edges,
                           AgentStyle style, const Calibration& calibration)
{
    calibration.validate();
    ReasoningGraph graph;
    graph.nodes = std::move(steps);
    graph.agent_style = style;
    graph.edges.reserve(edges.size());
    for (const EdgeSpec& spec : edges) {
        graph.edges.push_back(
            Edge{spec.source, spec.target, spec.label, trust_of(spec.label, calibration)});
    }
    validate_structure(graph);
    return graph;
}

std::vector<std::vector<std::size_t>> incoming_edges(const ReasoningGraph& graph)
{
    std::vector<std::vector<std::size_t>> incoming(graph.nodes.size());
    for (std::size_t i = 0; i < graph.edges.size(); ++i) {
        incoming.at(graph.edges[i].target).push_back(i);
    }
    return incoming;
}

std::vector<NodeId> topological_order(const ReasoningGraph& graph)
{
    const std::size_t n = graph.nodes.size();
    std::vector<std::vector<NodeId>> successors(n);
    std::vector<std::size_t> in_degree(n, 0);
    for (const Edge& e : graph.edges) {
        if (e.source >= n || e.target >= n) {
            throw Error(ErrorCode::DanglingEdge, "edge endpoint out of range");
        }
        successors[e.source].push_back(e.target);
        ++in_degree[e.target];
    }

    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
    for (NodeId v = 0; v < n; ++v) {
        if (in_degree[v] == 0) {
            ready.push(v);
        }
    }

    std::vector<NodeId> order;
    order.reserve(n);
    while (!ready.empty()) {
        NodeId v = ready.top();
        ready.pop();
        order.push_back(v);
        for (NodeId w : successors[v]) {
            if (--in_degree[w] == 0) {
                ready.push(w);
            }
        }
    }
    if (order.size() != n) {
        throw Error(ErrorCode::CycleDetected,
                    std::to_string(n - order.size()) + " node(s) lie on or behind a cycle");
    }
    return order;
}

NodeId terminal_node(const ReasoningGraph& graph)
{
    if (graph.nodes.empty()) {
        throw Error(ErrorCode::EmptyTrace, "graph has no steps");
    }
    std::vector<bool> has_out(graph.nodes.size(), false);
    for (const Edge& e : graph.edges) {
        has_out.at(e.source) = true;
    }
    std::optional<NodeId> last_sink;
    std::optional<NodeId> final_sink;
    for (NodeId v = 0; v < graph.nodes.size(); ++v) {
        if (has_out[v]) {
            continue;
        }
        last_sink = v;
        if (graph.nodes[v].is_final) {
            final_sink = v;
        }
    }
    if (final_sink) {
        return *final_sink;
    }
    if (!last_sink) {
        throw Error(ErrorCode::CycleDetected, "graph has no sink");
    }
    return *last_sink;
}

nlohmann::json to_json(const ReasoningGraph& graph)
{
    nlohmann::json nodes = nlohmann::json::array();
    for (const ReasoningStep& s : graph.nodes) {
        nodes.push_back({{"index", s.index}, {"text", s.text}, {"is_final", s.is_final}});
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const Edge& e : graph.edges) {
        nlohmann::json je = {{"source", e.source},
                             {"target", e.target},
                             {"label", std::string(to_string(e.label))}};
        je["trust"] = e.trust ? nlohmann::json(*e.trust) : nlohmann::json(nullptr);
        edges.push_back(std::move(je));
    }
    nlohmann::json out;
    out["nodes"] = std::move(nodes);
    out["edges"] = std::move(edges);
    out["beliefs"] = graph.beliefs ? nlohmann::json(*graph.beliefs) : nlohmann::json::array();
    out["agent_style"] = std::string(style_keyword(graph.agent_style));
    if (graph.degenerate_update) {
        out["degenerate_update"] = true;
    }
    return out;
}

ReasoningGraph graph_from_json(const nlohmann::json& j)
{
    ReasoningGraph graph;
    try {
        for (const auto& jn : j.at("nodes")) {
            graph.nodes.push_back(ReasoningStep{jn.at("index").get<NodeId>(),
                                                jn.at("text").get<std::string>(),
                                                jn.value("is_final", false)});
        }
        for (const auto& je : j.at("edges")) {
            auto label = parse_label(je.at("label").get<std::string>());
            if (!label) {
                throw Error(ErrorCode::MalformedRecord,
                            "unknown edge label " + je.at("label").dump());
            }
            Edge e{je.at("source").get<NodeId>(), je.at("target").get<NodeId>(), *label,
                   std::nullopt};
            if (je.contains("trust") && !je["trust"].is_null()) {
                e.trust = je["trust"].get<double>();
            }
            graph.edges.push_back(e);
        }
        if (j.contains("beliefs") && !j["beliefs"].empty()) {
            graph.beliefs = j["beliefs"].get<std::vector<double>>();
        }
        auto style = parse_style(j.value("agent_style", std::string("abductive")));
        if (!style) {
            throw Error(ErrorCode::MalformedRecord, "unknown agent_style");
        }
        graph.agent_style = *style;
        graph.degenerate_update = j.value("degenerate_update", false);
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::MalformedRecord, std::string("graph JSON: ") + ex.what());
    }
    validate_structure(graph);
    return graph;
}

namespace {

std::string dot_escape(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': break;
        default: out += c;
        }
    }
    return out;
}

std::string fixed(double value, int digits)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    return buf;
}

} // namespace

std::string to_dot(const ReasoningGraph& graph)
{
    std::ostringstream os;
    os << "digraph " << style_keyword(graph.agent_style) << " {\n";
    os << "  rankdir=TB;\n  node [shape=box];\n";
    for (const ReasoningStep& s : graph.nodes) {
        std::string label = std::to_string(s.index) + ": " + s.text;
        if (graph.beliefs) {
            label += " (P=" + fixed((*graph.beliefs)[s.index], 2) + ")";
        }
        os << "  n" << s.index << " [label=\"" << dot_escape(label) << "\"";
        if (s.is_final) {
            os << ", peripheries=2";
        }
        os << "];\n";
    }
    for (const Edge& e : graph.edges) {
        std::string label(to_string(e.label));
        label += "/" + (e.trust ? fixed(*e.trust, 2) : std::string("?"));
        os << "  n" << e.source << " -> n" << e.target << " [label=\"" << dot_escape(label)
           << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace toth
