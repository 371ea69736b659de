#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace toth {

/// Reasoning paradigm an agent is prompted with. Enumerator order is the
/// default selection tie-break order.
enum class AgentStyle { Abductive = 0, Deductive = 1, Inductive = 2 };

inline constexpr std::array<AgentStyle, 3> kAllStyles = {
    AgentStyle::Abductive, AgentStyle::Deductive, AgentStyle::Inductive};

/// Lowercase keyword substituted into prompts ("abductive", ...).
std::string_view style_keyword(AgentStyle style) noexcept;
std::optional<AgentStyle> parse_style(std::string_view keyword) noexcept;

} // namespace toth
