#include "toth/style.hpp"

namespace toth {

std::string_view style_keyword(AgentStyle style) noexcept
{
    switch (style) {
    case AgentStyle::Abductive: return "abductive";
    case AgentStyle::Deductive: return "deductive";
    case AgentStyle::Inductive: return "inductive";
    }
    return "abductive";
}

std::optional<AgentStyle> parse_style(std::string_view keyword) noexcept
{
    for (AgentStyle style : kAllStyles) {
        if (style_keyword(style) == keyword) {
            return style;
        }
    }
    return std::nullopt;
}

} // namespace toth
