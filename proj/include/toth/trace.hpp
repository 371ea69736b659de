#pragma once

#include "toth/graph.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace toth {

struct ParsedTrace {
    std::vector<ReasoningStep> steps;
    std::string raw_text;
};

/// Splits a completion into numbered steps.
///
/// A marker is an optional "Step " prefix, digits, one of `.`, `)` or `:`,
/// then whitespace or end of text, appearing at the start of the text or
/// after whitespace. The first marker must open a line or be numbered 1; each
/// later marker must continue the count by one, which keeps "costs 5. Then"
/// from splitting a step. Text before the first marker is dropped. The last
/// step is flagged final when it mentions "final answer"; a trace without
/// markers becomes a single final step. Throws EmptyTrace on blank input.
ParsedTrace parse_trace(std::string_view raw_text);

/// "1. text\n2. text\n..." rendering accepted back by parse_trace.
std::string render_trace(const ParsedTrace& trace);

enum class AnswerKind { Boolean, Integer, Text };

std::string_view to_string(AnswerKind kind) noexcept;
/// Throws UnknownKind.
AnswerKind parse_kind(std::string_view text);

/// Normalized answer. Booleans are "yes"/"no"; integers are the decimal
/// rendering of a signed 64-bit value; text is trimmed and lowercased.
struct Answer {
    AnswerKind kind = AnswerKind::Text;
    std::string value;

    static Answer boolean(bool yes) { return {AnswerKind::Boolean, yes ? "yes" : "no"}; }
    static Answer integer(std::int64_t v) { return {AnswerKind::Integer, std::to_string(v)}; }

    bool operator==(const Answer&) const = default;
};

/// Last yes/no/true/false word (boolean) or last integer literal, with
/// thousands separators removed (integer). Decimals are not integer literals.
/// Throws AnswerNotFound.
Answer extract_answer(std::string_view step_text, AnswerKind kind);

/// Parses a gold label under `kind`; the accepted spellings are the same as
/// extract_answer's but the whole string must be the token. Throws
/// MalformedRecord.
Answer parse_gold(std::string_view text, AnswerKind kind);

} // namespace toth
