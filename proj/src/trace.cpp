#include "toth/trace.hpp"

#include "toth/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>

namespace toth {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s)
{
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

struct Marker {
    std::size_t start = 0;         // first character of the marker
    std::size_t content_begin = 0; // first character after the delimiter
    long number = 0;
    bool at_line_start = false;
};

bool starts_line(std::string_view text, std::size_t pos)
{
    while (pos > 0) {
        char c = text[pos - 1];
        if (c == '\n') return true;
        if (c != ' ' && c != '\t' && c != '\r') return false;
        --pos;
    }
    return true;
}

std::optional<Marker> match_marker(std::string_view text, std::size_t pos)
{
    std::size_t i = pos;
    if (text.size() - i >= 4 && lower(text.substr(i, 4)) == "step") {
        std::size_t j = i + 4;
        std::size_t k = j;
        while (k < text.size() && (text[k] == ' ' || text[k] == '\t')) ++k;
        if (k > j && k < text.size() && is_digit(text[k])) {
            i = k;
        }
    }
    std::size_t digits_begin = i;
    while (i < text.size() && is_digit(text[i]) && i - digits_begin < 6) ++i;
    if (i == digits_begin || i >= text.size()) return std::nullopt;
    if (is_digit(text[i])) return std::nullopt;
    char delim = text[i];
    if (delim != '.' && delim != ')' && delim != ':') return std::nullopt;
    ++i;
    if (i < text.size() && !is_space(text[i])) return std::nullopt;

    Marker m;
    m.start = pos;
    m.content_begin = i;
    std::from_chars(text.data() + digits_begin, text.data() + (i - 1), m.number);
    m.at_line_start = starts_line(text, pos);
    return m;
}

std::vector<Marker> find_markers(std::string_view text)
{
    std::vector<Marker> accepted;
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (pos == 0 || is_space(text[pos - 1])) {
            if (auto m = match_marker(text, pos)) {
                bool take = accepted.empty() ? (m->number == 1 || m->at_line_start)
                                             : m->number == accepted.back().number + 1;
                if (take) {
                    accepted.push_back(*m);
                    pos = m->content_begin;
                    continue;
                }
            }
        }
        ++pos;
    }
    return accepted;
}

bool mentions_final_answer(std::string_view text)
{
    return lower(text).find("final answer") != std::string::npos;
}

} // namespace

ParsedTrace parse_trace(std::string_view raw_text)
{
    ParsedTrace trace;
    trace.raw_text = std::string(raw_text);
    if (trim(raw_text).empty()) {
        throw Error(ErrorCode::EmptyTrace, "completion is blank");
    }

    const std::vector<Marker> markers = find_markers(raw_text);
    if (markers.empty()) {
        trace.steps.push_back(ReasoningStep{0, std::string(trim(raw_text)), true});
        return trace;
    }

    for (std::size_t k = 0; k < markers.size(); ++k) {
        std::size_t end = k + 1 < markers.size() ? markers[k + 1].start : raw_text.size();
        std::string_view body =
            trim(raw_text.substr(markers[k].content_begin, end - markers[k].content_begin));
        if (body.empty()) {
            continue;
        }
        trace.steps.push_back(ReasoningStep{trace.steps.size(), std::string(body), false});
    }
    if (trace.steps.empty()) {
        throw Error(ErrorCode::EmptyTrace, "numbered markers carry no text");
    }
    ReasoningStep& last = trace.steps.back();
    last.is_final = trace.steps.size() == 1 || mentions_final_answer(last.text);
    return trace;
}

std::string render_trace(const ParsedTrace& trace)
{
    std::string out;
    for (const ReasoningStep& step : trace.steps) {
        if (!out.empty()) out += '\n';
        out += std::to_string(step.index + 1);
        out += ". ";
        out += step.text;
    }
    return out;
}

std::string_view to_string(AnswerKind kind) noexcept
{
    switch (kind) {
    case AnswerKind::Boolean: return "boolean";
    case AnswerKind::Integer: return "integer";
    case AnswerKind::Text: return "text";
    }
    return "text";
}

AnswerKind parse_kind(std::string_view text)
{
    std::string k = lower(trim(text));
    if (k == "boolean" || k == "bool") return AnswerKind::Boolean;
    if (k == "integer" || k == "int") return AnswerKind::Integer;
    if (k == "text") return AnswerKind::Text;
    throw Error(ErrorCode::UnknownKind, "unknown answer kind '" + std::string(text) + "'");
}

namespace {

std::optional<bool> boolean_word(std::string_view word)
{
    std::string w = lower(word);
    if (w == "yes" || w == "true") return true;
    if (w == "no" || w == "false") return false;
    return std::nullopt;
}

std::optional<Answer> last_boolean(std::string_view text)
{
    std::optional<Answer> found;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_alpha(text[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && is_alpha(text[j])) ++j;
        if (auto b = boolean_word(text.substr(i, j - i))) {
            found = Answer::boolean(*b);
        }
        i = j;
    }
    return found;
}

// Reads a numeric literal starting at text[i] (a digit). Returns the parsed
// value when the literal is an integer, and advances i past the literal.
std::optional<std::int64_t> read_integer(std::string_view text, std::size_t& i)
{
    std::string digits;
    std::size_t j = i;
    while (j < text.size() && is_digit(text[j])) digits += text[j++];

    // Thousands groups: ",ddd" not followed by another digit.
    if (digits.size() <= 3) {
        while (j + 3 < text.size() && text[j] == ',' && is_digit(text[j + 1]) &&
               is_digit(text[j + 2]) && is_digit(text[j + 3]) &&
               (j + 4 >= text.size() || !is_digit(text[j + 4]))) {
            digits.append(text.substr(j + 1, 3));
            j += 4;
        }
    }
    bool integral = true;
    if (j + 1 < text.size() && text[j] == '.' && is_digit(text[j + 1])) {
        std::size_t k = j + 1;
        bool zero_fraction = true;
        while (k < text.size() && is_digit(text[k])) {
            zero_fraction = zero_fraction && text[k] == '0';
            ++k;
        }
        integral = zero_fraction;
        j = k;
    }
    bool negative = i > 0 && text[i - 1] == '-' &&
                    (i < 2 || !std::isalnum(static_cast<unsigned char>(text[i - 2])));
    i = j;
    if (!integral) return std::nullopt;
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
    return negative ? -value : value;
}

std::optional<Answer> last_integer(std::string_view text)
{
    std::optional<Answer> found;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_digit(text[i])) {
            ++i;
            continue;
        }
        bool glued = i > 0 && (is_alpha(text[i - 1]) || text[i - 1] == '_');
        auto value = read_integer(text, i);
        if (value && !glued) {
            found = Answer::integer(*value);
        }
    }
    return found;
}

Answer text_answer(std::string_view text)
{
    std::string low = lower(text);
    std::size_t at = low.rfind("answer:");
    std::string_view tail = at == std::string::npos ? text : text.substr(at + 7);
    tail = trim(tail);
    while (!tail.empty() && (tail.back() == '.' || tail.back() == '!')) tail.remove_suffix(1);
    return Answer{AnswerKind::Text, lower(trim(tail))};
}

} // namespace

Answer extract_answer(std::string_view step_text, AnswerKind kind)
{
    std::optional<Answer> found;
    switch (kind) {
    case AnswerKind::Boolean: found = last_boolean(step_text); break;
    case AnswerKind::Integer: found = last_integer(step_text); break;
    case AnswerKind::Text:
        if (!trim(step_text).empty()) found = text_answer(step_text);
        break;
    }
    if (!found || (kind == AnswerKind::Text && found->value.empty())) {
        throw Error(ErrorCode::AnswerNotFound,
                    "no " + std::string(to_string(kind)) + " answer in '" +
                        std::string(step_text.substr(0, 80)) + "'");
    }
    return *found;
}

Answer parse_gold(std::string_view text, AnswerKind kind)
{
    std::string_view t = trim(text);
    auto reject = [&] {
        return Error(ErrorCode::MalformedRecord, "answer '" + std::string(text) +
                                                     "' is not a valid " +
                                                     std::string(to_string(kind)));
    };
    switch (kind) {
    case AnswerKind::Boolean:
        if (auto b = boolean_word(t)) return Answer::boolean(*b);
        throw reject();
    case AnswerKind::Integer: {
        std::string digits;
        bool negative = !t.empty() && t.front() == '-';
        if (negative) t.remove_prefix(1);
        for (char c : t) {
            if (c == ',') continue;
            if (!is_digit(c)) throw reject();
            digits += c;
        }
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (digits.empty() || ec != std::errc{}) throw reject();
        return Answer::integer(negative ? -value : value);
    }
    case AnswerKind::Text:
        if (t.empty()) throw reject();
        return Answer{AnswerKind::Text, lower(t)};
    }
    throw reject();
}

} // namespace toth
