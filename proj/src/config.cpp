#include "toth/config.hpp"

#include "toth/error.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace toth {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// Drops a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line)
{
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

std::string unquote(std::string_view value, std::size_t line_no)
{
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
        std::string out;
        for (std::size_t i = 1; i + 1 < value.size(); ++i) {
            if (value[i] == '\\' && i + 2 < value.size()) {
                ++i;
                out += value[i] == 'n' ? '\n' : value[i] == 't' ? '\t' : value[i];
            } else {
                out += value[i];
            }
        }
        return out;
    }
    if (!value.empty() && value.front() == '"') {
        throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": unterminated string");
    }
    return std::string(value);
}

} // namespace

ConfigValues parse_config_text(std::string_view text)
{
    ConfigValues values;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = trim(strip_comment(text.substr(pos, eol - pos)));
        pos = eol + 1;
        ++line_no;
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": bad section header");
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": expected key = value");
        }
        std::string key(trim(line.substr(0, eq)));
        if (key.empty()) {
            throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": empty key");
        }
        if (!section.empty()) key = section + "." + key;
        values[key] = unquote(trim(line.substr(eq + 1)), line_no);
    }
    return values;
}

ConfigValues read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ConfigError, "cannot open config file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected)
{
    throw Error(ErrorCode::ConfigError, key + " = '" + value + "' is not " + expected);
}

double to_double(const std::string& key, const std::string& value)
{
    try {
        std::size_t used = 0;
        double d = std::stod(value, &used);
        if (used == value.size()) return d;
    } catch (const std::exception&) {
    }
    bad_value(key, value, "a number");
}

long long to_integer(const std::string& key, const std::string& value)
{
    long long v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value, "an integer");
    return v;
}

bool to_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    bad_value(key, value, "true/false");
}

std::vector<AgentStyle> to_styles(const std::string& key, const std::string& value)
{
    std::vector<AgentStyle> styles;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto style = parse_style(trim(item));
        if (!style) bad_value(key, value, "a comma-separated list of styles");
        styles.push_back(*style);
    }
    if (styles.empty()) bad_value(key, value, "a comma-separated list of styles");
    return styles;
}

using Setter = std::function<void(AppConfig&, const std::string&, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& setters()
{
    static const std::vector<std::pair<std::string, Setter>> table = {
        {"llm.endpoint", [](AppConfig& c, auto&, auto& v) { c.llm.endpoint = v; }},
        {"llm.model", [](AppConfig& c, auto&, auto& v) { c.llm.model = v; }},
        {"llm.temperature", [](AppConfig& c, auto& k, auto& v) { c.llm.temperature = to_double(k, v); }},
        {"llm.max_tokens", [](AppConfig& c, auto& k, auto& v) { c.llm.max_tokens = static_cast<int>(to_integer(k, v)); }},
        {"llm.timeout_ms", [](AppConfig& c, auto& k, auto& v) { c.llm.timeout_ms = static_cast<long>(to_integer(k, v)); }},
        {"llm.seed", [](AppConfig& c, auto& k, auto& v) {
             long long s = to_integer(k, v);
             if (s < 0) bad_value(k, v, "a non-negative integer");
             c.llm.seed = static_cast<std::uint64_t>(s);
         }},
        {"nli.endpoint", [](AppConfig& c, auto&, auto& v) { c.nli.endpoint = v; }},
        {"nli.timeout_ms", [](AppConfig& c, auto& k, auto& v) { c.nli.timeout_ms = static_cast<long>(to_integer(k, v)); }},
        {"nli.calibration.entailment", [](AppConfig& c, auto& k, auto& v) { c.nli.calibration.entailment = to_double(k, v); }},
        {"nli.calibration.neutral", [](AppConfig& c, auto& k, auto& v) { c.nli.calibration.neutral = to_double(k, v); }},
        {"nli.calibration.contradiction", [](AppConfig& c, auto& k, auto& v) { c.nli.calibration.contradiction = to_double(k, v); }},
        {"pipeline.window", [](AppConfig& c, auto& k, auto& v) {
             long long w = to_integer(k, v);
             if (w < 1) bad_value(k, v, "a positive integer");
             c.pipeline.window = static_cast<std::size_t>(w);
         }},
        {"pipeline.prior", [](AppConfig& c, auto& k, auto& v) { c.pipeline.prior = to_double(k, v); }},
        {"pipeline.entropy_log_base", [](AppConfig& c, auto& k, auto& v) {
             if (v == "2") c.pipeline.entropy_log_base = LogBase::Two;
             else if (v == "e") c.pipeline.entropy_log_base = LogBase::Natural;
             else bad_value(k, v, "'2' or 'e'");
         }},
        {"pipeline.tie_break", [](AppConfig& c, auto& k, auto& v) { c.pipeline.tie_break = to_styles(k, v); }},
        {"pipeline.parallel_agents", [](AppConfig& c, auto& k, auto& v) { c.pipeline.parallel_agents = to_bool(k, v); }},
        {"harness.self_consistency_n", [](AppConfig& c, auto& k, auto& v) { c.harness.self_consistency_n = static_cast<int>(to_integer(k, v)); }},
        {"harness.concurrency", [](AppConfig& c, auto& k, auto& v) {
             long long n = to_integer(k, v);
             if (n < 1) bad_value(k, v, "a positive integer");
             c.harness.concurrency = static_cast<std::size_t>(n);
         }},
        {"harness.cot_temperature", [](AppConfig& c, auto& k, auto& v) { c.harness.cot_temperature = to_double(k, v); }},
        {"stub.fixtures", [](AppConfig& c, auto&, auto& v) { c.stub_fixtures = v; }},
    };
    return table;
}

void apply(AppConfig& config, const ConfigValues& values)
{
    for (const auto& [key, value] : values) {
        bool matched = false;
        for (const auto& [name, set] : setters()) {
            if (name == key) {
                set(config, key, value);
                matched = true;
                break;
            }
        }
        if (!matched) {
            throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");
        }
    }
}

} // namespace

const std::vector<std::string>& known_config_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& [name, _] : setters()) out.push_back(name);
        return out;
    }();
    return keys;
}

void AppConfig::validate() const
{
    nli.calibration.validate();
    if (!(pipeline.prior >= 0.0 && pipeline.prior <= 1.0)) {
        throw Error(ErrorCode::ConfigError, "pipeline.prior must lie in [0,1]");
    }
    if (llm.temperature < 0.0 || harness.cot_temperature < 0.0) {
        throw Error(ErrorCode::ConfigError, "temperatures must be non-negative");
    }
    if (llm.max_tokens < 1) {
        throw Error(ErrorCode::ConfigError, "llm.max_tokens must be at least 1");
    }
    if (llm.timeout_ms < 1 || nli.timeout_ms < 1) {
        throw Error(ErrorCode::ConfigError, "timeouts must be positive");
    }
    if (harness.self_consistency_n < 1) {
        throw Error(ErrorCode::ConfigError, "harness.self_consistency_n must be at least 1");
    }
}

AppConfig resolve_config(const ConfigValues& file, const ConfigValues& overrides)
{
    AppConfig config;
    apply(config, file);
    apply(config, overrides);
    config.validate();
    return config;
}

PipelineConfig pipeline_config(const AppConfig& config)
{
    PipelineConfig p;
    p.decoding = DecodingConfig{config.llm.temperature, config.llm.max_tokens, config.llm.seed};
    p.calibration = config.nli.calibration;
    p.window = config.pipeline.window;
    p.prior = config.pipeline.prior;
    p.log_base = config.pipeline.entropy_log_base;
    p.tie_order = config.pipeline.tie_break;
    p.parallel_agents = config.pipeline.parallel_agents;
    return p;
}

HarnessConfig harness_config(const AppConfig& config)
{
    HarnessConfig h;
    h.pipeline = pipeline_config(config);
    h.cot_decoding = DecodingConfig{config.harness.cot_temperature, config.llm.max_tokens, config.llm.seed};
    h.sc_decoding = DecodingConfig{config.llm.temperature, config.llm.max_tokens, config.llm.seed};
    h.sc_samples = config.harness.self_consistency_n;
    h.concurrency = config.harness.concurrency;
    return h;
}

} // namespace toth
